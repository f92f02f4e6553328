#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dpl/measures.hpp"
#include "dpl/transport.hpp"

namespace dpl {

enum class CheckKind {
  kLeq1,              ///< P <= 1, entropy gap, level-set sizes
  kFourFunctions,     ///< exact conclusion on generated quadruples
  kLattice,           ///< binary lattice coupling against its closed formulas
  kTransportEntropy,  ///< transport-entropy inequality
  kDuality,           ///< Gibbs dual gap and the Phi^n recursion
};

std::string_view to_string(CheckKind kind);
/// Accepts "leq1", "4ft", "lattice", "te", "duality". Throws Error(kConfigError).
CheckKind parse_check_kind(std::string_view name);

struct CampaignConfig {
  std::uint64_t seed = 1;
  long trials = 100;
  long support_width = 10;
  long mass_resolution = 16;
  CheckKind check = CheckKind::kLeq1;
  /// 0: one worker per hardware thread.
  unsigned threads = 0;
  /// Cube dimension for kFourFunctions; 0 cycles through 1..4.
  int cube_dim = 0;
  /// Reference family index for kTransportEntropy; -1 cycles through all.
  int mu_family = -1;
};

/// Throws Error(kConfigError) unless trials >= 1, resolution >= 2, width >= 1.
void validate(const CampaignConfig& cfg);

struct Record {
  long index = 0;
  std::string digest;  ///< FNV-1a of the canonical input text
  std::vector<std::pair<std::string, std::string>> values;
  bool pass = true;
  std::string witness;  ///< set on failure
  /// Per-check slack (e.g. 1 - P); the summary reports its minimiser.
  double key = 0.0;
};

struct Summary {
  long passes = 0;
  long failures = 0;
  std::string key_label;
  std::optional<long> tightest_index;
  double tightest_key = 0.0;
  /// Named existence counters, e.g. how many instances had a level set of size two.
  std::map<std::string, long> counters;
  std::map<std::string, long> first_index;
};

struct Report {
  CampaignConfig config;
  std::vector<Record> records;  ///< sorted by trial index
  Summary summary;
};

Report run_campaign(const CampaignConfig& cfg);

std::string to_json(const Report& report);
std::string to_csv(const Report& report);

std::uint64_t fnv1a64(std::string_view data);

/// Log-concave reference families used by the transport-entropy campaign.
struct MuFamily {
  std::string name;
  std::variant<Pmf, LogWeights> mu;
  Point lo = 0, hi = 0;  ///< positive window
};

/// geometric K=20, gaussian K=6, binomial(16,1/3), w = -x^2/10 on [-15,15],
/// uniform on [0,20].
std::vector<MuFamily> reference_families();

}  // namespace dpl
