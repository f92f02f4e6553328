#include "dpl/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "dpl/coupling.hpp"
#include "dpl/displacement.hpp"
#include "dpl/error.hpp"
#include "dpl/fourfunctions.hpp"
#include "dpl/io.hpp"
#include "dpl/random.hpp"

namespace dpl {

std::string_view to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::kLeq1: return "leq1";
    case CheckKind::kFourFunctions: return "4ft";
    case CheckKind::kLattice: return "lattice";
    case CheckKind::kTransportEntropy: return "te";
    case CheckKind::kDuality: return "duality";
  }
  return "?";
}

CheckKind parse_check_kind(std::string_view name) {
  for (auto k : {CheckKind::kLeq1, CheckKind::kFourFunctions, CheckKind::kLattice,
                 CheckKind::kTransportEntropy, CheckKind::kDuality}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::kConfigError, "unknown check '" + std::string(name) + "'");
}

void validate(const CampaignConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorKind::kConfigError, "trials must be >= 1");
  if (cfg.mass_resolution < 2) throw Error(ErrorKind::kConfigError, "resolution must be >= 2");
  if (cfg.support_width < 1) throw Error(ErrorKind::kConfigError, "support width must be >= 1");
  if (cfg.cube_dim < 0 || cfg.cube_dim > 12) {
    throw Error(ErrorKind::kConfigError, "cube dimension must be in [0, 12]");
  }
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<MuFamily> reference_families() {
  std::vector<MuFamily> out;
  out.push_back({"geometric", LogWeights::geometric(20), -20, 20});
  out.push_back({"gaussian", LogWeights::gaussian(6), -6, 6});
  {
    // binomial(16, 1/3): C(16,k) 2^(16-k) / 3^16
    std::vector<Rational> m;
    mpz_class c = 1, total;
    mpz_ui_pow_ui(total.get_mpz_t(), 3, 16);
    for (unsigned k = 0; k <= 16; ++k) {
      mpz_class pow2 = mpz_class(1) << (16 - k);
      m.emplace_back(c * pow2, total);
      m.back().canonicalize();
      c = c * (16 - k) / (k + 1);
    }
    out.push_back({"binomial", Pmf::make(0, std::move(m)), 0, 16});
  }
  {
    std::vector<Rational> w;
    for (Point x = -15; x <= 15; ++x) w.emplace_back(mpz_class(-x * x), mpz_class(10));
    for (auto& q : w) q.canonicalize();
    out.push_back({"quadratic", LogWeights::make(-15, std::move(w)), -15, 15});
  }
  out.push_back({"uniform", Pmf::uniform(0, 20), 0, 20});
  return out;
}

namespace {

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

std::string hex_digest(const std::string& canonical) {
  return fmt::format("{:016x}", fnv1a64(canonical));
}

struct TrialContext {
  const CampaignConfig& cfg;
  const std::vector<MuFamily>& families;
};

Record leq1_trial(const TrialContext& ctx, Rng& rng, long index) {
  PmfSampler s;
  s.max_width = ctx.cfg.support_width;
  s.resolution = ctx.cfg.mass_resolution;
  s.offset_lo = -ctx.cfg.support_width;
  s.offset_hi = ctx.cfg.support_width;
  s.hole_probability = 0.2;
  Pmf nu0 = random_pmf(rng, s);
  Pmf nu1 = random_pmf(rng, s);
  auto mp = midpoint_measures(nu0, nu1);
  auto gap = displacement_gap(mp);
  std::size_t largest = 0;
  for (const auto& ls : level_sets(mp.pi)) largest = std::max(largest, ls.pairs.size());

  Record r;
  r.index = index;
  r.digest = hex_digest(emit_pmf(nu0) + emit_pmf(nu1));
  r.values = {{"p", format_rational(gap.p)},
              {"gap", fmt_double(gap.gap)},
              {"max_level_set", std::to_string(largest)}};
  r.key = 1.0 - to_double(gap.p);
  if (gap.p > 1) {
    r.pass = false;
    r.witness = "P = " + format_rational(gap.p) + " exceeds 1";
  } else if (gap.gap < -1e-12) {
    r.pass = false;
    r.witness = "entropy gap " + fmt_double(gap.gap);
  } else if (largest > 2) {
    r.pass = false;
    r.witness = "level set of size " + std::to_string(largest);
  }
  return r;
}

Record four_functions_trial(const TrialContext& ctx, Rng& rng, long index) {
  int n = ctx.cfg.cube_dim > 0 ? ctx.cfg.cube_dim : static_cast<int>(index % 4) + 1;
  auto q = random_4ft_quadruple(rng, n, ctx.cfg.mass_resolution);
  auto hyp = check_4ft_hypothesis(q.f, q.g, q.h, q.k);
  auto con = check_4ft_conclusion(q.f, q.g, q.h, q.k);
  Record r;
  r.index = index;
  r.digest = hex_digest(emit_cubefn(q.f) + emit_cubefn(q.g) + emit_cubefn(q.h) + emit_cubefn(q.k));
  r.values = {{"n", std::to_string(n)},
              {"lhs", format_rational(con.lhs)},
              {"rhs", format_rational(con.rhs)}};
  r.key = to_double(con.rhs - con.lhs) / to_double(con.rhs);
  if (!hyp.holds) {
    r.pass = false;
    r.witness = fmt::format("generated quadruple violates the hypothesis at ({}, {})",
                            hyp.witness->first, hyp.witness->second);
  } else if (!con.holds) {
    r.pass = false;
    r.witness = "conclusion fails";
  }
  return r;
}

Record lattice_trial(const TrialContext& ctx, Rng& rng, long index) {
  auto binary = [&] {
    Rational a = random_unit_rational(rng, ctx.cfg.mass_resolution);
    if (rng.coin(0.1)) a = 1;
    return Pmf::make(0, {a, Rational(1 - a)});
  };
  Pmf nu1 = binary();
  Pmf nu2 = binary();
  auto lc = lattice_coupling_binary(nu1, nu2);
  const auto& pi = lc.pi;
  Rational a1 = nu1.mass(0), a2 = nu2.mass(0);
  bool ok;
  if (a2 <= a1) {
    ok = pi.mass(0, 0) == a2 && sgn(pi.mass(1, 0)) == 0 && pi.mass(0, 1) == a1 - a2 &&
         pi.mass(1, 1) == nu1.mass(1) && lc.sorted == pi;
  } else {
    ok = pi.mass(0, 0) == a1 && pi.mass(1, 1) == nu2.mass(1) && sgn(pi.mass(0, 1)) == 0 &&
         pi.mass(1, 0) == a2 - a1 && lc.sorted.mass(0, 1) == a2 - a1 &&
         sgn(lc.sorted.mass(1, 0)) == 0 && lc.sorted.marginal0() == nu2 &&
         lc.sorted.marginal1() == nu1;
  }
  Record r;
  r.index = index;
  r.digest = hex_digest(emit_pmf(nu1) + emit_pmf(nu2));
  r.values = {{"nu1_0", format_rational(a1)},
              {"nu2_0", format_rational(a2)},
              {"case", a2 <= a1 ? "i" : "ii"}};
  r.key = ok ? 0.0 : -1.0;
  if (!ok) {
    r.pass = false;
    r.witness = "coupling masses differ from the closed formulas:\n" + pi.dump();
  }
  return r;
}

Record te_trial(const TrialContext& ctx, Rng& rng, long index) {
  std::size_t fam_index = ctx.cfg.mu_family >= 0
                              ? static_cast<std::size_t>(ctx.cfg.mu_family)
                              : static_cast<std::size_t>(index) % ctx.families.size();
  const auto& fam = ctx.families.at(fam_index);
  long window = fam.hi - fam.lo + 1;
  PmfSampler s;
  s.max_width = std::min({ctx.cfg.support_width, window, 12L});
  s.resolution = ctx.cfg.mass_resolution;
  s.hole_probability = 0.2;
  auto draw = [&] {
    PmfSampler local = s;
    local.offset_lo = fam.lo;
    local.offset_hi = fam.hi - s.max_width + 1;
    return random_pmf(rng, local);
  };
  Pmf nu0 = draw();
  Pmf nu1 = draw();
  auto check = std::visit(
      [&](const auto& mu) { return transport_entropy_check(mu, nu0, nu1); }, fam.mu);
  Record r;
  r.index = index;
  r.digest = hex_digest(fam.name + "\n" + emit_pmf(nu0) + emit_pmf(nu1));
  r.values = {{"mu", fam.name},
              {"lhs", check.lhs ? fmt_double(*check.lhs) : "inf"},
              {"rhs", fmt_double(check.rhs)}};
  r.key = check.lhs ? check.rhs - *check.lhs : std::numeric_limits<double>::infinity();
  if (!check.holds) {
    r.pass = false;
    r.witness = fmt::format("T = {} > H0 + H1 = {}", *check.lhs, check.rhs);
  }
  return r;
}

Record duality_trial(const TrialContext& ctx, Rng& rng, long index) {
  long width = rng.uniform(1, std::min(ctx.cfg.support_width, 30L));
  Point offset = rng.uniform(-10, 10);
  std::vector<double> phi(static_cast<std::size_t>(width));
  for (auto& v : phi) v = -5.0 + 10.0 * rng.unit();
  RealFn fn = RealFn::make(offset, phi);
  bool counting = index % 2 == 0;
  Base base = counting ? Base::counting() : Base::measure(Pmf::uniform(offset, offset + width - 1));
  double gap = dual_gap(fn, base, dual_optimizer(fn, base));

  int n = static_cast<int>(index % 10) + 1;
  std::vector<double> h(std::size_t{1} << n);
  for (auto& v : h) v = -3.0 + 6.0 * rng.unit();
  double recursive = phi_power(phi_entropy, CubeFn<double>::make(n, h));
  double top = *std::max_element(h.begin(), h.end());
  long double acc = 0;
  for (double v : h) acc += std::exp(static_cast<long double>(v - top));
  double direct = top + static_cast<double>(std::log(acc / static_cast<long double>(h.size())));

  std::string canonical;
  for (double v : phi) canonical += fmt_double(v) + " ";
  canonical += "|";
  for (double v : h) canonical += fmt_double(v) + " ";

  Record r;
  r.index = index;
  r.digest = hex_digest(canonical);
  r.values = {{"width", std::to_string(width)},
              {"base", counting ? "counting" : "uniform"},
              {"dual_gap", fmt_double(gap)},
              {"n", std::to_string(n)},
              {"recursion_err", fmt_double(std::abs(recursive - direct))}};
  r.key = -std::abs(gap);
  if (std::abs(gap) > 1e-10) {
    r.pass = false;
    r.witness = "dual gap " + fmt_double(gap);
  } else if (std::abs(recursive - direct) > 1e-9) {
    r.pass = false;
    r.witness = fmt::format("recursion {} vs direct {}", recursive, direct);
  }
  return r;
}

Record run_trial(const TrialContext& ctx, long index) {
  Rng rng = Rng::derived(ctx.cfg.seed, static_cast<std::uint64_t>(index));
  switch (ctx.cfg.check) {
    case CheckKind::kLeq1: return leq1_trial(ctx, rng, index);
    case CheckKind::kFourFunctions: return four_functions_trial(ctx, rng, index);
    case CheckKind::kLattice: return lattice_trial(ctx, rng, index);
    case CheckKind::kTransportEntropy: return te_trial(ctx, rng, index);
    case CheckKind::kDuality: return duality_trial(ctx, rng, index);
  }
  throw Error(ErrorKind::kConfigError, "unknown check");
}

std::string_view key_label(CheckKind kind) {
  switch (kind) {
    case CheckKind::kLeq1: return "1 - P";
    case CheckKind::kFourFunctions: return "(rhs - lhs) / rhs";
    case CheckKind::kLattice: return "formula mismatch";
    case CheckKind::kTransportEntropy: return "H0 + H1 - T";
    case CheckKind::kDuality: return "-|dual gap|";
  }
  return "";
}

}  // namespace

Report run_campaign(const CampaignConfig& cfg) {
  validate(cfg);
  auto families = reference_families();
  if (cfg.check == CheckKind::kTransportEntropy && cfg.mu_family >= 0 &&
      static_cast<std::size_t>(cfg.mu_family) >= families.size()) {
    throw Error(ErrorKind::kConfigError, "mu family index out of range");
  }
  TrialContext ctx{cfg, families};
  Report report{cfg, std::vector<Record>(static_cast<std::size_t>(cfg.trials)), {}};

  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<long>(workers, cfg.trials));
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (long i = next++; i < cfg.trials && !failed; i = next++) {
      try {
        report.records[static_cast<std::size_t>(i)] = run_trial(ctx, i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);

  auto& s = report.summary;
  s.key_label = key_label(cfg.check);
  for (const auto& r : report.records) {
    (r.pass ? s.passes : s.failures)++;
    if (!s.tightest_index || r.key < s.tightest_key) {
      s.tightest_index = r.index;
      s.tightest_key = r.key;
    }
    if (cfg.check == CheckKind::kLeq1) {
      for (const auto& [name, value] : r.values) {
        if (name == "max_level_set" && value == "2") {
          if (s.counters["level_set_size_2"]++ == 0) s.first_index["level_set_size_2"] = r.index;
        }
      }
    }
  }
  return report;
}

std::string to_json(const Report& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  const auto& c = report.config;
  j["config"] = {{"seed", c.seed},
                 {"trials", c.trials},
                 {"support_width", c.support_width},
                 {"mass_resolution", c.mass_resolution},
                 {"check", std::string(to_string(c.check))}};
  const auto& s = report.summary;
  ordered_json summary = {{"passes", s.passes}, {"failures", s.failures}};
  summary["tightest"] = {{"label", s.key_label},
                         {"index", s.tightest_index ? ordered_json(*s.tightest_index) : ordered_json()},
                         {"value", fmt_double(s.tightest_key)}};
  for (const auto& [name, count] : s.counters) {
    summary["counters"][name] = {{"count", count}, {"first_index", s.first_index.at(name)}};
  }
  j["summary"] = summary;
  ordered_json records = ordered_json::array();
  for (const auto& r : report.records) {
    ordered_json rec = {{"index", r.index}, {"digest", r.digest}, {"pass", r.pass}};
    ordered_json values = ordered_json::object();
    for (const auto& [k, v] : r.values) values[k] = v;
    rec["values"] = values;
    if (!r.pass) rec["witness"] = r.witness;
    records.push_back(rec);
  }
  j["records"] = records;
  return j.dump(2) + "\n";
}

std::string to_csv(const Report& report) {
  std::string out = "index,digest,pass";
  if (!report.records.empty()) {
    for (const auto& [k, v] : report.records.front().values) out += "," + k;
  }
  out += ",witness\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  };
  for (const auto& r : report.records) {
    out += fmt::format("{},{},{}", r.index, r.digest, r.pass ? 1 : 0);
    for (const auto& [k, v] : r.values) out += "," + quote(v);
    out += "," + quote(r.witness) + "\n";
  }
  return out;
}

}  // namespace dpl
