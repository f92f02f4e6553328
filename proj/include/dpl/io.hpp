#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "dpl/fourfunctions.hpp"
#include "dpl/measures.hpp"

namespace dpl {

// Text formats. Blank lines and lines starting with '#' are ignored.
//   pmf:     "offset; m0 m1 ..."   (one line, rationals as p/q or decimals)
//   cube fn: one value per line, 2^n lines, index order
//   costs:   "x y value" per line; pairs not listed cost +infinity
// Every parser throws ParseError with the 1-based line number.

Pmf parse_pmf(std::string_view text);
Pmf parse_pmf_file(const std::filesystem::path& path);
/// Canonical form "offset; m0 m1 ...\n".
std::string emit_pmf(const Pmf& nu);

/// Values must be non-negative unless `allow_negative` (log-domain inputs).
CubeFn<Rational> parse_cubefn(std::string_view text, bool allow_negative = false);
CubeFn<Rational> parse_cubefn_file(const std::filesystem::path& path, bool allow_negative = false);
std::string emit_cubefn(const CubeFn<Rational>& fn);

using CostTable = std::map<std::pair<Point, Point>, Rational>;

CostTable parse_cost_table(std::string_view text);
CostTable parse_cost_table_file(const std::filesystem::path& path);
std::string emit_cost_table(const CostTable& table);

/// Whole file as a string; throws Error(kConfigError) when unreadable.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace dpl
