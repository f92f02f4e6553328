#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace dpl {

/// Exact arbitrary-precision rational used for every mass.
using Rational = mpq_class;

/// Integer point of Z.
using Point = std::int64_t;

/// floor((x + y) / 2)
constexpr Point mid_floor(Point x, Point y) noexcept { return (x + y) >> 1; }
/// ceil((x + y) / 2)
constexpr Point mid_ceil(Point x, Point y) noexcept { return (x + y + 1) >> 1; }

/// Parses "p/q", "p" or a plain decimal like "-0.125" into an exact rational.
/// Returns false on malformed input (e.g. "1//2", "1/0", "").
bool parse_rational(std::string_view text, Rational& out);

/// Canonical "p/q" text ("p" when q == 1).
std::string format_rational(const Rational& q);

/// Natural log of a positive rational, accurate for numerators and
/// denominators far beyond double range.
double log_of(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

inline Rational make_rational(long num, unsigned long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace dpl
