#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dpl/rational.hpp"

namespace dpl {

/// Finitely supported probability mass function on Z with exact rational
/// masses, stored on a contiguous window [offset, offset + size).
///
/// Invariants: masses are non-negative, sum to exactly one, and the first
/// and last entries are strictly positive. Zeros are allowed inside.
class Pmf {
 public:
  /// Validates and trims. Throws Error(kNegativeMass) or NotNormalizedError.
  static Pmf make(Point offset, std::vector<Rational> masses);

  /// Point mass at x.
  static Pmf dirac(Point x);
  /// Uniform on {lo, ..., hi}.
  static Pmf uniform(Point lo, Point hi);

  Point offset() const noexcept { return offset_; }
  Point min_point() const noexcept { return offset_; }
  Point max_point() const noexcept {
    return offset_ + static_cast<Point>(masses_.size()) - 1;
  }
  std::size_t width() const noexcept { return masses_.size(); }
  std::span<const Rational> masses() const noexcept { return masses_; }

  /// Mass at x; zero outside the window.
  Rational mass(Point x) const;
  bool charges(Point x) const;
  /// Number of points with positive mass.
  std::size_t support_size() const;

  Rational mean() const;
  Pmf translated(Point shift) const;

  friend bool operator==(const Pmf& a, const Pmf& b);

 private:
  Pmf(Point offset, std::vector<Rational> masses)
      : offset_(offset), masses_(std::move(masses)) {}

  Point offset_ = 0;
  std::vector<Rational> masses_;
};

/// Real-valued function on a finite window of Z. Values may be -infinity,
/// which stands for "zero weight" wherever the function is exponentiated.
struct RealFn {
  Point offset = 0;
  std::vector<double> values;

  static RealFn make(Point offset, std::vector<double> values);

  Point min_point() const noexcept { return offset; }
  Point max_point() const noexcept {
    return offset + static_cast<Point>(values.size()) - 1;
  }
  bool contains(Point x) const noexcept {
    return x >= min_point() && x <= max_point();
  }
  double at(Point x) const { return values.at(static_cast<std::size_t>(x - offset)); }
};

/// Reference measure for the log-Laplace duality: either counting measure on
/// the function's window or a probability mass function.
class Base {
 public:
  static Base counting() { return Base(); }
  static Base measure(Pmf pmf) { return Base(std::move(pmf)); }

  bool is_counting() const noexcept { return !has_pmf_; }
  /// Weight of x given the window of the function being integrated.
  double weight(Point x) const;
  const Pmf& pmf() const;

 private:
  Base() = default;
  explicit Base(Pmf pmf) : has_pmf_(true), pmf_(std::move(pmf)) {}

  bool has_pmf_ = false;
  Pmf pmf_ = Pmf::dirac(0);
};

/// H(nu | counting) = sum nu log nu (natural log). Always <= 0.
double entropy_rel_counting(const Pmf& nu);

/// H(nu | mu) = sum nu log(nu / mu); +infinity when nu charges a mu-null point.
double relative_entropy(const Pmf& nu, const Pmf& mu);

/// H(nu | base), dispatching on the base kind.
double relative_entropy(const Pmf& nu, const Base& base);

/// log sum_x e^{phi(x)} base(x) over the window of phi; phi is -infinity
/// outside its window.
double log_laplace(const RealFn& phi, const Base& base);

/// sum_x phi(x) nu(x). Requires supp nu inside the window of phi.
double integrate(const RealFn& phi, const Pmf& nu);

/// Gibbs measure nu*(x) proportional to e^{phi(x)} base(x), rationalized
/// exactly so it is a valid Pmf; the variational gap at it is below 1e-10.
Pmf dual_optimizer(const RealFn& phi, const Base& base);

/// log_laplace(phi) - [integral phi d nu - H(nu | base)]; non-negative up to
/// rounding for every nu, zero at the Gibbs measure.
double dual_gap(const RealFn& phi, const Base& base, const Pmf& nu);

/// Closest rational with denominator <= max_den (continued fractions).
Rational rationalize(double value, unsigned long max_den);

}  // namespace dpl
