#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dpl/error.hpp"
#include "dpl/random.hpp"
#include "dpl/rational.hpp"

namespace dpl {

/// Point of {0,1}^n packed into an integer: bit i is coordinate i.
using CubeIndex = std::uint32_t;

constexpr CubeIndex meet(CubeIndex x, CubeIndex y) noexcept { return x & y; }
constexpr CubeIndex join(CubeIndex x, CubeIndex y) noexcept { return x | y; }

/// Explicit bit-vector form. Throws Error(kLengthMismatch).
using Bits = std::vector<std::uint8_t>;
Bits meet(const Bits& x, const Bits& y);
Bits join(const Bits& x, const Bits& y);

/// Function on {0,1}^n stored as 2^n values in index order.
template <class T>
class CubeFn {
 public:
  static CubeFn make(int n, std::vector<T> values) {
    if (n < 1 || n > 24) {
      throw Error(ErrorKind::kDimensionMismatch, "cube dimension must be in [1, 24]");
    }
    if (values.size() != (std::size_t{1} << n)) {
      throw Error(ErrorKind::kLengthMismatch, "cube function needs 2^n values");
    }
    return CubeFn(n, std::move(values));
  }

  static CubeFn constant(int n, const T& value) {
    return make(n, std::vector<T>(std::size_t{1} << n, value));
  }

  int dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return values_.size(); }
  const T& operator[](CubeIndex x) const { return values_[x]; }
  const std::vector<T>& values() const noexcept { return values_; }

  /// h^a(x) = h(x, a): fixes the last coordinate.
  CubeFn slice(int a) const {
    if (n_ < 2) throw Error(ErrorKind::kDimensionMismatch, "cannot slice a 1-cube");
    std::size_t half = values_.size() / 2;
    auto first = values_.begin() + static_cast<std::ptrdiff_t>(a ? half : 0);
    return CubeFn(n_ - 1, std::vector<T>(first, first + static_cast<std::ptrdiff_t>(half)));
  }

  T sum() const {
    T acc = T(0);
    for (const auto& v : values_) acc += v;
    return acc;
  }

  template <class F>
  auto map(F&& fn) const {
    using U = decltype(fn(values_[0]));
    std::vector<U> out;
    out.reserve(values_.size());
    for (const auto& v : values_) out.push_back(fn(v));
    return CubeFn<U>::make(n_, std::move(out));
  }

 private:
  CubeFn(int n, std::vector<T> values) : n_(n), values_(std::move(values)) {}

  int n_ = 1;
  std::vector<T> values_;
};

template <class T>
struct HypothesisCheck {
  bool holds = true;
  /// First violating pair (x, y) in index order.
  std::optional<std::pair<CubeIndex, CubeIndex>> witness;
  T lhs = T(0);  ///< f(x) g(y) at the witness
  T rhs = T(0);  ///< h(x^y) k(xvy) at the witness
};

template <class T>
struct ConclusionCheck {
  T lhs = T(0);  ///< sum f * sum g
  T rhs = T(0);  ///< sum h * sum k
  bool holds = true;
};

/// Exhaustive scan of f(x) g(y) <= h(x^y) k(xvy) over all 4^n pairs.
/// Exact for rationals; `rel_tol` only loosens the double comparison.
HypothesisCheck<Rational> check_4ft_hypothesis(const CubeFn<Rational>& f, const CubeFn<Rational>& g,
                                               const CubeFn<Rational>& h, const CubeFn<Rational>& k);
HypothesisCheck<double> check_4ft_hypothesis(const CubeFn<double>& f, const CubeFn<double>& g,
                                             const CubeFn<double>& h, const CubeFn<double>& k,
                                             double rel_tol = 0.0);

ConclusionCheck<Rational> check_4ft_conclusion(const CubeFn<Rational>& f, const CubeFn<Rational>& g,
                                               const CubeFn<Rational>& h, const CubeFn<Rational>& k);
ConclusionCheck<double> check_4ft_conclusion(const CubeFn<double>& f, const CubeFn<double>& g,
                                             const CubeFn<double>& h, const CubeFn<double>& k,
                                             double rel_tol = 0.0);

struct AdditiveCheck {
  bool hypothesis_holds = true;
  std::optional<std::pair<CubeIndex, CubeIndex>> witness;
  double log_lhs = 0.0;  ///< log sum e^h1 + log sum e^h2
  double log_rhs = 0.0;  ///< log sum e^h3 + log sum e^h4
  bool conclusion_holds = true;
  /// Hypothesis decided in exact rational arithmetic.
  bool exact = false;
  /// Verdicts of the additive route and the exponentiated multiplicative
  /// route coincide.
  bool routes_agree = true;

  bool ok() const { return hypothesis_holds && conclusion_holds; }
};

/// h1(x) + h2(y) <= h3(x^y) + h4(xvy) and its exponential conclusion.
/// Float comparisons use a 1e-9 tolerance.
AdditiveCheck check_4ft_additive(const CubeFn<double>& h1, const CubeFn<double>& h2,
                                 const CubeFn<double>& h3, const CubeFn<double>& h4);
/// Same, with the hypothesis checked exactly on rational inputs.
AdditiveCheck check_4ft_additive(const CubeFn<Rational>& h1, const CubeFn<Rational>& h2,
                                 const CubeFn<Rational>& h3, const CubeFn<Rational>& h4);

/// Functional on functions of {0,1}, given by their two values.
using Functional = std::function<double(double u0, double u1)>;

/// log((e^u0 + e^u1) / 2)
double phi_entropy(double u0, double u1);
/// (u0 + u1) / 2
double phi_mean(double u0, double u1);

/// Phi^n(h) = Phi(a -> Phi^{n-1}(h^a)), Phi^1 = Phi.
double phi_power(const Functional& phi, const CubeFn<double>& h);

/// sup over nu on {0,1} of  integral f dnu - sum_i nu_i^2, i.e. the
/// quadratic-divergence dual under the uniform reference:
///   Var(f)/2 + mean(f) - 1/2   when |f(0) - f(1)| <= 2,
///   max(f(0), f(1)) - 1        otherwise.
/// Throws Error(kDimensionMismatch) unless n == 1.
double lambda_var(const CubeFn<double>& f);
double phi_variance_band(double u0, double u1);

/// Random log-supermodular positive function: random rational values in
/// [1/resolution, 1], then a single pass in increasing popcount that raises
/// h(xvy) to h(x) h(y) / h(x^y) wherever that is larger.
CubeFn<Rational> random_log_supermodular(Rng& rng, int n, std::int64_t resolution);

struct Quadruple {
  CubeFn<Rational> f, g, h, k;
};

/// Hypothesis-satisfying quadruple: f = r1 H, g = r2 H, h = H, k = s H with
/// H log-supermodular, r in (0,1] and s >= 1 pointwise. `identical` returns
/// f = g = h = k = H.
Quadruple random_4ft_quadruple(Rng& rng, int n, std::int64_t resolution, bool identical = false);

/// Non-negative rational function on a finite window of Z; zero outside.
struct ZFn {
  Point offset = 0;
  std::vector<Rational> values;

  Rational at(Point x) const;
};

struct ReductionReport {
  CubeFn<Rational> f, g, h, k;
  bool cube_hypothesis = false;
  /// Hypothesis with floor/ceil midpoints, scanned on the window [-3, 4]^2.
  bool z_hypothesis = false;
  bool equivalent = false;
  /// (f(0)+f(1))(g(0)+g(1)) <= (h(0)+h(1))(k(0)+k(1)).
  ConclusionCheck<Rational> conclusion;
  /// Same two sums computed over Z directly.
  Rational z_lhs, z_rhs;
};

/// Restricts functions supported in {0,1} to the 1-cube and compares the
/// two hypotheses. Throws Error(kSupportNotBinary).
ReductionReport reduce_z_to_cube(const ZFn& f, const ZFn& g, const ZFn& h, const ZFn& k);

}  // namespace dpl
