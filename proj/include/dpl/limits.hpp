#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dpl/measures.hpp"

namespace dpl {

/// Grid x_i = -N + 2iN/n, i in {0..n}.
struct GridSpec {
  double half_width = 1.0;  ///< N
  long count = 1;           ///< n

  static GridSpec make(double half_width, long count);
  double step() const noexcept { return 2.0 * half_width / static_cast<double>(count); }
  double point(long i) const noexcept {
    return -half_width + 2.0 * static_cast<double>(i) * half_width / static_cast<double>(count);
  }
};

/// Real function with a declared window on which it is finite.
struct ContFn {
  std::string name;
  std::function<double(double)> eval;
  double lo = -1.0;
  double hi = 1.0;

  double operator()(double x) const { return eval(x); }
};

struct DiscreteQuadruple {
  RealFn f, g, h, k;  ///< on {0..n}
};

/// f(i) = F(x_i), g(i) = G(x_i), h(i) = max(H(x_i), H(x_i + N/n)),
/// k(i) = max(K(x_i), K(x_i - N/n)).
DiscreteQuadruple discretize_quadruple(const ContFn& F, const ContFn& G, const ContFn& H,
                                       const ContFn& K, const GridSpec& grid);

struct GridHypothesis {
  bool holds = true;
  std::optional<std::pair<Point, Point>> witness;
};

/// f(i) g(j) <= h(floor((i+j)/2)) k(ceil((i+j)/2)) on {0..n}^2, with 1e-12
/// relative slack for rounding in the grid points.
GridHypothesis check_grid_hypothesis(const DiscreteQuadruple& q);

/// Adaptive Gauss-Kronrod integral over [a, b] (infinite bounds allowed),
/// 1e-10 relative target.
double quadrature(const std::function<double(double)>& fn, double a, double b);
/// Integral of fn against the standard Gaussian.
double gaussian_expectation(const std::function<double(double)>& fn);

struct PlRow {
  long n = 0;
  double lhs = 0.0;  ///< (2N/n)^2 sum f sum g
  double rhs = 0.0;  ///< (2N/n)^2 sum h sum k
  double ratio = 0.0;
  double target = 0.0;  ///< int F int G / int H int K on [-N, N]
  double rel_err = 0.0;
  bool holds = true;
};

struct PlDemo {
  std::string name;
  ContFn F, G, H, K;
  double half_width = 6.0;
};

/// Demos: "gaussian", "shifted", "zero".
PlDemo pl_demo(const std::string& name);
std::vector<std::string> pl_demo_names();

/// Throws Error(kHypothesisFailedOnGrid) with the witness when the grid
/// hypothesis fails at some n.
std::vector<PlRow> pl_limit_experiment(const ContFn& F, const ContFn& G, const ContFn& H,
                                       const ContFn& K, double half_width,
                                       const std::vector<long>& n_list);

struct CltRow {
  long n = 0;
  double ef = 0.0;  ///< mean of e^{F_n} under the uniform measure on the cube
  double eg = 0.0;
  double eh = 0.0;  ///< mean of e^{min(H_n, 3M)}
  double lhs = 0.0;  ///< sqrt(ef eg)
  double rhs = 0.0;  ///< eh
  double ratio = 0.0;
  double target_f = 0.0, target_g = 0.0, target_h = 0.0;
  double rel_err = 0.0;  ///< largest of the three relative errors
  bool holds = true;
};

struct CltDemo {
  std::string name;
  ContFn f, g, h;
  double bound = 1.0;  ///< M with f, g <= M and h >= -M
};

/// Demos: "zero", "linear", "quadratic", "concave" (rejected: h not convex).
CltDemo clt_demo(const std::string& name);
std::vector<std::string> clt_demo_names();

/// Sum x_i is binomial(n, 1/2); weights use exact binomial coefficients.
/// `lambda` replaces each function u by u(sqrt(lambda) x).
/// Throws Error(kConvexityWitnessFailed) when sampled midpoints contradict
/// convexity of h, Error(kPreconditionViolated) when the bounds fail on the
/// sample.
std::vector<CltRow> clt_experiment(const ContFn& f, const ContFn& g, const ContFn& h, double bound,
                                   const std::vector<long>& n_list, double lambda = 1.0);

/// Law on R through its left-continuous CDF G(x) = P(X < x) at rationals.
struct CdfLaw {
  std::string name;
  std::function<Rational(const Rational&)> cdf;
  /// Continuous entropy relative to the uniform law on [-K, K), when known.
  std::optional<double> entropy;
};

struct DispRow {
  long n = 0;
  double h0 = 0.0, h1 = 0.0;             ///< H(nu_i^n | mu^n)
  double h_minus = 0.0, h_plus = 0.0;    ///< midpoint images
  double gap = 0.0;                      ///< h0 + h1 - h_minus - h_plus
  double reference_shift = 0.0;          ///< log(2Kn)
  std::optional<double> target0, target1;
  double rel_err = 0.0;  ///< against the continuous entropies, when supplied
  bool holds = true;     ///< gap >= -1e-10
  bool jensen_holds = true;
};

struct DispDemo {
  std::string name;
  CdfLaw nu0, nu1;
  long half_width = 1;
};

/// Demos: "same-uniform", "two-uniform", "dirac-uniform", "triangular".
DispDemo disp_demo(const std::string& name);
std::vector<std::string> disp_demo_names();

/// Cell law of floor(nX)/n: mass G((k+1)/n) - G(k/n) at index k in [-nK, nK).
/// Throws Error(kSupportExceedsWindow) unless G(-K) = 0 and G(K) = 1.
Pmf cell_law(const CdfLaw& law, long half_width, long n);

std::vector<DispRow> rescaled_displacement_experiment(const CdfLaw& nu0, const CdfLaw& nu1,
                                                      long half_width,
                                                      const std::vector<long>& n_list);

void write_csv(std::ostream& out, const std::vector<PlRow>& rows);
void write_csv(std::ostream& out, const std::vector<CltRow>& rows);
void write_csv(std::ostream& out, const std::vector<DispRow>& rows);

}  // namespace dpl
