#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpl/coupling.hpp"
#include "dpl/measures.hpp"

namespace dpl {

/// Reference measure mu(x) proportional to exp(w(x)) on a finite window,
/// with rational log-weights w. Curvature costs are exact in w.
class LogWeights {
 public:
  static LogWeights make(Point offset, std::vector<Rational> weights);
  /// w(x) = -|x| on [-K, K].
  static LogWeights geometric(Point half_width);
  /// w(x) = -2 x^2 on [-K, K].
  static LogWeights gaussian(Point half_width);

  Point min_point() const noexcept { return offset_; }
  Point max_point() const noexcept {
    return offset_ + static_cast<Point>(weights_.size()) - 1;
  }
  bool contains(Point x) const noexcept { return x >= min_point() && x <= max_point(); }
  const Rational& weight(Point x) const;
  /// log mu(x), normalization included.
  double log_mass(Point x) const;
  double log_normalizer() const noexcept { return log_normalizer_; }

 private:
  LogWeights(Point offset, std::vector<Rational> weights);

  Point offset_ = 0;
  std::vector<Rational> weights_;
  double log_normalizer_ = 0.0;
};

/// c_mu(x, y) = log(mu(floor m) mu(ceil m) / (mu(x) mu(y))), m = (x+y)/2.
/// Throws Error(kOutsidePositiveWindow) when any of the four masses is zero.
double cost_mu(const Pmf& mu, Point x, Point y);
/// Exact version: w(floor m) + w(ceil m) - w(x) - w(y).
Rational cost_mu(const LogWeights& mu, Point x, Point y);

struct LogConcavity {
  bool holds = true;
  std::optional<Point> witness;  ///< first x with mu(x-1) mu(x+1) > mu(x)^2
};

/// Exact check of mu(x-1) mu(x+1) <= mu(x)^2 together with interval support:
/// an uncharged point inside the window is a witness.
LogConcavity is_log_concave(const Pmf& mu);
LogConcavity is_log_concave(const LogWeights& mu);

/// Piecewise-linear interpolation of log mu between floor(t) and ceil(t).
double v_mu(const Pmf& mu, double t);
/// Concavity of v_mu through second differences of log mu (tolerance 1e-12).
bool v_mu_is_concave(const Pmf& mu);

struct CostCheck {
  bool holds = true;
  std::optional<std::pair<Point, Point>> witness;
  double value = 0.0;  ///< cost at the witness
};

/// c_mu >= 0 on every pair of the window. Float path uses -1e-12 slack.
CostCheck cost_nonnegativity_check(const Pmf& mu);
CostCheck cost_nonnegativity_check(const LogWeights& mu);

enum class ClosedFormKind { kGeometric, kGaussian };

/// 2 min(|x|,|y|) [xy < 0]  or  (x-y)^2 - [x+y odd].
std::int64_t closed_form_cost(ClosedFormKind kind, Point x, Point y);

/// Evaluable cost. The exact evaluator is optional; when present the
/// transport solver runs in exact arithmetic. Evaluators may return
/// +infinity / nullopt for forbidden pairs.
struct CostFn {
  std::string name;
  bool symmetric = false;
  std::function<double(Point, Point)> eval;
  std::function<std::optional<Rational>(Point, Point)> exact;

  static CostFn curvature(const Pmf& mu);
  static CostFn curvature(const LogWeights& mu);
  static CostFn closed_form(ClosedFormKind kind);
  /// Finite table; missing pairs cost +infinity.
  static CostFn table(std::map<std::pair<Point, Point>, Rational> entries);
};

struct TransportPlanResult {
  double cost = 0.0;
  std::optional<Rational> exact_cost;
  Coupling plan;
  /// Potentials with u(x) + v(y) <= c(x, y) on supp nu0 x supp nu1 and equality
  /// on the plan; -infinity off the supports.
  std::optional<RealFn> u;
  std::optional<RealFn> v;
  /// Dual objective sum u nu0 + sum v nu1.
  double dual_value = 0.0;
};

/// Exact optimal transport between finite supports by the transportation
/// simplex (northwest-corner start, Bland pivoting). Exact when c.exact is
/// set, else in doubles. Throws Error(kInfeasibleCost) when an infinite cost
/// blocks every plan.
TransportPlanResult ot_cost(const CostFn& c, const Pmf& nu0, const Pmf& nu1,
                            bool want_duals = false);
/// Forces the floating-point path even when an exact evaluator exists.
TransportPlanResult ot_cost_float(const CostFn& c, const Pmf& nu0, const Pmf& nu1,
                                  bool want_duals = false);

/// H(nu | mu) for a log-weight reference; +infinity off its window.
double relative_entropy(const Pmf& nu, const LogWeights& mu);

struct TransportEntropyCheck {
  /// Optimal cost; absent when the right side is infinite (vacuous case).
  std::optional<double> lhs;
  double rhs = 0.0;  ///< H(nu0|mu) + H(nu1|mu)
  bool holds = true;
};

/// T_{c_mu}(nu0, nu1) <= H(nu0|mu) + H(nu1|mu) with 1e-10 slack.
TransportEntropyCheck transport_entropy_check(const Pmf& mu, const Pmf& nu0, const Pmf& nu1);
TransportEntropyCheck transport_entropy_check(const LogWeights& mu, const Pmf& nu0,
                                              const Pmf& nu1);

struct DualProductCheck {
  double product = 0.0;  ///< (sum e^u mu)(sum e^v mu)
  bool holds = true;     ///< product <= 1 + 1e-10
};

/// Verifies u(x) + v(y) <= c_mu(x, y) over both windows (throws
/// Error(kConstraintViolated) with the witness otherwise), then bounds the
/// product of exponential moments.
DualProductCheck dual_product_check(const Pmf& mu, const RealFn& u, const RealFn& v);
DualProductCheck dual_product_check(const LogWeights& mu, const RealFn& u, const RealFn& v);

}  // namespace dpl
