#include "dpl/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpl/error.hpp"

namespace dpl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Pmf Pmf::make(Point offset, std::vector<Rational> masses) {
  Rational total = 0;
  for (auto& m : masses) {
    m.canonicalize();
    if (sgn(m) < 0) {
      throw Error(ErrorKind::kNegativeMass,
                  "negative mass " + format_rational(m));
    }
    total += m;
  }
  if (total != 1) throw NotNormalizedError(Rational(1) - total);

  std::size_t first = 0;
  while (sgn(masses[first]) == 0) ++first;
  std::size_t last = masses.size();
  while (sgn(masses[last - 1]) == 0) --last;
  std::vector<Rational> trimmed(std::make_move_iterator(masses.begin() + first),
                                std::make_move_iterator(masses.begin() + last));
  return Pmf(offset + static_cast<Point>(first), std::move(trimmed));
}

Pmf Pmf::dirac(Point x) { return Pmf(x, {Rational(1)}); }

Pmf Pmf::uniform(Point lo, Point hi) {
  if (hi < lo) {
    throw Error(ErrorKind::kPreconditionViolated, "uniform: empty range");
  }
  auto n = static_cast<unsigned long>(hi - lo + 1);
  return Pmf(lo, std::vector<Rational>(n, Rational(1, n)));
}

Rational Pmf::mass(Point x) const {
  if (x < min_point() || x > max_point()) return 0;
  return masses_[static_cast<std::size_t>(x - offset_)];
}

bool Pmf::charges(Point x) const {
  if (x < min_point() || x > max_point()) return false;
  return sgn(masses_[static_cast<std::size_t>(x - offset_)]) > 0;
}

std::size_t Pmf::support_size() const {
  return static_cast<std::size_t>(std::count_if(
      masses_.begin(), masses_.end(), [](const Rational& m) { return sgn(m) > 0; }));
}

Rational Pmf::mean() const {
  Rational acc = 0;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    acc += masses_[i] * Rational(offset_ + static_cast<Point>(i));
  }
  return acc;
}

Pmf Pmf::translated(Point shift) const { return Pmf(offset_ + shift, masses_); }

bool operator==(const Pmf& a, const Pmf& b) {
  return a.offset_ == b.offset_ && a.masses_ == b.masses_;
}

RealFn RealFn::make(Point offset, std::vector<double> values) {
  if (values.empty()) {
    throw Error(ErrorKind::kPreconditionViolated, "RealFn needs at least one value");
  }
  return RealFn{offset, std::move(values)};
}

double Base::weight(Point x) const {
  if (!has_pmf_) return 1.0;
  return to_double(pmf_.mass(x));
}

const Pmf& Base::pmf() const {
  if (!has_pmf_) {
    throw Error(ErrorKind::kPreconditionViolated, "counting base has no pmf");
  }
  return pmf_;
}

double entropy_rel_counting(const Pmf& nu) {
  long double acc = 0;
  for (const auto& m : nu.masses()) {
    if (sgn(m) > 0) acc += static_cast<long double>(to_double(m)) * log_of(m);
  }
  return static_cast<double>(acc);
}

double relative_entropy(const Pmf& nu, const Pmf& mu) {
  long double acc = 0;
  for (Point x = nu.min_point(); x <= nu.max_point(); ++x) {
    Rational p = nu.mass(x);
    if (sgn(p) == 0) continue;
    Rational q = mu.mass(x);
    if (sgn(q) == 0) return kInf;
    acc += static_cast<long double>(to_double(p)) * log_of(p / q);
  }
  return static_cast<double>(acc);
}

double relative_entropy(const Pmf& nu, const Base& base) {
  return base.is_counting() ? entropy_rel_counting(nu)
                            : relative_entropy(nu, base.pmf());
}

double log_laplace(const RealFn& phi, const Base& base) {
  std::vector<double> logs;
  logs.reserve(phi.values.size());
  for (Point x = phi.min_point(); x <= phi.max_point(); ++x) {
    double w = base.weight(x);
    if (w <= 0.0) continue;
    logs.push_back(phi.at(x) + std::log(w));
  }
  if (logs.empty()) return -kInf;
  double top = *std::max_element(logs.begin(), logs.end());
  if (top == -kInf) return -kInf;
  long double acc = 0;
  for (double l : logs) acc += std::exp(static_cast<long double>(l - top));
  return top + static_cast<double>(std::log(acc));
}

double integrate(const RealFn& phi, const Pmf& nu) {
  long double acc = 0;
  for (Point x = nu.min_point(); x <= nu.max_point(); ++x) {
    Rational p = nu.mass(x);
    if (sgn(p) == 0) continue;
    if (!phi.contains(x)) {
      throw Error(ErrorKind::kPreconditionViolated,
                  "measure charges a point outside the function window");
    }
    acc += static_cast<long double>(to_double(p)) * phi.at(x);
  }
  return static_cast<double>(acc);
}

Rational rationalize(double value, unsigned long max_den) {
  Rational exact(value);
  if (exact.get_den() <= max_den) return exact;
  // Best approximation with bounded denominator via continued fractions.
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  mpz_class n = exact.get_num(), d = exact.get_den();
  while (true) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    mpz_class q2 = q0 + a * q1;
    if (q2 > max_den) break;
    mpz_class p2 = p0 + a * p1;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    mpz_class r = n - a * d;
    n = d;
    d = r;
    if (d == 0) break;
  }
  mpz_class k = (mpz_class(max_den) - q0) / q1;
  Rational bound1(p0 + k * p1, q0 + k * q1);
  Rational bound2(p1, q1);
  bound1.canonicalize();
  bound2.canonicalize();
  return abs(bound2 - exact) <= abs(bound1 - exact) ? bound2 : bound1;
}

Pmf dual_optimizer(const RealFn& phi, const Base& base) {
  std::vector<double> logs(phi.values.size(), -kInf);
  double top = -kInf;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    double w = base.weight(phi.offset + static_cast<Point>(i));
    if (w > 0.0) logs[i] = phi.values[i] + std::log(w);
    top = std::max(top, logs[i]);
  }
  if (top == -kInf) {
    throw Error(ErrorKind::kPreconditionViolated,
                "dual_optimizer: base puts no mass on the window");
  }
  long double total = 0;
  for (double l : logs) total += std::exp(static_cast<long double>(l - top));
  constexpr unsigned long kMaxDen = 1UL << 40;
  std::vector<Rational> masses(logs.size());
  Rational sum = 0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    double p = static_cast<double>(std::exp(static_cast<long double>(logs[i] - top)) / total);
    masses[i] = rationalize(p, kMaxDen);
    sum += masses[i];
  }
  for (auto& m : masses) m /= sum;
  return Pmf::make(phi.offset, std::move(masses));
}

double dual_gap(const RealFn& phi, const Base& base, const Pmf& nu) {
  return log_laplace(phi, base) - (integrate(phi, nu) - relative_entropy(nu, base));
}

}  // namespace dpl
