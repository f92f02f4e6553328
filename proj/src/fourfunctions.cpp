#include "dpl/fourfunctions.hpp"

#include <algorithm>
#include <bit>
#include <thread>

namespace dpl {

namespace {

void require_same_dim(int a, int b, int c, int d) {
  if (a != b || a != c || a != d) {
    throw Error(ErrorKind::kDimensionMismatch, "cube functions of different dimensions");
  }
}

template <class T, class Leq>
HypothesisCheck<T> scan_pairs(const CubeFn<T>& f, const CubeFn<T>& g, const CubeFn<T>& h,
                              const CubeFn<T>& k, Leq leq) {
  require_same_dim(f.dim(), g.dim(), h.dim(), k.dim());
  const auto size = static_cast<CubeIndex>(f.size());

  auto scan_range = [&](CubeIndex lo, CubeIndex hi) {
    HypothesisCheck<T> out;
    for (CubeIndex x = lo; x < hi; ++x) {
      for (CubeIndex y = 0; y < size; ++y) {
        T lhs = f[x] * g[y];
        T rhs = h[meet(x, y)] * k[join(x, y)];
        if (!leq(lhs, rhs)) {
          out.holds = false;
          out.witness = std::pair{x, y};
          out.lhs = lhs;
          out.rhs = rhs;
          return out;
        }
      }
    }
    return out;
  };

  unsigned workers = f.dim() >= 8 ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
  workers = std::min<unsigned>(workers, size);
  if (workers <= 1) return scan_range(0, size);

  std::vector<HypothesisCheck<T>> parts(workers);
  {
    std::vector<std::jthread> pool;
    CubeIndex step = (size + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      CubeIndex lo = std::min<CubeIndex>(size, w * step);
      CubeIndex hi = std::min<CubeIndex>(size, lo + step);
      pool.emplace_back([&, w, lo, hi] { parts[w] = scan_range(lo, hi); });
    }
  }
  // Ranges are ordered by x, so the first failing part holds the first witness.
  for (auto& p : parts) {
    if (!p.holds) return p;
  }
  return parts.front();
}

bool leq_rel(double a, double b, double rel_tol) {
  return a <= b + rel_tol * std::max(std::abs(a), std::abs(b));
}

double log_sum_exp(const std::vector<double>& v) {
  double top = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(top)) return top;
  long double acc = 0;
  for (double x : v) acc += std::exp(static_cast<long double>(x - top));
  return top + static_cast<double>(std::log(acc));
}

constexpr double kAdditiveTol = 1e-9;

}  // namespace

Bits meet(const Bits& x, const Bits& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::kLengthMismatch, "bit-vectors differ in length");
  Bits out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::min(x[i], y[i]);
  return out;
}

Bits join(const Bits& x, const Bits& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::kLengthMismatch, "bit-vectors differ in length");
  Bits out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::max(x[i], y[i]);
  return out;
}

HypothesisCheck<Rational> check_4ft_hypothesis(const CubeFn<Rational>& f, const CubeFn<Rational>& g,
                                               const CubeFn<Rational>& h, const CubeFn<Rational>& k) {
  return scan_pairs(f, g, h, k, [](const Rational& a, const Rational& b) { return a <= b; });
}

HypothesisCheck<double> check_4ft_hypothesis(const CubeFn<double>& f, const CubeFn<double>& g,
                                             const CubeFn<double>& h, const CubeFn<double>& k,
                                             double rel_tol) {
  return scan_pairs(f, g, h, k, [rel_tol](double a, double b) { return leq_rel(a, b, rel_tol); });
}

ConclusionCheck<Rational> check_4ft_conclusion(const CubeFn<Rational>& f, const CubeFn<Rational>& g,
                                               const CubeFn<Rational>& h, const CubeFn<Rational>& k) {
  require_same_dim(f.dim(), g.dim(), h.dim(), k.dim());
  ConclusionCheck<Rational> out;
  out.lhs = f.sum() * g.sum();
  out.rhs = h.sum() * k.sum();
  out.holds = out.lhs <= out.rhs;
  return out;
}

ConclusionCheck<double> check_4ft_conclusion(const CubeFn<double>& f, const CubeFn<double>& g,
                                             const CubeFn<double>& h, const CubeFn<double>& k,
                                             double rel_tol) {
  require_same_dim(f.dim(), g.dim(), h.dim(), k.dim());
  ConclusionCheck<double> out;
  out.lhs = f.sum() * g.sum();
  out.rhs = h.sum() * k.sum();
  out.holds = leq_rel(out.lhs, out.rhs, rel_tol);
  return out;
}

namespace {

// Exponentiated route: defer to the multiplicative checker in doubles.
std::pair<bool, bool> multiplicative_route(const CubeFn<double>& h1, const CubeFn<double>& h2,
                                           const CubeFn<double>& h3, const CubeFn<double>& h4) {
  auto e = [](double v) { return std::exp(v); };
  auto f = h1.map(e), g = h2.map(e), h = h3.map(e), k = h4.map(e);
  bool hyp = check_4ft_hypothesis(f, g, h, k, kAdditiveTol).holds;
  bool concl = check_4ft_conclusion(f, g, h, k, kAdditiveTol).holds;
  return {hyp, concl};
}

template <class T>
void fill_conclusion(AdditiveCheck& out, const CubeFn<T>& h1, const CubeFn<T>& h2,
                     const CubeFn<T>& h3, const CubeFn<T>& h4) {
  auto logs = [](const CubeFn<T>& fn) {
    std::vector<double> v;
    v.reserve(fn.size());
    for (const auto& x : fn.values()) {
      if constexpr (std::is_same_v<T, Rational>) {
        v.push_back(to_double(x));
      } else {
        v.push_back(x);
      }
    }
    return log_sum_exp(v);
  };
  out.log_lhs = logs(h1) + logs(h2);
  out.log_rhs = logs(h3) + logs(h4);
  out.conclusion_holds = out.log_lhs <= out.log_rhs + kAdditiveTol;
}

}  // namespace

AdditiveCheck check_4ft_additive(const CubeFn<double>& h1, const CubeFn<double>& h2,
                                 const CubeFn<double>& h3, const CubeFn<double>& h4) {
  require_same_dim(h1.dim(), h2.dim(), h3.dim(), h4.dim());
  AdditiveCheck out;
  const auto size = static_cast<CubeIndex>(h1.size());
  for (CubeIndex x = 0; x < size && out.hypothesis_holds; ++x) {
    for (CubeIndex y = 0; y < size; ++y) {
      if (h1[x] + h2[y] > h3[meet(x, y)] + h4[join(x, y)] + kAdditiveTol) {
        out.hypothesis_holds = false;
        out.witness = std::pair{x, y};
        break;
      }
    }
  }
  fill_conclusion(out, h1, h2, h3, h4);
  auto [hyp, concl] = multiplicative_route(h1, h2, h3, h4);
  out.routes_agree = hyp == out.hypothesis_holds && concl == out.conclusion_holds;
  return out;
}

AdditiveCheck check_4ft_additive(const CubeFn<Rational>& h1, const CubeFn<Rational>& h2,
                                 const CubeFn<Rational>& h3, const CubeFn<Rational>& h4) {
  require_same_dim(h1.dim(), h2.dim(), h3.dim(), h4.dim());
  AdditiveCheck out;
  out.exact = true;
  const auto size = static_cast<CubeIndex>(h1.size());
  for (CubeIndex x = 0; x < size && out.hypothesis_holds; ++x) {
    for (CubeIndex y = 0; y < size; ++y) {
      if (h1[x] + h2[y] > h3[meet(x, y)] + h4[join(x, y)]) {
        out.hypothesis_holds = false;
        out.witness = std::pair{x, y};
        break;
      }
    }
  }
  fill_conclusion(out, h1, h2, h3, h4);
  auto d = [](const Rational& q) { return to_double(q); };
  auto [hyp, concl] = multiplicative_route(h1.map(d), h2.map(d), h3.map(d), h4.map(d));
  out.routes_agree = hyp == out.hypothesis_holds && concl == out.conclusion_holds;
  return out;
}

double phi_entropy(double u0, double u1) {
  double top = std::max(u0, u1);
  return top + std::log((std::exp(u0 - top) + std::exp(u1 - top)) / 2.0);
}

double phi_mean(double u0, double u1) { return (u0 + u1) / 2.0; }

double phi_power(const Functional& phi, const CubeFn<double>& h) {
  if (h.dim() == 1) return phi(h[0], h[1]);
  return phi(phi_power(phi, h.slice(0)), phi_power(phi, h.slice(1)));
}

double phi_variance_band(double u0, double u1) {
  double d = u0 - u1;
  if (std::abs(d) <= 2.0) {
    double var = d * d / 4.0;
    return var / 2.0 + (u0 + u1) / 2.0 - 0.5;
  }
  return std::max(u0, u1) - 1.0;
}

double lambda_var(const CubeFn<double>& f) {
  if (f.dim() != 1) throw Error(ErrorKind::kDimensionMismatch, "lambda_var needs n == 1");
  return phi_variance_band(f[0], f[1]);
}

CubeFn<Rational> random_log_supermodular(Rng& rng, int n, std::int64_t resolution) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<Rational> v(size);
  for (auto& x : v) x = random_unit_rational(rng, resolution);

  std::vector<CubeIndex> order(size);
  for (CubeIndex i = 0; i < size; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [](CubeIndex a, CubeIndex b) {
    return std::popcount(a) < std::popcount(b);
  });
  // Every incomparable pair x, y with x v y = t lies strictly below t, so its
  // values are final by the time t is visited.
  for (CubeIndex t : order) {
    for (CubeIndex x = 0; x < size; ++x) {
      if ((x | t) != t || x == t) continue;
      for (CubeIndex y = x + 1; y < size; ++y) {
        if ((x | y) != t || y == t) continue;
        Rational need = v[x] * v[y] / v[x & y];
        if (need > v[t]) v[t] = need;
      }
    }
  }
  return CubeFn<Rational>::make(n, std::move(v));
}

Quadruple random_4ft_quadruple(Rng& rng, int n, std::int64_t resolution, bool identical) {
  auto base = random_log_supermodular(rng, n, resolution);
  if (identical) return Quadruple{base, base, base, base};
  auto scaled = [&](bool up) {
    std::vector<Rational> out(base.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      Rational r = random_unit_rational(rng, resolution);
      const Rational& b = base[static_cast<CubeIndex>(i)];
      out[i] = up ? Rational(b / r) : Rational(b * r);
    }
    return CubeFn<Rational>::make(n, std::move(out));
  };
  auto f = scaled(false);
  auto g = scaled(false);
  auto k = scaled(true);
  return Quadruple{std::move(f), std::move(g), base, std::move(k)};
}

Rational ZFn::at(Point x) const {
  if (x < offset || x >= offset + static_cast<Point>(values.size())) return 0;
  return values[static_cast<std::size_t>(x - offset)];
}

ReductionReport reduce_z_to_cube(const ZFn& f, const ZFn& g, const ZFn& h, const ZFn& k) {
  for (const ZFn* fn : {&f, &g, &h, &k}) {
    for (std::size_t i = 0; i < fn->values.size(); ++i) {
      Point x = fn->offset + static_cast<Point>(i);
      if (sgn(fn->values[i]) < 0) {
        throw Error(ErrorKind::kNegativeMass, "functions must be non-negative");
      }
      if ((x < 0 || x > 1) && sgn(fn->values[i]) != 0) {
        throw Error(ErrorKind::kSupportNotBinary, "function charges a point outside {0,1}");
      }
    }
  }
  auto cube = [](const ZFn& fn) { return CubeFn<Rational>::make(1, {fn.at(0), fn.at(1)}); };
  ReductionReport r{cube(f), cube(g), cube(h), cube(k), false, false, false, {}, 0, 0};
  r.cube_hypothesis = check_4ft_hypothesis(r.f, r.g, r.h, r.k).holds;
  r.z_hypothesis = true;
  for (Point x = -3; x <= 4 && r.z_hypothesis; ++x) {
    for (Point y = -3; y <= 4; ++y) {
      if (f.at(x) * g.at(y) > h.at(mid_floor(x, y)) * k.at(mid_ceil(x, y))) {
        r.z_hypothesis = false;
        break;
      }
    }
  }
  r.equivalent = r.cube_hypothesis == r.z_hypothesis;
  r.conclusion = check_4ft_conclusion(r.f, r.g, r.h, r.k);
  auto total = [](const ZFn& fn) {
    Rational s = 0;
    for (const auto& v : fn.values) s += v;
    return s;
  };
  r.z_lhs = total(f) * total(g);
  r.z_rhs = total(h) * total(k);
  return r;
}

}  // namespace dpl
