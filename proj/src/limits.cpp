#include "dpl/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>
#include <gmpxx.h>

#include "dpl/displacement.hpp"
#include "dpl/error.hpp"

namespace dpl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rel_err(double value, double target) {
  double diff = std::abs(value - target);
  return target == 0.0 ? diff : diff / std::abs(target);
}

}  // namespace

GridSpec GridSpec::make(double half_width, long count) {
  if (!(half_width > 0.0) || count < 1) {
    throw Error(ErrorKind::kPreconditionViolated, "grid needs N > 0 and n >= 1");
  }
  return GridSpec{half_width, count};
}

DiscreteQuadruple discretize_quadruple(const ContFn& F, const ContFn& G, const ContFn& H,
                                       const ContFn& K, const GridSpec& grid) {
  const auto size = static_cast<std::size_t>(grid.count + 1);
  const double half_step = grid.half_width / static_cast<double>(grid.count);
  std::vector<double> f(size), g(size), h(size), k(size);
  for (long i = 0; i <= grid.count; ++i) {
    double x = grid.point(i);
    auto s = static_cast<std::size_t>(i);
    f[s] = F(x);
    g[s] = G(x);
    h[s] = std::max(H(x), H(x + half_step));
    k[s] = std::max(K(x), K(x - half_step));
  }
  return {RealFn::make(0, std::move(f)), RealFn::make(0, std::move(g)),
          RealFn::make(0, std::move(h)), RealFn::make(0, std::move(k))};
}

GridHypothesis check_grid_hypothesis(const DiscreteQuadruple& q) {
  GridHypothesis out;
  const Point n = q.f.max_point();
  const auto& f = q.f.values;
  const auto& g = q.g.values;
  const auto& h = q.h.values;
  const auto& k = q.k.values;
  for (Point i = 0; i <= n; ++i) {
    double fi = f[static_cast<std::size_t>(i)];
    if (fi == 0.0) continue;
    for (Point j = 0; j <= n; ++j) {
      double lhs = fi * g[static_cast<std::size_t>(j)];
      double rhs = h[static_cast<std::size_t>(mid_floor(i, j))] *
                   k[static_cast<std::size_t>(mid_ceil(i, j))];
      if (lhs > rhs * (1.0 + 1e-12)) {
        out.holds = false;
        out.witness = std::pair{i, j};
        return out;
      }
    }
  }
  return out;
}

double quadrature(const std::function<double(double)>& fn, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(fn, a, b, 15, 1e-10);
}

double gaussian_expectation(const std::function<double(double)>& fn) {
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto weighted = [&](double x) {
    double w = std::exp(-0.5 * x * x);
    return w == 0.0 ? 0.0 : fn(x) * w * norm;
  };
  // Split at the origin so kinks near zero do not stall the adaptive rule.
  return quadrature(weighted, -kInf, 0.0) + quadrature(weighted, 0.0, kInf);
}

// ---------------------------------------------------------------------------
// Grid discretization

std::vector<std::string> pl_demo_names() { return {"gaussian", "shifted", "zero"}; }

PlDemo pl_demo(const std::string& name) {
  const double N = 6.0;
  auto gauss = [](double c) {
    return ContFn{fmt::format("exp(-(x-{})^2)", c),
                  [c](double x) { return std::exp(-(x - c) * (x - c)); }, -6.0, 6.0};
  };
  if (name == "gaussian") return {name, gauss(0), gauss(0), gauss(0), gauss(0), N};
  if (name == "shifted") return {name, gauss(1), gauss(-1), gauss(0), gauss(0), N};
  if (name == "zero") {
    ContFn zero{"0", [](double) { return 0.0; }, -6.0, 6.0};
    return {name, zero, zero, gauss(0), gauss(0), N};
  }
  throw Error(ErrorKind::kConfigError, "unknown pl demo: " + name);
}

std::vector<PlRow> pl_limit_experiment(const ContFn& F, const ContFn& G, const ContFn& H,
                                       const ContFn& K, double half_width,
                                       const std::vector<long>& n_list) {
  const double a = -half_width, b = half_width;
  double int_f = quadrature(F.eval, a, b), int_g = quadrature(G.eval, a, b);
  double int_h = quadrature(H.eval, a, b), int_k = quadrature(K.eval, a, b);
  double target = (int_f * int_g) / (int_h * int_k);

  std::vector<PlRow> rows;
  for (long n : n_list) {
    auto grid = GridSpec::make(half_width, n);
    auto q = discretize_quadruple(F, G, H, K, grid);
    auto hyp = check_grid_hypothesis(q);
    if (!hyp.holds) {
      throw Error(ErrorKind::kHypothesisFailedOnGrid,
                  fmt::format("grid hypothesis fails at n={} (i={}, j={})", n,
                              hyp.witness->first, hyp.witness->second));
    }
    auto total = [](const RealFn& fn) {
      long double acc = 0;
      for (double v : fn.values) acc += v;
      return static_cast<double>(acc);
    };
    double scale = grid.step() * grid.step();
    PlRow row;
    row.n = n;
    row.lhs = scale * total(q.f) * total(q.g);
    row.rhs = scale * total(q.h) * total(q.k);
    row.ratio = row.rhs == 0.0 ? 0.0 : row.lhs / row.rhs;
    row.target = target;
    row.rel_err = rel_err(row.ratio, target);
    row.holds = row.lhs <= row.rhs * (1.0 + 1e-12);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Central limit passage

std::vector<std::string> clt_demo_names() { return {"zero", "linear", "quadratic", "concave"}; }

CltDemo clt_demo(const std::string& name) {
  const double inf = kInf;
  if (name == "zero") {
    ContFn zero{"0", [](double) { return 0.0; }, -inf, inf};
    return {name, zero, zero, zero, 1.0};
  }
  const double M = 8.0;
  ContFn h_lin{"max(x,-M)", [M](double x) { return std::max(x, -M); }, -inf, inf};
  if (name == "linear") {
    ContFn f{"min(x,M)", [M](double x) { return std::min(x, M); }, -inf, inf};
    return {name, f, f, h_lin, M};
  }
  if (name == "quadratic") {
    ContFn f{"x-x^2/2", [](double x) { return x - 0.5 * x * x; }, -inf, inf};
    return {name, f, f, h_lin, M};
  }
  if (name == "concave") {
    ContFn f{"-x^2", [](double x) { return -x * x; }, -inf, inf};
    return {name, f, f, f, 1.0};
  }
  throw Error(ErrorKind::kConfigError, "unknown clt demo: " + name);
}

namespace {

/// P(S = k) for S ~ binomial(n, 1/2), from exact coefficients.
std::vector<double> binomial_half_weights(long n) {
  std::vector<double> w(static_cast<std::size_t>(n + 1));
  mpz_class c = 1;
  for (long k = 0; k <= n; ++k) {
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, c.get_mpz_t());
    w[static_cast<std::size_t>(k)] = std::ldexp(mant, static_cast<int>(exp - n));
    c *= static_cast<unsigned long>(n - k);
    c /= static_cast<unsigned long>(k + 1);
  }
  return w;
}

void check_clt_preconditions(const ContFn& f, const ContFn& g, const ContFn& h, double bound) {
  std::vector<double> sample;
  for (int i = -100; i <= 100; ++i) sample.push_back(0.1 * i);
  for (double a : sample) {
    for (double b : sample) {
      double mid = h(0.5 * (a + b));
      double chord = 0.5 * (h(a) + h(b));
      if (mid > chord + 1e-12 * (1.0 + std::abs(chord))) {
        throw Error(ErrorKind::kConvexityWitnessFailed,
                    fmt::format("h is not convex: h(({}+{})/2) = {} > {}", a, b, mid, chord));
      }
    }
  }
  for (double x : sample) {
    if (f(x) > bound || g(x) > bound || h(x) < -bound) {
      throw Error(ErrorKind::kPreconditionViolated,
                  fmt::format("bound M = {} fails at x = {}", bound, x));
    }
  }
}

ContFn rescaled(const ContFn& u, double lambda) {
  if (lambda == 1.0) return u;
  double s = std::sqrt(lambda);
  auto fn = u.eval;
  return ContFn{u.name, [fn, s](double x) { return fn(s * x); }, u.lo / s, u.hi / s};
}

}  // namespace

std::vector<CltRow> clt_experiment(const ContFn& f0, const ContFn& g0, const ContFn& h0,
                                   double bound, const std::vector<long>& n_list, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::kPreconditionViolated, "lambda must be positive");
  ContFn f = rescaled(f0, lambda), g = rescaled(g0, lambda), h = rescaled(h0, lambda);
  check_clt_preconditions(f, g, h, bound);
  const double cap = 3.0 * bound;
  auto h_capped = [&](double x) { return std::min(h(x), cap); };

  double target_f = gaussian_expectation([&](double x) { return std::exp(f(x)); });
  double target_g = gaussian_expectation([&](double x) { return std::exp(g(x)); });
  double target_h = gaussian_expectation([&](double x) { return std::exp(h_capped(x)); });

  std::vector<CltRow> rows;
  for (long n : n_list) {
    if (n < 1) throw Error(ErrorKind::kPreconditionViolated, "n must be positive");
    auto w = binomial_half_weights(n);
    long double ef = 0, eg = 0, eh = 0;
    const double root = std::sqrt(static_cast<double>(n));
    for (long k = 0; k <= n; ++k) {
      double z = static_cast<double>(2 * k - n) / root;
      long double wk = w[static_cast<std::size_t>(k)];
      ef += wk * std::exp(static_cast<long double>(f(z)));
      eg += wk * std::exp(static_cast<long double>(g(z)));
      eh += wk * std::exp(static_cast<long double>(h_capped(z)));
    }
    CltRow row;
    row.n = n;
    row.ef = static_cast<double>(ef);
    row.eg = static_cast<double>(eg);
    row.eh = static_cast<double>(eh);
    row.lhs = std::sqrt(row.ef * row.eg);
    row.rhs = row.eh;
    row.ratio = row.lhs / row.rhs;
    row.target_f = target_f;
    row.target_g = target_g;
    row.target_h = target_h;
    row.rel_err = std::max({rel_err(row.ef, target_f), rel_err(row.eg, target_g),
                            rel_err(row.eh, target_h)});
    row.holds = row.ef * row.eg <= row.eh * row.eh * (1.0 + 1e-12);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Rescaled lattices

namespace {

Rational clamp01(const Rational& x) {
  if (sgn(x) < 0) return 0;
  if (x > 1) return 1;
  return x;
}

CdfLaw uniform_law(Point lo, double entropy) {
  return CdfLaw{fmt::format("uniform[{},{})", lo, lo + 1),
                [lo](const Rational& x) { return clamp01(x - lo); }, entropy};
}

}  // namespace

std::vector<std::string> disp_demo_names() {
  return {"same-uniform", "two-uniform", "dirac-uniform", "triangular"};
}

DispDemo disp_demo(const std::string& name) {
  const double log2 = std::log(2.0);
  if (name == "same-uniform") return {name, uniform_law(0, log2), uniform_law(0, log2), 1};
  if (name == "two-uniform") return {name, uniform_law(-1, log2), uniform_law(0, log2), 1};
  if (name == "dirac-uniform") {
    CdfLaw dirac{"dirac(0)", [](const Rational& x) { return Rational(sgn(x) > 0 ? 1 : 0); },
                 std::nullopt};
    return {name, dirac, uniform_law(0, log2), 1};
  }
  if (name == "triangular") {
    CdfLaw tri{"triangular[-1,1)",
               [](const Rational& x) -> Rational {
                 if (x <= -1) return 0;
                 if (x >= 1) return 1;
                 if (sgn(x) < 0) return (1 + x) * (1 + x) / 2;
                 return 1 - (1 - x) * (1 - x) / 2;
               },
               log2 - 0.5};
    return {name, tri, uniform_law(0, log2), 1};
  }
  throw Error(ErrorKind::kConfigError, "unknown disp demo: " + name);
}

Pmf cell_law(const CdfLaw& law, long half_width, long n) {
  if (half_width < 1 || n < 1) {
    throw Error(ErrorKind::kPreconditionViolated, "need K >= 1 and n >= 1");
  }
  if (sgn(law.cdf(Rational(-half_width))) != 0 || law.cdf(Rational(half_width)) != 1) {
    throw Error(ErrorKind::kSupportExceedsWindow,
                fmt::format("{} is not supported in [-{}, {})", law.name, half_width, half_width));
  }
  const long cells = n * half_width;
  std::vector<Rational> masses;
  masses.reserve(static_cast<std::size_t>(2 * cells));
  Rational prev = 0;
  for (long k = -cells; k < cells; ++k) {
    Rational next = law.cdf(Rational(mpz_class(k + 1), mpz_class(n)));
    masses.push_back(next - prev);
    prev = next;
  }
  return Pmf::make(-cells, std::move(masses));
}

std::vector<DispRow> rescaled_displacement_experiment(const CdfLaw& nu0, const CdfLaw& nu1,
                                                      long half_width,
                                                      const std::vector<long>& n_list) {
  std::vector<DispRow> rows;
  for (long n : n_list) {
    Pmf p0 = cell_law(nu0, half_width, n);
    Pmf p1 = cell_law(nu1, half_width, n);
    auto mp = midpoint_measures(p0, p1);
    DispRow row;
    row.n = n;
    row.reference_shift = std::log(2.0 * static_cast<double>(half_width) * static_cast<double>(n));
    row.h0 = entropy_rel_counting(p0) + row.reference_shift;
    row.h1 = entropy_rel_counting(p1) + row.reference_shift;
    row.h_minus = entropy_rel_counting(mp.nu_minus) + row.reference_shift;
    row.h_plus = entropy_rel_counting(mp.nu_plus) + row.reference_shift;
    row.gap = displacement_gap(mp).gap;
    row.holds = row.gap >= -1e-10;
    row.target0 = nu0.entropy;
    row.target1 = nu1.entropy;
    if (nu0.entropy) {
      row.rel_err = std::max(row.rel_err, rel_err(row.h0, *nu0.entropy));
      row.jensen_holds = row.jensen_holds && row.h0 <= *nu0.entropy + 1e-9;
    }
    if (nu1.entropy) {
      row.rel_err = std::max(row.rel_err, rel_err(row.h1, *nu1.entropy));
      row.jensen_holds = row.jensen_holds && row.h1 <= *nu1.entropy + 1e-9;
    }
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV

void write_csv(std::ostream& out, const std::vector<PlRow>& rows) {
  out << "n,lhs,rhs,ratio,target,rel_err,holds\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", r.n, r.lhs, r.rhs,
                       r.ratio, r.target, r.rel_err, r.holds ? 1 : 0);
  }
}

void write_csv(std::ostream& out, const std::vector<CltRow>& rows) {
  out << "n,ef,eg,eh,lhs,rhs,ratio,target_f,target_g,target_h,rel_err,holds\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},"
                       "{:.17g},{}\n",
                       r.n, r.ef, r.eg, r.eh, r.lhs, r.rhs, r.ratio, r.target_f, r.target_g,
                       r.target_h, r.rel_err, r.holds ? 1 : 0);
  }
}

void write_csv(std::ostream& out, const std::vector<DispRow>& rows) {
  out << "n,h0,h1,h_minus,h_plus,lhs,rhs,gap,shift,target0,target1,rel_err,holds,jensen\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? fmt::format("{:.17g}", *v) : std::string();
  };
  for (const auto& r : rows) {
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{},"
                       "{:.17g},{},{}\n",
                       r.n, r.h0, r.h1, r.h_minus, r.h_plus, r.h_minus + r.h_plus, r.h0 + r.h1,
                       r.gap, r.reference_shift, opt(r.target0), opt(r.target1), r.rel_err,
                       r.holds ? 1 : 0, r.jensen_holds ? 1 : 0);
  }
}

}  // namespace dpl
