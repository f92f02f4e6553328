// One line per acceptance criterion; exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "dpl/campaign.hpp"
#include "dpl/coupling.hpp"
#include "dpl/displacement.hpp"
#include "dpl/fourfunctions.hpp"
#include "dpl/limits.hpp"
#include "dpl/measures.hpp"
#include "dpl/random.hpp"
#include "dpl/transport.hpp"
#include "oracles.hpp"

using namespace dpl;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  fmt::print("criterion {}: {} {} [{:.2f} s]\n", id, out.pass ? "PASS" : "FAIL", out.detail, secs);
  std::fflush(stdout);
  if (!out.pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

PmfSampler campaign_sampler() {
  PmfSampler s;
  s.max_width = 40;
  s.resolution = 64;
  s.offset_lo = -40;
  s.offset_hi = 40;
  s.hole_probability = 0.2;
  return s;
}

std::vector<std::tuple<Point, Point, Rational>> tuples(const Coupling& pi) {
  std::vector<std::tuple<Point, Point, Rational>> out;
  for (const auto& a : pi.atoms()) out.emplace_back(a.x, a.y, a.mass);
  return out;
}

// Shared by criteria 1, 2 and 4.
struct LeqCampaign {
  long trials = 0;
  long p_failures = 0;
  long oracle_mismatches = 0;
  double min_slack = 2.0;
  double min_gap = 1e9;
  std::size_t max_level_set = 0;
  long size_two_instances = 0;
  long first_size_two = -1;
  double seconds = 0.0;
};

const LeqCampaign& leq_campaign() {
  static const LeqCampaign result = [] {
    LeqCampaign c;
    auto start = std::chrono::steady_clock::now();
    auto s = campaign_sampler();
    for (std::uint64_t i = 0; i < 10000; ++i) {
      auto rng = Rng::derived(2024, i);
      auto nu0 = random_pmf(rng, s);
      auto nu1 = random_pmf(rng, s);
      auto mp = midpoint_measures(nu0, nu1);
      auto g = displacement_gap(mp);
      ++c.trials;
      if (g.p > 1) ++c.p_failures;
      if (g.p != oracle::resum_leq1(tuples(mp.pi), nu0, nu1)) ++c.oracle_mismatches;
      c.min_slack = std::min(c.min_slack, Rational(1 - g.p).get_d());
      c.min_gap = std::min(c.min_gap, g.gap);
      bool two = false;
      for (const auto& ls : level_sets(mp.pi)) {
        c.max_level_set = std::max(c.max_level_set, ls.pairs.size());
        two = two || ls.pairs.size() == 2;
      }
      if (two) {
        if (c.first_size_two < 0) c.first_size_two = static_cast<long>(i);
        ++c.size_two_instances;
      }
    }
    c.seconds = seconds_since(start);
    return c;
  }();
  return result;
}

Outcome criterion1() {
  const auto& c = leq_campaign();
  // The threaded campaign driver must agree.
  CampaignConfig cfg;
  cfg.seed = 2024;
  cfg.trials = 10000;
  cfg.support_width = 40;
  cfg.mass_resolution = 64;
  auto report = run_campaign(cfg);
  bool pass = c.trials == 10000 && c.p_failures == 0 && c.oracle_mismatches == 0 &&
              report.summary.failures == 0 && c.seconds <= 60.0;
  return {pass, fmt::format("{} pairs, P <= 1 failures {}, oracle mismatches {}, min 1-P {:.3g}, "
                            "campaign driver {} passed / {} failed, loop {:.2f} s (limit 60 s)",
                            c.trials, c.p_failures, c.oracle_mismatches, c.min_slack,
                            report.summary.passes, report.summary.failures, c.seconds)};
}

Outcome criterion2() {
  const auto& c = leq_campaign();
  auto nu0 = Pmf::make(0, {make_rational(1, 2), 0, make_rational(1, 2)});
  auto g = displacement_gap(nu0, Pmf::dirac(1));
  double err = std::abs(g.gap - std::log(2.0));
  bool pass = c.min_gap >= -1e-12 && g.p == make_rational(1, 2) && err <= 1e-10;
  return {pass, fmt::format("min gap over campaign {:.3g} (>= -1e-12); worked instance P = {}, "
                            "gap = {:.15f}, |gap - log 2| = {:.2g}",
                            c.min_gap, format_rational(g.p), g.gap, err)};
}

Outcome criterion3() {
  auto start = std::chrono::steady_clock::now();
  long cases = 0, mismatches = 0;
  for (Point x1 = -8; x1 <= 8; ++x1) {
    for (Point y1 = -8; y1 <= 8; ++y1) {
      for (Point x2 = x1; x2 <= 8; ++x2) {
        for (Point y2 = y1; y2 <= 8; ++y2) {
          if (x1 == x2 && y1 == y2) continue;
          ++cases;
          auto r = elem_predicates(x1, y1, x2, y2);
          Point f1 = oracle::floor_half(x1 + y1), f2 = oracle::floor_half(x2 + y2);
          Point c1 = oracle::ceil_half(x1 + y1), c2 = oracle::ceil_half(x2 + y2);
          Point gap = (x2 - x1) + (y2 - y1);
          bool even = (x1 + y1) % 2 == 0;
          bool ok = r.all_agree() && r.floors_equal == (f1 == f2) &&
                    (f1 == f2) == (gap == 1 && even);
          if (f1 == f2) ok = ok && c2 == c1 + 1;
          if (f2 >= f1 + 2) ok = ok && c1 != c2;
          if (f2 == f1 + 1) ok = ok && (c1 == c2) == (gap == 1 && !even) && r.item2_agrees;
          if (!ok) ++mismatches;
        }
      }
    }
  }
  double secs = seconds_since(start);
  return {mismatches == 0 && secs <= 5.0,
          fmt::format("{} admissible tuples on [-8,8]^4, {} discrepancies, {:.2f} s (limit 5 s)",
                      cases, mismatches, secs)};
}

Outcome criterion4() {
  const auto& c = leq_campaign();
  bool pass = c.max_level_set <= 2 && c.size_two_instances > 0;
  return {pass, fmt::format("largest level set {}, instances with a level set of size 2: {} "
                            "(first: instance {})",
                            c.max_level_set, c.size_two_instances, c.first_size_two)};
}

Outcome criterion5() {
  long quad_fail = 0, quad_total = 0;
  for (int n = 1; n <= 4; ++n) {
    for (std::uint64_t i = 0; i < 500; ++i) {
      auto rng = Rng::derived(505, 1000 * static_cast<std::uint64_t>(n) + i);
      auto q = random_4ft_quadruple(rng, n, 32, i % 25 == 0);
      ++quad_total;
      bool hyp = true;
      for (CubeIndex x = 0; x < q.f.size() && hyp; ++x) {
        for (CubeIndex y = 0; y < q.f.size(); ++y) {
          if (q.f[x] * q.g[y] > q.h[x & y] * q.k[x | y]) {
            hyp = false;
            break;
          }
        }
      }
      auto c = check_4ft_conclusion(q.f, q.g, q.h, q.k);
      bool ok = hyp && c.holds && c.lhs == q.f.sum() * q.g.sum() &&
                c.rhs == q.h.sum() * q.k.sum() && c.lhs <= c.rhs;
      if (!ok) ++quad_fail;
    }
  }

  long red_fail = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = Rng::derived(506, i);
    auto q = random_4ft_quadruple(rng, 1, 32);
    auto z = [](const CubeFn<Rational>& fn) { return ZFn{0, {fn[0], fn[1]}}; };
    auto r = reduce_z_to_cube(z(q.f), z(q.g), z(q.h), z(q.k));
    Rational lhs = (q.f[0] + q.f[1]) * (q.g[0] + q.g[1]);
    Rational rhs = (q.h[0] + q.h[1]) * (q.k[0] + q.k[1]);
    bool ok = r.cube_hypothesis && r.z_hypothesis && r.equivalent && r.conclusion.holds &&
              r.conclusion.lhs == lhs && r.conclusion.rhs == rhs && r.z_lhs == lhs &&
              r.z_rhs == rhs;
    if (!ok) ++red_fail;
  }

  long lat_fail = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    auto rng = Rng::derived(507, i);
    Rational a = make_rational(rng.uniform(0, 64), 64);
    Rational b = i % 10 == 0 ? a : make_rational(rng.uniform(0, 64), 64);
    auto mk = [](const Rational& p0) {
      return p0 == 1 ? Pmf::dirac(0) : sgn(p0) == 0 ? Pmf::dirac(1)
                                                     : Pmf::make(0, {p0, Rational(1 - p0)});
    };
    auto nu1 = mk(a), nu2 = mk(b);
    auto lc = lattice_coupling_binary(nu1, nu2);
    bool ok = lc.pi.marginal0() == nu1 && lc.pi.marginal1() == nu2;
    if (b <= a) {
      ok = ok && lc.pi.mass(0, 0) == b && lc.pi.mass(1, 0) == 0 && lc.pi.mass(0, 1) == a - b &&
           lc.pi.mass(1, 1) == 1 - a && lc.sorted == lc.pi;
    } else {
      ok = ok && lc.pi.mass(0, 0) == a && lc.pi.mass(1, 1) == 1 - b && lc.pi.mass(0, 1) == 0 &&
           lc.pi.mass(1, 0) == b - a && lc.sorted.mass(0, 1) == b - a &&
           lc.sorted.mass(1, 0) == 0;
    }
    if (!ok) ++lat_fail;
  }
  bool pass = quad_fail == 0 && red_fail == 0 && lat_fail == 0;
  return {pass, fmt::format("four functions {}/{} ok (n = 1..4, 500 each); reduction 200 with {} "
                            "failures; lattice couplings 1000 with {} mismatches",
                            quad_total - quad_fail, quad_total, red_fail, lat_fail)};
}

Outcome criterion6() {
  auto start = std::chrono::steady_clock::now();
  auto geo = LogWeights::geometric(60);
  auto gau = LogWeights::gaussian(60);
  long pairs = 0, mismatches = 0;
  for (Point x = -50; x <= 50; ++x) {
    for (Point y = -50; y <= 50; ++y) {
      ++pairs;
      Point lo = oracle::floor_half(x + y), hi = oracle::ceil_half(x + y);
      Point geo_formula = (x < 0 && y > 0) || (x > 0 && y < 0)
                              ? 2 * std::min(std::abs(x), std::abs(y))
                              : 0;
      Point gau_formula = (x - y) * (x - y) - ((x + y) % 2 != 0 ? 1 : 0);
      bool ok = cost_mu(geo, x, y) == geo_formula && cost_mu(gau, x, y) == gau_formula &&
                std::abs(x) + std::abs(y) - std::abs(lo) - std::abs(hi) == geo_formula &&
                2 * (x * x + y * y - lo * lo - hi * hi) == gau_formula &&
                closed_form_cost(ClosedFormKind::kGeometric, x, y) == geo_formula &&
                closed_form_cost(ClosedFormKind::kGaussian, x, y) == gau_formula;
      if (!ok) ++mismatches;
    }
  }
  double secs = seconds_since(start);
  return {mismatches == 0 && secs <= 2.0,
          fmt::format("{} pairs per family, {} mismatches (exact), {:.2f} s (limit 2 s)", pairs,
                      mismatches, secs)};
}

Pmf small_pmf(Rng& rng, Point lo, Point hi, std::int64_t width, double holes) {
  PmfSampler s;
  s.max_width = std::min<std::int64_t>(width, hi - lo + 1);
  s.resolution = 16;
  s.offset_lo = lo;
  s.offset_hi = hi - s.max_width + 1;
  s.hole_probability = holes;
  return random_pmf(rng, s);
}

Outcome criterion7() {
  auto families = reference_families();
  long te_fail = 0, te_total = 0;
  double min_slack = 1e300;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    const auto& fam = families[i % families.size()];
    auto rng = Rng::derived(707, i);
    auto nu0 = small_pmf(rng, fam.lo, fam.hi, 12, 0.2);
    auto nu1 = small_pmf(rng, fam.lo, fam.hi, 12, 0.2);
    auto r = std::visit([&](const auto& mu) { return transport_entropy_check(mu, nu0, nu1); },
                        fam.mu);
    ++te_total;
    bool ok = r.lhs.has_value() && *r.lhs <= r.rhs + 1e-10;
    if (!ok) ++te_fail;
    if (r.lhs) min_slack = std::min(min_slack, r.rhs - *r.lhs);
  }

  long ot_fail = 0, ot_total = 0;
  for (std::uint64_t i = 0; ot_total < 500; ++i) {
    const auto& fam = families[i % families.size()];
    auto rng = Rng::derived(708, i);
    auto nu0 = small_pmf(rng, fam.lo, fam.hi, 4, 0.3);
    auto nu1 = small_pmf(rng, fam.lo, fam.hi, 4, 0.3);
    if (nu0.support_size() > 4 || nu1.support_size() > 4) continue;
    ++ot_total;
    auto c = std::visit([](const auto& mu) { return CostFn::curvature(mu); }, fam.mu);
    double solver = ot_cost(c, nu0, nu1).cost;
    double brute = oracle::brute_ot(c.eval, nu0, nu1);
    if (std::abs(solver - brute) > 1e-9 * std::max(1.0, std::abs(brute))) ++ot_fail;
  }
  return {te_fail == 0 && ot_fail == 0,
          fmt::format("transport-entropy {}/{} hold over {} families (min slack {:.3g}); "
                      "solver vs vertex enumeration {} instances, {} mismatches",
                      te_total - te_fail, te_total, families.size(), min_slack, ot_total, ot_fail)};
}

Outcome criterion8() {
  long dual_fail = 0;
  double worst_gap = 0.0, worst_laplace = 0.0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    auto rng = Rng::derived(808, i);
    auto width = rng.uniform(1, 30);
    Point offset = rng.uniform(-10, 10);
    std::vector<double> phi(static_cast<std::size_t>(width));
    for (auto& v : phi) v = rng.unit() * 10 - 5;
    auto fn = RealFn::make(offset, phi);
    bool counting = i % 2 == 0;
    auto base = counting ? Base::counting() : Base::measure(Pmf::uniform(offset, offset + width - 1));
    auto nu = dual_optimizer(fn, base);
    double gap = dual_gap(fn, base, nu);
    // Uniform base weighs each point 1/width; counting base weighs it 1.
    double direct = oracle::log_mean_exp(phi);
    if (counting) direct += std::log(static_cast<double>(width));
    double lerr = std::abs(log_laplace(fn, base) - direct);
    worst_gap = std::max(worst_gap, std::abs(gap));
    worst_laplace = std::max(worst_laplace, lerr);
    if (!(gap >= -1e-12 && gap <= 1e-10) || lerr > 1e-10) ++dual_fail;
  }

  long phi_fail = 0;
  double worst_phi = 0.0;
  for (int n = 1; n <= 10; ++n) {
    for (std::uint64_t i = 0; i < 50; ++i) {
      auto rng = Rng::derived(809, 100 * static_cast<std::uint64_t>(n) + i);
      std::vector<double> v(std::size_t{1} << n);
      for (auto& x : v) x = rng.unit() * 20 - 10;
      double err = std::abs(phi_power(phi_entropy, CubeFn<double>::make(n, v)) -
                            oracle::log_mean_exp(v));
      worst_phi = std::max(worst_phi, err);
      if (err > 1e-9) ++phi_fail;
    }
  }
  return {dual_fail == 0 && phi_fail == 0,
          fmt::format("500 potentials (windows <= 30): worst |dual gap| {:.2g}, worst log-Laplace "
                      "error {:.2g}, {} failures; Phi^n for n = 1..10 (500 functions): worst error "
                      "{:.2g}, {} failures",
                      worst_gap, worst_laplace, dual_fail, worst_phi, phi_fail)};
}

Outcome criterion9() {
  std::string detail;
  bool pass = true;

  auto t0 = std::chrono::steady_clock::now();
  auto pl = pl_demo("gaussian");
  auto pl_rows = pl_limit_experiment(pl.F, pl.G, pl.H, pl.K, pl.half_width, {64, 256, 1024, 4096});
  double pl_secs = seconds_since(t0);
  bool pl_holds = std::all_of(pl_rows.begin(), pl_rows.end(), [](const auto& r) { return r.holds; });
  // The continuous ratio of the Gaussian demo is exactly one.
  double pl_err = std::abs(pl_rows.back().ratio - 1.0);
  pass = pass && pl_holds && pl_err <= 0.02 && pl_secs <= 120.0;
  detail += fmt::format("PL ratio at n=4096 {:.6f} (err {:.3g}), holds at every n: {}, {:.2f} s; ",
                        pl_rows.back().ratio, pl_err, pl_holds ? "yes" : "no", pl_secs);

  t0 = std::chrono::steady_clock::now();
  auto dd = disp_demo("two-uniform");
  auto d_rows = rescaled_displacement_experiment(dd.nu0, dd.nu1, dd.half_width,
                                                 {16, 64, 256, 1024, 2048});
  double d_secs = seconds_since(t0);
  bool d_holds = std::all_of(d_rows.begin(), d_rows.end(), [](const auto& r) { return r.holds; });
  const auto& last = d_rows.back();
  double d_err = std::max(std::abs(last.h0 - std::log(2.0)), std::abs(last.h1 - std::log(2.0))) /
                 std::log(2.0);
  pass = pass && d_holds && d_err <= 0.01 && d_secs <= 120.0;
  detail += fmt::format("disp H at n=2048 {:.6f} / {:.6f} (rel err {:.3g}), gap >= 0 at every n: "
                        "{}, {:.2f} s; ",
                        last.h0, last.h1, d_err, d_holds ? "yes" : "no", d_secs);

  struct Target {
    const char* demo;
    double f, h;
  };
  const double e_half = std::exp(0.5);
  for (const Target& t : {Target{"linear", e_half, e_half},
                          Target{"quadratic", std::exp(0.25) / std::sqrt(2.0), e_half}}) {
    t0 = std::chrono::steady_clock::now();
    auto cd = clt_demo(t.demo);
    auto rows = clt_experiment(cd.f, cd.g, cd.h, cd.bound, {100, 1000, 10000});
    double secs = seconds_since(t0);
    const auto& r = rows.back();
    double err = std::max({std::abs(r.ef / t.f - 1), std::abs(r.eg / t.f - 1),
                           std::abs(r.eh / t.h - 1)});
    bool holds = std::all_of(rows.begin(), rows.end(), [](const auto& x) { return x.holds; });
    pass = pass && holds && err <= 0.02 && secs <= 120.0;
    detail += fmt::format("CLT {} rel err at n=10^4 {:.3g}, {:.2f} s; ", t.demo, err, secs);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

}  // namespace

int main() {
  report(1, criterion1);
  report(2, criterion2);
  report(3, criterion3);
  report(4, criterion4);
  report(5, criterion5);
  report(6, criterion6);
  report(7, criterion7);
  report(8, criterion8);
  report(9, criterion9);
  fmt::print("{} of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
