#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dpl/displacement.hpp"
#include "dpl/error.hpp"
#include "dpl/limits.hpp"
#include "oracles.hpp"

using namespace dpl;

namespace {

const double kInfinity = std::numeric_limits<double>::infinity();

ContFn constant(double c) { return ContFn{"c", [c](double) { return c; }, -10, 10}; }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Discretize, ConstantOnes) {
  auto one = constant(1.0);
  auto q = discretize_quadruple(one, one, one, one, GridSpec::make(1.0, 2));
  std::vector<double> ones{1, 1, 1};
  EXPECT_EQ(q.f.values, ones);
  EXPECT_EQ(q.g.values, ones);
  EXPECT_EQ(q.h.values, ones);
  EXPECT_EQ(q.k.values, ones);
  EXPECT_TRUE(check_grid_hypothesis(q).holds);
}

TEST(Discretize, MonotoneH) {
  ContFn inc{"exp", [](double x) { return std::exp(x); }, -3, 3};
  auto grid = GridSpec::make(3.0, 12);
  auto q = discretize_quadruple(inc, inc, inc, inc, grid);
  for (long i = 0; i <= 12; ++i) {
    double x = grid.point(i);
    EXPECT_DOUBLE_EQ(q.h.at(i), std::exp(x + 3.0 / 12));
    EXPECT_DOUBLE_EQ(q.k.at(i), std::exp(x));
  }
}

TEST(Discretize, GaussianHypothesisExhaustive) {
  auto d = pl_demo("gaussian");
  for (long n : {8L, 64L, 257L}) {
    auto grid = GridSpec::make(d.half_width, n);
    auto q = discretize_quadruple(d.F, d.G, d.H, d.K, grid);
    ASSERT_TRUE(check_grid_hypothesis(q).holds);
    for (long i = 0; i <= n; ++i) {
      for (long j = 0; j <= n; ++j) {
        double lhs = q.f.at(i) * q.g.at(j);
        double rhs = q.h.at(oracle::floor_half(i + j)) * q.k.at(oracle::ceil_half(i + j));
        ASSERT_LE(lhs, rhs * (1 + 1e-12)) << n << " " << i << " " << j;
      }
    }
  }
}

TEST(Discretize, HypothesisFailureReported) {
  auto two = constant(2.0);
  auto one = constant(1.0);
  auto q = discretize_quadruple(two, two, one, one, GridSpec::make(1.0, 4));
  auto r = check_grid_hypothesis(q);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(*r.witness, (std::pair<Point, Point>{0, 0}));
  try {
    pl_limit_experiment(two, two, one, one, 1.0, {4});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kHypothesisFailedOnGrid);
  }
}

TEST(Quadrature, MatchesSimpsonAndClosedForms) {
  auto gauss = [](double x) { return std::exp(-x * x); };
  EXPECT_NEAR(quadrature(gauss, -6, 6), std::sqrt(M_PI) * std::erf(6.0), 1e-12);
  EXPECT_NEAR(quadrature(gauss, -kInfinity, kInfinity), std::sqrt(M_PI), 1e-10);
  auto wiggle = [](double x) { return std::sin(3 * x) * std::exp(-x / 4) + x * x; };
  EXPECT_NEAR(quadrature(wiggle, -2, 5), oracle::simpson(wiggle, -2, 5, 20000), 1e-9);
  EXPECT_NEAR(gaussian_expectation([](double) { return 1.0; }), 1.0, 1e-10);
  EXPECT_NEAR(gaussian_expectation([](double x) { return x * x; }), 1.0, 1e-10);
  EXPECT_NEAR(gaussian_expectation([](double x) { return std::exp(x); }), std::exp(0.5), 1e-10);
}

TEST(PlLimit, GaussianConverges) {
  auto d = pl_demo("gaussian");
  auto rows = pl_limit_experiment(d.F, d.G, d.H, d.K, d.half_width, {64, 256, 1024, 4096});
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.holds);
    EXPECT_NEAR(r.target, 1.0, 1e-12);
  }
  EXPECT_LT(rows.back().rel_err, 0.02);
  EXPECT_LT(rows.back().rel_err, rows.front().rel_err);
}

TEST(PlLimit, ShiftedAndZero) {
  auto s = pl_demo("shifted");
  for (const auto& r : pl_limit_experiment(s.F, s.G, s.H, s.K, s.half_width, {32, 128, 512})) {
    EXPECT_TRUE(r.holds);
    EXPECT_LE(r.ratio, 1.0 + 1e-12);
  }
  auto z = pl_demo("zero");
  for (const auto& r : pl_limit_experiment(z.F, z.G, z.H, z.K, z.half_width, {16, 64})) {
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_GT(r.rhs, 0.0);
    EXPECT_TRUE(r.holds);
  }
  EXPECT_THROW(pl_demo("nope"), Error);
}

TEST(Clt, ZeroDemo) {
  auto d = clt_demo("zero");
  for (const auto& r : clt_experiment(d.f, d.g, d.h, d.bound, {1, 7, 100})) {
    EXPECT_NEAR(r.ef, 1.0, 1e-12);
    EXPECT_NEAR(r.eg, 1.0, 1e-12);
    EXPECT_NEAR(r.eh, 1.0, 1e-12);
    EXPECT_TRUE(r.holds);
  }
}

TEST(Clt, MatchesCubeEnumeration) {
  auto d = clt_demo("quadratic");
  const long n = 12;
  auto rows = clt_experiment(d.f, d.g, d.h, d.bound, {n});
  double ef = 0, eh = 0;
  for (unsigned x = 0; x < (1u << n); ++x) {
    double s = 2.0 * __builtin_popcount(x) - n;
    double z = s / std::sqrt(static_cast<double>(n));
    ef += std::exp(d.f(z));
    eh += std::exp(std::min(d.h(z), 3 * d.bound));
  }
  ef /= (1u << n);
  eh /= (1u << n);
  EXPECT_NEAR(rows[0].ef, ef, 1e-12);
  EXPECT_NEAR(rows[0].eh, eh, 1e-12);
}

TEST(Clt, TargetsAndConvergence) {
  auto lin = clt_demo("linear");
  auto rows = clt_experiment(lin.f, lin.g, lin.h, lin.bound, {100, 10000});
  EXPECT_NEAR(rows[0].target_f, std::exp(0.5), 1e-9);
  EXPECT_NEAR(rows[0].target_h, std::exp(0.5), 1e-9);
  EXPECT_LT(rows.back().rel_err, 0.02);
  for (const auto& r : rows) EXPECT_TRUE(r.holds);

  auto quad = clt_demo("quadratic");
  auto qrows = clt_experiment(quad.f, quad.g, quad.h, quad.bound, {10000});
  EXPECT_NEAR(qrows[0].target_f, std::exp(0.25) / std::sqrt(2.0), 1e-9);
  EXPECT_LT(qrows[0].rel_err, 0.02);
  EXPECT_TRUE(qrows[0].holds);
}

TEST(Clt, Rejections) {
  auto c = clt_demo("concave");
  try {
    clt_experiment(c.f, c.g, c.h, c.bound, {10});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConvexityWitnessFailed);
  }
  auto lin = clt_demo("linear");
  try {
    clt_experiment(lin.f, lin.g, lin.h, 1.0, {10});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPreconditionViolated);
  }
}

TEST(CellLaw, UniformCells) {
  auto d = disp_demo("two-uniform");
  auto p = cell_law(d.nu0, 1, 4);
  EXPECT_EQ(p.min_point(), -4);
  EXPECT_EQ(p.max_point(), -1);
  for (Point k = -4; k <= -1; ++k) EXPECT_EQ(p.mass(k), make_rational(1, 4));
  CdfLaw wide{"uniform[0,2)",
              [](const Rational& x) -> Rational {
                if (sgn(x) <= 0) return 0;
                if (x >= 2) return 1;
                return x / 2;
              },
              std::nullopt};
  try {
    cell_law(wide, 1, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSupportExceedsWindow);
  }
}

TEST(Disp, SameUniformHasZeroGap) {
  auto d = disp_demo("same-uniform");
  for (const auto& r : rescaled_displacement_experiment(d.nu0, d.nu1, d.half_width, {1, 16, 256})) {
    EXPECT_NEAR(r.gap, 0.0, 1e-12);
    EXPECT_NEAR(r.h0, std::log(2.0), 1e-12);
  }
}

TEST(Disp, TwoUniform) {
  auto d = disp_demo("two-uniform");
  auto rows = rescaled_displacement_experiment(d.nu0, d.nu1, d.half_width, {4, 64, 2048});
  for (const auto& r : rows) {
    EXPECT_TRUE(r.holds);
    EXPECT_TRUE(r.jensen_holds);
    EXPECT_GE(r.gap, -1e-10);
    // Recompute the four entropies from the cell laws.
    auto p0 = cell_law(d.nu0, 1, r.n);
    auto p1 = cell_law(d.nu1, 1, r.n);
    auto mp = midpoint_measures(p0, p1);
    double shift = std::log(2.0 * static_cast<double>(r.n));
    EXPECT_NEAR(r.h0, entropy_rel_counting(p0) + shift, 1e-12);
    EXPECT_NEAR(r.h_minus, entropy_rel_counting(mp.nu_minus) + shift, 1e-12);
    EXPECT_NEAR(r.gap, r.h0 + r.h1 - r.h_minus - r.h_plus, 1e-9);
  }
  EXPECT_LT(rows.back().rel_err, 0.01);
}

TEST(Disp, DiracUniformPositiveGap) {
  auto d = disp_demo("dirac-uniform");
  for (const auto& r : rescaled_displacement_experiment(d.nu0, d.nu1, d.half_width, {4, 8, 32})) {
    EXPECT_GT(r.gap, 1e-6);
    EXPECT_FALSE(r.target0.has_value());
  }
}

TEST(Disp, TriangularApproachesEntropy) {
  auto d = disp_demo("triangular");
  auto rows = rescaled_displacement_experiment(d.nu0, d.nu1, d.half_width, {8, 64, 512});
  ASSERT_TRUE(rows[0].target0.has_value());
  EXPECT_NEAR(*rows[0].target0, std::log(2.0) - 0.5, 1e-15);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.holds);
    EXPECT_TRUE(r.jensen_holds);
  }
  EXPECT_LT(rel(rows[2].h0, *rows[2].target0), rel(rows[0].h0, *rows[0].target0));
  EXPECT_LT(rows.back().rel_err, 0.01);
}

TEST(Csv, HeadersAndRowCounts) {
  auto d = disp_demo("two-uniform");
  std::ostringstream out;
  write_csv(out, rescaled_displacement_experiment(d.nu0, d.nu1, 1, {2, 4}));
  std::string text = out.str();
  EXPECT_EQ(text.rfind("n,h0,h1", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}
