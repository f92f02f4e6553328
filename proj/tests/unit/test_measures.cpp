#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "dpl/error.hpp"
#include "dpl/measures.hpp"
#include "dpl/random.hpp"
#include "oracles.hpp"

using namespace dpl;

namespace {

Rational q(long p, long d) { return make_rational(p, static_cast<unsigned long>(d)); }
const double kLog2 = std::log(2.0);

}  // namespace

TEST(Rational, ParseAndFormat) {
  Rational r;
  ASSERT_TRUE(parse_rational("3/6", r));
  EXPECT_EQ(r, q(1, 2));
  ASSERT_TRUE(parse_rational("-0.25", r));
  EXPECT_EQ(r, q(-1, 4));
  ASSERT_TRUE(parse_rational("7", r));
  EXPECT_EQ(format_rational(r), "7");
  EXPECT_EQ(format_rational(q(2, 4)), "1/2");
  EXPECT_FALSE(parse_rational("1//2", r));
  EXPECT_FALSE(parse_rational("1/0", r));
  EXPECT_FALSE(parse_rational("", r));
  EXPECT_FALSE(parse_rational("abc", r));
}

TEST(Rational, MidpointMapsMatchIntegerDivision) {
  for (Point x = -9; x <= 9; ++x) {
    for (Point y = -9; y <= 9; ++y) {
      EXPECT_EQ(mid_floor(x, y), oracle::floor_half(x + y));
      EXPECT_EQ(mid_ceil(x, y), oracle::ceil_half(x + y));
      EXPECT_EQ(mid_floor(x, y) + mid_ceil(x, y), x + y);
    }
  }
}

TEST(Rational, LogOfHugeAndTinyValues) {
  Rational big = Rational(mpz_class(1) << 3000);
  EXPECT_NEAR(log_of(big), 3000 * kLog2, 1e-9);
  EXPECT_NEAR(log_of(1 / big), -3000 * kLog2, 1e-9);
  EXPECT_NEAR(log_of(q(1, 3)), std::log(1.0 / 3.0), 1e-15);
}

TEST(Pmf, PointMass) {
  auto d = Pmf::make(0, {Rational(1)});
  EXPECT_EQ(d, Pmf::dirac(0));
  EXPECT_EQ(d.support_size(), 1u);
}

TEST(Pmf, InteriorZerosKept) {
  auto nu = Pmf::make(0, {q(1, 2), 0, q(1, 2)});
  EXPECT_EQ(nu.width(), 3u);
  EXPECT_TRUE(nu.charges(0));
  EXPECT_FALSE(nu.charges(1));
  EXPECT_TRUE(nu.charges(2));
  EXPECT_EQ(nu.support_size(), 2u);
}

TEST(Pmf, NotNormalizedReportsDeficit) {
  try {
    Pmf::make(0, {q(1, 3), q(1, 3), q(1, 4)});
    FAIL() << "expected NotNormalized";
  } catch (const NotNormalizedError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotNormalized);
    EXPECT_EQ(e.deficit(), q(1, 12));
  }
}

TEST(Pmf, NegativeMassRejected) {
  try {
    Pmf::make(0, {q(3, 2), q(-1, 2)});
    FAIL() << "expected NegativeMass";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNegativeMass);
  }
}

TEST(Pmf, TrimsOuterZeros) {
  auto nu = Pmf::make(-2, {0, 0, q(1, 4), q(3, 4), 0});
  EXPECT_EQ(nu.offset(), 0);
  EXPECT_EQ(nu.width(), 2u);
  EXPECT_EQ(nu, Pmf::make(0, {q(1, 4), q(3, 4)}));
}

TEST(Pmf, RandomPmfsAreNormalizedAndCanonical) {
  PmfSampler s;
  s.max_width = 30;
  s.resolution = 64;
  s.hole_probability = 0.3;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    auto rng = Rng::derived(7, i);
    auto nu = random_pmf(rng, s);
    Rational total = 0;
    for (const auto& m : nu.masses()) total += m;
    ASSERT_EQ(total, 1);
    ASSERT_GT(nu.masses().front(), 0);
    ASSERT_GT(nu.masses().back(), 0);
    std::vector<Rational> copy(nu.masses().begin(), nu.masses().end());
    ASSERT_EQ(Pmf::make(nu.offset(), copy), nu);  // trimming is idempotent
  }
}

TEST(Entropy, KnownValues) {
  EXPECT_DOUBLE_EQ(entropy_rel_counting(Pmf::dirac(0)), 0.0);
  EXPECT_NEAR(entropy_rel_counting(Pmf::uniform(0, 1)), -kLog2, 1e-15);
  auto nu = Pmf::make(0, {q(1, 4), q(3, 4)});
  EXPECT_NEAR(entropy_rel_counting(nu), 0.25 * std::log(0.25) + 0.75 * std::log(0.75), 1e-15);
}

TEST(Entropy, TranslationInvariant) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = Rng::derived(11, i);
    auto nu = random_pmf(rng, PmfSampler{});
    EXPECT_DOUBLE_EQ(entropy_rel_counting(nu), entropy_rel_counting(nu.translated(17)));
  }
}

TEST(RelativeEntropy, KnownValues) {
  auto nu = Pmf::make(3, {q(1, 5), q(2, 5), q(2, 5)});
  EXPECT_NEAR(relative_entropy(nu, nu), 0.0, 1e-15);
  EXPECT_NEAR(relative_entropy(Pmf::dirac(1), Pmf::uniform(0, 1)), kLog2, 1e-15);
  EXPECT_EQ(relative_entropy(Pmf::dirac(2), Pmf::uniform(0, 1)),
            std::numeric_limits<double>::infinity());
}

TEST(RelativeEntropy, NonNegativeAndZeroOnlyOnEquality) {
  PmfSampler s;
  s.max_width = 6;
  s.offset_lo = 0;
  s.offset_hi = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    auto rng = Rng::derived(12, i);
    auto nu = random_pmf(rng, s);
    auto mu = random_pmf(rng, s);
    double h = relative_entropy(nu, mu);
    EXPECT_GE(h, -1e-12);
    if (nu == mu) {
      EXPECT_NEAR(h, 0.0, 1e-12);
    } else if (std::isfinite(h)) {
      EXPECT_GT(h, 0.0);
    }
  }
}

TEST(LogLaplace, KnownValues) {
  EXPECT_DOUBLE_EQ(log_laplace(RealFn::make(0, {0.0}), Base::counting()), 0.0);
  EXPECT_NEAR(log_laplace(RealFn::make(0, {0.0, 0.0}), Base::measure(Pmf::uniform(0, 1))), 0.0,
              1e-15);
  EXPECT_NEAR(log_laplace(RealFn::make(0, {0.0, std::log(3.0)}), Base::counting()),
              std::log(4.0), 1e-15);
}

TEST(DualOptimizer, KnownValues) {
  auto uni = dual_optimizer(RealFn::make(0, {0.0, 0.0}), Base::measure(Pmf::uniform(0, 1)));
  EXPECT_EQ(uni, Pmf::uniform(0, 1));
  auto nu = dual_optimizer(RealFn::make(0, {0.0, std::log(3.0)}), Base::counting());
  EXPECT_EQ(nu, Pmf::make(0, {q(1, 4), q(3, 4)}));
}

TEST(DualOptimizer, VariationalInequalityAndAttainment) {
  PmfSampler s;
  for (std::uint64_t i = 0; i < 500; ++i) {
    auto rng = Rng::derived(13, i);
    auto width = rng.uniform(1, 30);
    Point offset = rng.uniform(-5, 5);
    std::vector<double> v(static_cast<std::size_t>(width));
    for (auto& x : v) x = -4.0 + 8.0 * rng.unit();
    auto phi = RealFn::make(offset, v);
    Base base = i % 2 ? Base::counting() : Base::measure(Pmf::uniform(offset, offset + width - 1));
    double lhs = log_laplace(phi, base);
    ASSERT_LE(std::abs(dual_gap(phi, base, dual_optimizer(phi, base))), 1e-10);
    s.max_width = width;
    s.offset_lo = offset;
    s.offset_hi = offset;
    for (int t = 0; t < 100; ++t) {
      auto nu = random_pmf(rng, s);
      ASSERT_LE(integrate(phi, nu) - relative_entropy(nu, base), lhs + 1e-10);
    }
  }
}

TEST(Rationalize, ContinuedFractions) {
  EXPECT_EQ(rationalize(0.5, 100), q(1, 2));
  EXPECT_EQ(rationalize(1.0 / 3.0, 1000), q(1, 3));
  Rational pi = rationalize(M_PI, 113);
  EXPECT_EQ(pi, q(355, 113));
}
