#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"

namespace qclab {
namespace {

using testing::cos_sum;
using testing::half_integer_measure;
using testing::half_integers;
using testing::kPi;
using testing::kSqrt2;

TEST(CanonicalProduct, HalfIntegerLattice) {
  const ZeroSet a = half_integers({-10000.0, 10000.0});
  const ProductValue at0 = canonical_product(a, 0.0);
  EXPECT_EQ(at0.value, complex(1.0, 0.0));
  EXPECT_NEAR(std::abs(canonical_product(a, 1.0).value - (-1.0)), 0.0, 1e-4);
  EXPECT_NEAR(std::abs(canonical_product(a, complex(0.0, 1.0)).value - std::cosh(kPi)), 0.0, 1e-3);
  EXPECT_NEAR(std::cosh(kPi), 11.5920, 1e-4);
  EXPECT_EQ(canonical_product(a, 1.0).pairs, 9999);
}

TEST(CanonicalProduct, ZeroAtAPoint) {
  const ZeroSet a({-5.0, 5.0}, {{-1.5, 1}, {0.5, 3}, {2.5, 1}});
  const ProductValue p = canonical_product(a, 0.5);
  EXPECT_EQ(p.value, complex(0.0, 0.0));
  EXPECT_EQ(p.zero_multiplicity, 3);
}

TEST(CanonicalProduct, OriginInSetIsTranslated) {
  // 0 is a point, so the set is moved to Z + 1/2 and evaluated at z + 1/2
  const ZeroSet a = testing::lattice(0.0, 1.0, {-5000.5, 5000.5});
  const ProductValue p = canonical_product(a, 0.25);
  EXPECT_DOUBLE_EQ(p.translation, 0.5);
  EXPECT_NEAR(p.value.real(), std::cos(0.75 * kPi), 1e-3);
}

TEST(CanonicalProductProperty, AgreesWithExpSum) {
  const ZeroSet a = testing::union_lattice({-20000.25, 20000.25});
  const ExpSum f = testing::union_sum();
  const complex f0 = evaluate(f, 0.0);
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> re(-5.0, 5.0), im(-1.5, 1.5);
  for (int k = 0; k < 50; ++k) {
    const complex z = k < 25 ? complex(re(rng), 0.0) : complex(re(rng), im(rng));
    const ProductValue p = canonical_product(a, z);
    const complex want = evaluate(f, z) / f0;
    // absolute at real points near zeros, relative elsewhere
    const double scale = std::max(std::abs(want), 1.0);
    EXPECT_LE(std::abs(p.value - want) / scale, 1e-4) << z;
    EXPECT_LE(std::abs(p.value - want) / scale, 10.0 * p.error_estimate + 1e-9) << z;
  }
}

TEST(LogSeries, LatticeTerms) {
  const LogSeries ls = log_series_at_height_one(half_integer_measure(10), 1.0);
  // terms below 1e-14 of the norm are pruned by the algebra
  double norm = 0.0;
  for (int k = 1; k <= 10; ++k) norm += std::exp(-2.0 * kPi * k) / k;
  std::size_t kept = 0;
  for (int k = 1; k <= 10; ++k) kept += std::exp(-2.0 * kPi * k) / k >= 1e-14 * norm;
  ASSERT_EQ(ls.series.size(), kept);
  for (std::size_t i = 0; i < kept; ++i) {
    const int k = static_cast<int>(i) + 1;
    const Term& t = ls.series.terms()[i];
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    EXPECT_EQ(t.omega, k);
    EXPECT_NEAR(t.q.real(), -(sign / k) * std::exp(-2.0 * kPi * k), 1e-18);
  }
  EXPECT_NEAR(ls.series.terms()[0].q.real(), 1.8674e-3, 1e-7);
  EXPECT_EQ(ls.t3_value, 0.0);
  EXPECT_FALSE(ls.over_budget);
}

TEST(LogSeries, EmptyAndErrors) {
  EXPECT_TRUE(log_series_at_height_one(PointMeasure(1.0, {}), 1.0).series.empty());
  try {
    log_series_at_height_one(half_integer_measure(3), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}

TEST(LogSeries, TinyFrequencyIsFlagged) {
  const PointMeasure mu(1.0, {{1e-6, 1.0}, {-1e-6, 1.0}});
  const LogSeries ls = log_series_at_height_one(mu, 1.0);
  EXPECT_TRUE(ls.over_budget);
  EXPECT_NEAR(ls.t3_value, 1e6, 1e-3);
  EXPECT_NEAR(std::abs(ls.series.terms()[0].q), 1e6 * std::exp(-2.0 * kPi * 1e-6), 1e-3);
  LogSeriesOptions strict;
  strict.strict = true;
  try {
    log_series_at_height_one(mu, 1.0, strict);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}

TEST(Rebuild, CosineFromLatticeMeasure) {
  const Rebuilt r = rebuild_dirichlet(half_integer_measure(10), 1.0);
  ASSERT_EQ(r.sum.size(), 2u);
  EXPECT_NEAR(r.sum.terms()[0].omega, -0.5, 1e-12);
  EXPECT_NEAR(r.sum.terms()[1].omega, 0.5, 1e-12);
  EXPECT_NEAR(std::abs(r.sum.terms()[0].q - 0.5), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(r.sum.terms()[1].q - 0.5), 0.0, 1e-8);
  ASSERT_EQ(r.height_one.size(), 2u);
  const double p0 = r.height_one.terms()[0].q.real(), p1 = r.height_one.terms()[1].q.real();
  // up to the global constant, p1 / p0 = e^{-2 pi}
  EXPECT_NEAR(p1 / p0, std::exp(-2.0 * kPi), 1e-12);
  EXPECT_NEAR(std::exp(kPi) / 2.0, 11.5703, 1e-4);
  EXPECT_NEAR(std::exp(-kPi) / 2.0, 0.02160, 1e-5);
  EXPECT_TRUE(r.extremes_attained);
  EXPECT_FALSE(r.degenerate);
  EXPECT_NEAR(std::abs(evaluate(r.sum, 0.0) - 1.0), 0.0, 1e-15);
}

TEST(Rebuild, EmptyMeasureIsDegenerate) {
  const Rebuilt r = rebuild_dirichlet(PointMeasure(1.0, {}), 1.0);
  EXPECT_TRUE(r.degenerate);
  ASSERT_EQ(r.sum.size(), 1u);
  EXPECT_NEAR(r.sum.terms()[0].omega, -0.5, 1e-15);
}

TEST(Rebuild, UnionRoundtrip) {
  LogDerivOptions o;
  o.cutoff = 11.0;
  const PointMeasure mu = logderiv_measure(testing::union_sum(), o).measure;
  const Rebuilt r = rebuild_dirichlet(mu);
  EXPECT_TRUE(r.extremes_attained);
  EXPECT_NEAR(r.spectrum_width, 1.0 + kSqrt2, 1e-9);
  const Window w = safe_window(r.sum, {-20.0, 20.0});
  const ZeroSet got = find_real_zeros(r.sum, w);
  const ZeroSet want = testing::union_lattice(w);
  ASSERT_EQ(got.distinct(), want.distinct());
  for (std::size_t k = 0; k < got.distinct(); ++k) {
    EXPECT_NEAR(got.points()[k].point, want.points()[k].point, 1e-6);
  }
}

TEST(RebuildProperty, ProductsOfCosinesRoundtrip) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> freq(0.4, 1.6);
  for (int trial = 0; trial < 5; ++trial) {
    const ExpSum f = multiply(testing::cos_sum(freq(rng)), testing::cos_sum(freq(rng)));
    LogDerivOptions o;
    o.cutoff = 8.0;
    o.check_realness = false;
    const Rebuilt r = rebuild_dirichlet(logderiv_measure(f, o).measure);
    EXPECT_TRUE(r.extremes_attained);
    for (double x : {-3.3, -1.1, 0.4, 2.7}) {
      EXPECT_NEAR(std::abs(evaluate(r.sum, x) - evaluate(f, x) / evaluate(f, 0.0)), 0.0, 1e-6);
    }
  }
}

TEST(GFunction, LatticeIsZero) {
  const PointMeasure mu = half_integer_measure(10);
  EXPECT_EQ(g_function(mu, complex(3.7, 0.0)), complex(0.0, 0.0));
  const GReport r = g_boundedness(mu, {10.0, 100.0, 1000.0});
  EXPECT_EQ(r.bounded_verdict, Verdict::bounded);
  for (const auto& [x, s] : r.windows) EXPECT_EQ(s, 0.0);
}

TEST(GFunction, SingleAtomClosedForm) {
  const PointMeasure mu(0.6, {{0.6, -0.6}, {-0.6, -0.6}});
  for (double x : {0.1, 0.77, 5.0}) {
    const complex want = 1.0 - std::polar(1.0, 1.2 * kPi * x);
    EXPECT_NEAR(std::abs(g_function(mu, x) - want), 0.0, 1e-14);
  }
  const GReport r = g_boundedness(mu, {10.0, 100.0, 1000.0});
  EXPECT_NEAR(r.windows.back().second, 2.0, 1e-12);
  EXPECT_EQ(r.bounded_verdict, Verdict::bounded);
}

TEST(GFunction, HarmonicAtoms) {
  std::vector<Atom> atoms;
  for (int k = 2; k <= 20; ++k) atoms.push_back({1.0 / k, 1.0 / k});
  const PointMeasure mu(1.0, atoms);
  const double x = 2.3;
  complex want = 0.0;
  for (int k = 2; k <= 20; ++k) want += std::polar(1.0, 2.0 * kPi * x / k) - 1.0;
  EXPECT_NEAR(std::abs(g_function(mu, x) - want), 0.0, 1e-12);
  const GReport r = g_boundedness(mu, {10.0, 30.0, 100.0, 300.0, 1000.0});
  EXPECT_LE(r.windows.back().second, 38.0 + 1e-9);
  EXPECT_NE(r.bounded_verdict, Verdict::growing);
}

TEST(GFunctionProperty, SupsAreNondecreasingAndVerdictFollowsSlope) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> g(0.01, 0.99), b(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Atom> atoms;
    for (int k = 0; k < 5; ++k) atoms.push_back({g(rng), complex(b(rng), b(rng))});
    const GReport r = g_boundedness(PointMeasure(1.0, atoms), {10.0, 40.0, 160.0});
    for (std::size_t k = 1; k < r.windows.size(); ++k) EXPECT_GE(r.windows[k].second, r.windows[k - 1].second);
    if (r.bounded_verdict == Verdict::growing) {
      EXPECT_GT(r.slope_fit, 0.1);
    } else if (r.bounded_verdict == Verdict::bounded) {
      EXPECT_LT(r.slope_fit, 0.02);
    }
  }
}

TEST(ExponentialType, Cosine) {
  const TypeEstimate t = exponential_type(cos_sum(), {10.0, 20.0});
  EXPECT_NEAR(t.raw, std::log(std::cosh(20.0 * kPi)) / 20.0, 1e-12);
  EXPECT_NEAR(t.raw, 3.1069, 1e-4);
  EXPECT_NEAR(t.estimate, kPi, 0.05);
}

TEST(ExponentialType, SingleExponential) {
  const double w = 0.3;
  const TypeEstimate t = exponential_type(canonicalize({{w, complex(2.0, -1.0)}}), {5.0, 10.0});
  EXPECT_NEAR(t.estimate, -2.0 * kPi * w, 1e-12);
  EXPECT_NEAR(t.raw, std::log(std::sqrt(5.0)) / 10.0 - 2.0 * kPi * w, 1e-12);
}

TEST(ExponentialType, WithinFivePercentOnFixtures) {
  const double pd = kPi * (1.0 + kSqrt2);
  EXPECT_NEAR(exponential_type(testing::union_sum(), {10.0, 20.0}).estimate, pd, 0.05 * pd);
  LogDerivOptions o;
  o.cutoff = 11.0;
  const Rebuilt r = rebuild_dirichlet(logderiv_measure(testing::union_sum(), o).measure);
  EXPECT_NEAR(exponential_type(r.sum, {10.0, 20.0}).estimate, pd, 0.02 * pd);
  EXPECT_NEAR(exponential_type(half_integers({-5000.0, 5000.0}), {10.0, 20.0}).estimate, kPi, 0.05 * kPi);
  EXPECT_NEAR(exponential_type(testing::union_lattice({-5000.25, 5000.25}), {10.0, 20.0}).estimate, pd,
              0.05 * pd);
}

}  // namespace
}  // namespace qclab
