#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"

namespace qclab {
namespace {

using testing::cos_sum;
using testing::kPi;

TEST(FindRealZeros, CosineSmallWindow) {
  const ZeroSet z = find_real_zeros(cos_sum(), {-10.2, 10.2});
  ASSERT_EQ(z.distinct(), 20u);
  for (std::size_t k = 0; k < 20; ++k) {
    EXPECT_NEAR(z.points()[k].point, -9.5 + static_cast<double>(k), 1e-10);
    EXPECT_EQ(z.points()[k].multiplicity, 1);
  }
}

TEST(FindRealZeros, CosineSquaredHasDoubleZeros) {
  const ExpSum sq = multiply(cos_sum(), cos_sum());
  const ZeroSet z = find_real_zeros(sq, {-2.0, 2.0});
  ASSERT_EQ(z.distinct(), 4u);
  const double want[] = {-1.5, -0.5, 0.5, 1.5};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(z.points()[k].point, want[k], 1e-7);
    EXPECT_EQ(z.points()[k].multiplicity, 2);
  }
}

TEST(FindRealZeros, ConstantAndSingleExponentialHaveNone) {
  EXPECT_TRUE(find_real_zeros(canonicalize({{0.0, 1.0}}), {-5.0, 5.0}).empty());
  const ZeroSearch s = search_real_zeros(canonicalize({{0.7, complex(2.0, 1.0)}}), {-5.0, 5.0});
  EXPECT_TRUE(s.single_exponential);
  EXPECT_TRUE(s.zeros.empty());
}

TEST(FindRealZeros, BoundaryZeroIsRejected) {
  try {
    find_real_zeros(cos_sum(), {-10.5, 10.2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::boundary);
  }
}

TEST(FindRealZeros, CompletenessMatchesStripCount) {
  const ExpSum f = testing::union_sum();
  const Window w{-50.25, 50.25};
  const ZeroSearch s = search_real_zeros(f, w);
  EXPECT_EQ(s.zeros.total_multiplicity(), s.strip_count);
  const double h = zero_strip_height(f);
  EXPECT_EQ(count_zeros_rectangle(f, {w.lo, w.hi, -h, h}), s.zeros.total_multiplicity());
  EXPECT_LT(s.max_residual, 1e-8);
}

TEST(FindRealZeros, UnionZerosMatchClosedForm) {
  const ZeroSet z = find_real_zeros(testing::union_sum(), {-20.25, 20.25});
  const ZeroSet want = testing::union_lattice({-20.25, 20.25});
  ASSERT_EQ(z.distinct(), want.distinct());
  for (std::size_t k = 0; k < z.distinct(); ++k) {
    EXPECT_NEAR(z.points()[k].point, want.points()[k].point, 1e-10);
  }
}

TEST(FindRealZerosProperty, RefinementStability) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> amp(0.1, 0.9), freq(0.3, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    // product of two real cosines: real zeros only
    const ExpSum f = multiply(testing::cos_sum(freq(rng)), testing::cos_sum(freq(rng)));
    (void)amp;
    const Window w = safe_window(f, {-30.0, 30.0});
    ZeroOptions coarse;
    const ZeroSearch a = search_real_zeros(f, w, coarse);
    ZeroOptions fine;
    fine.scan_step = a.scan_step / 2.0;
    const ZeroSet b = find_real_zeros(f, w, fine);
    ASSERT_EQ(a.zeros.distinct(), b.distinct());
    for (std::size_t k = 0; k < b.distinct(); ++k) {
      EXPECT_NEAR(a.zeros.points()[k].point, b.points()[k].point, 1e-9);
      EXPECT_EQ(a.zeros.points()[k].multiplicity, b.points()[k].multiplicity);
    }
  }
}

TEST(FindRealZerosProperty, OddMultiplicityMeansSignChange) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> freq(0.3, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = freq(rng), b = freq(rng);
    ExpSum f = multiply(testing::cos_sum(a), testing::cos_sum(b));
    if (trial % 3 == 0) f = multiply(f, testing::cos_sum(a));
    const ZeroSet z = find_real_zeros(f, safe_window(f, {-20.0, 20.0}));
    for (const auto& p : z.points()) {
      const double l = evaluate(f, p.point - 1e-4).real();
      const double r = evaluate(f, p.point + 1e-4).real();
      if (p.multiplicity % 2 == 1) {
        EXPECT_LT(l * r, 0.0) << p.point;
      } else {
        EXPECT_GT(l * r, 0.0) << p.point;
      }
    }
  }
}

TEST(CountZerosRectangle, CosineBoxes) {
  const ExpSum f = cos_sum();
  EXPECT_EQ(count_zeros_rectangle(f, {0.0, 1.0, -1.0, 1.0}), 1);
  EXPECT_EQ(count_zeros_rectangle(f, {0.6, 0.9, -1.0, 1.0}), 0);
  EXPECT_EQ(count_zeros_rectangle(multiply(f, f), {0.0, 1.0, -1.0, 1.0}), 2);
  EXPECT_EQ(count_zeros_rectangle(f, {-3.0, 3.0, -2.0, 2.0}), 6);
}

TEST(CountZerosRectangle, ContourThroughZeroFails) {
  try {
    count_zeros_rectangle(cos_sum(), {0.5, 1.0, -1.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::contour_too_close);
  }
}

TEST(CountZerosRectangleProperty, MatchesClosedFormForShiftedBoxes) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> x(-40.0, 40.0), len(0.2, 8.0);
  const ExpSum f = testing::union_sum();
  const ZeroSet all = testing::union_lattice({-60.0, 60.0});
  int checked = 0;
  while (checked < 50) {
    const double a = x(rng), b = a + len(rng);
    try {
      const long n = count_zeros_rectangle(f, {a, b, -1.0, 1.0});
      EXPECT_EQ(n, all.count_closed(a, b));
      ++checked;
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::contour_too_close);
    }
  }
}

TEST(Realness, Cosine) {
  const RealnessReport r = realness_check(cos_sum(), {-10.2, 10.2}, 1.0);
  EXPECT_TRUE(r.all_real);
  EXPECT_EQ(r.real_count, 20);
  EXPECT_EQ(r.total_count, 20);
}

TEST(Realness, OffAxisZero) {
  const ExpSum f = canonicalize({{0.0, 1.0}, {1.0, -0.25}});
  // zeros at x integer, y = -log 4 / (2 pi) ~ -0.2206
  const RealnessReport r = realness_check(f, {-3.3, 3.4}, 0.5);
  EXPECT_FALSE(r.all_real);
  EXPECT_EQ(r.real_count, 0);
  EXPECT_EQ(r.total_count, 7);
}

TEST(Realness, ConstantIsVacuous) {
  const RealnessReport r = realness_check(canonicalize({{0.0, 2.0}}), {-1.0, 1.0}, 0.5);
  EXPECT_TRUE(r.all_real);
  EXPECT_EQ(r.real_count, 0);
  EXPECT_EQ(r.total_count, 0);
}

TEST(ZeroStrip, ContainsOffAxisZero) {
  const ExpSum f = canonicalize({{0.0, 1.0}, {1.0, -0.25}});
  EXPECT_GT(zero_strip_height(f), std::log(4.0) / (2.0 * kPi));
}

TEST(ZeroSetType, CountsAndTranslation) {
  const ZeroSet z({-2.0, 2.0}, {{1.0, 1}, {-1.0, 2}, {0.0, 1}});
  EXPECT_EQ(z.points()[0].point, -1.0);
  EXPECT_EQ(z.total_multiplicity(), 4);
  EXPECT_EQ(z.count_closed(-1.0, 0.0), 3);
  EXPECT_EQ(z.count_half_open(-1.0, 0.0), 2);
  EXPECT_EQ(z.expanded().size(), 4u);
  const ZeroSet t = z.translated(0.5);
  EXPECT_EQ(t.points()[0].point, -0.5);
  EXPECT_EQ(t.window().hi, 2.5);
}

TEST(ZeroSetType, RejectsInvalid) {
  EXPECT_THROW(ZeroSet({-1.0, 1.0}, {{2.0, 1}}), Error);
  EXPECT_THROW(ZeroSet({-1.0, 1.0}, {{0.0, 0}}), Error);
}

}  // namespace
}  // namespace qclab
