#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mod3gal/curve.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mod3gal;

namespace {

const Genus2Curve& elkies() {
  static const Genus2Curve c = curve_validate(parse_coefficients("-16,-60,-543,1278,-693,54,-27"));
  return c;
}

}  // namespace

TEST(Curve, ValidateExamples) {
  const Genus2Curve& c = elkies();
  EXPECT_EQ(c.degree(), 6);
  for (std::uint64_t p : {2, 3, 7, 13, 43}) EXPECT_TRUE(c.is_bad(p)) << p;
  EXPECT_FALSE(c.is_bad(5));
  const Genus2Curve q = curve_validate(parse_coefficients("1,0,0,0,0,1"));
  for (std::uint64_t p : {2, 3, 5}) EXPECT_TRUE(q.is_bad(p));
  EXPECT_THROW(curve_validate(parse_coefficients("0,0,0,0,0,0,1")), std::invalid_argument);
  EXPECT_THROW(curve_validate(parse_coefficients("1,1")), std::invalid_argument);
  EXPECT_THROW(parse_coefficients("1,x"), std::invalid_argument);
}

TEST(Curve, HIsCompletedIntoF) {
  const Genus2Curve c = curve_validate(parse_coefficients("0,0,0,1,0,1"), parse_coefficients("1,0,1"));
  const ZPoly want{1, 0, 2, 4, 1, 4};  // 4f + h^2
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(c.F[i], want[i]);
}

TEST(Curve, PointCountExamples) {
  const Genus2Curve a = curve_validate(parse_coefficients("1,0,0,0,0,1"));
  EXPECT_EQ(count_points(a, GFq::make(7, 1)), 8);
  const Genus2Curve b = curve_validate(parse_coefficients("0,1,0,0,0,1"));
  EXPECT_EQ(count_points(b, GFq::make(5, 1)), 6);
  const Genus2Curve s = curve_validate(parse_coefficients("1,0,0,0,0,0,1"));
  EXPECT_EQ(count_points(s, GFq::make(7, 1)), 16);
}

TEST(Curve, EulerFactorExamples) {
  const Genus2Curve a = curve_validate(parse_coefficients("1,0,0,0,0,1"));
  const EulerFactor La = euler_factor(a, 7);
  EXPECT_EQ(La.e1, 0);
  EXPECT_EQ(La.e2, 0);
  EXPECT_EQ(La.value_at_one(), 50);
  const Genus2Curve s = curve_validate(parse_coefficients("1,0,0,0,0,0,1"));
  const EulerFactor Ls = euler_factor(s, 5);
  const auto co = Ls.coefficients();
  EXPECT_EQ(co[1], 0);
  EXPECT_EQ(co[2], 10);
  EXPECT_EQ(co[3], 0);
  EXPECT_EQ(co[4], 25);
  EXPECT_EQ(group_order_ext(La, 1), 50);
  EXPECT_EQ(group_order_ext(Ls, 1), 36);
  EXPECT_THROW(euler_factor(a, 5), std::invalid_argument);
}

TEST(Curve, FastCountsMatchBruteForce) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 10; ++t) {
    const Genus2Curve c = test::random_curve(rng, 5 + t % 2);
    for (std::uint32_t p : primes_up_to(31)) {
      if (c.is_bad(p)) continue;
      const auto [n1, n2] = count_points_p_p2(c, p);
      EXPECT_EQ(n1, oracle::naive_count(c, p));
      EXPECT_EQ(BigInt(n1), count_points(c, GFq::make(p, 1)));
      EXPECT_EQ(BigInt(n2), count_points(c, GFq::make(p, 2)));
    }
  }
}

TEST(Curve, WeilBounds) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 6; ++t) {
    const Genus2Curve c = test::random_curve(rng, 5 + t % 2, 50);
    for (std::uint32_t p : primes_up_to(400)) {
      if (c.is_bad(p)) continue;
      const EulerFactor L = euler_factor(c, p);
      const auto [n1, n2] = count_points_p_p2(c, p);
      const double s2 = double(p) * p + 1 - double(n2);
      EXPECT_LE(std::abs(double(L.e1)), 4 * std::sqrt(double(p)));
      EXPECT_LE(std::abs(s2), 4.0 * p);
      EXPECT_GT(L.value_at_one(), 0);
      const auto co = L.coefficients();
      EXPECT_EQ(co[3], co[1] * p);
      EXPECT_EQ(co[4], BigInt(p) * p);
    }
  }
}

TEST(Curve, GroupOrderOverExtensionsMatchesResultant) {
  // #J(F_{p^k}) = prod (1 - a_i^k) over Frobenius eigenvalues; k = 2 via L(1) L(-1).
  std::mt19937_64 rng(33);
  const Genus2Curve c = test::random_curve(rng, 5);
  for (std::uint32_t p : primes_up_to(60)) {
    if (c.is_bad(p)) continue;
    const EulerFactor L = euler_factor(c, p);
    BigInt at_minus_one = 0;
    const auto co = L.coefficients();
    for (int i = 0; i < 5; ++i) at_minus_one += (i % 2 ? -co[i] : co[i]);
    EXPECT_EQ(group_order_ext(L, 2), L.value_at_one() * at_minus_one);
  }
}

TEST(Curve, ThreeRankBoundFromCharpoly) {
  const Genus2Curve a = curve_validate(parse_coefficients("1,0,0,0,0,1"));
  EXPECT_EQ(three_rank_bound(euler_factor(a, 7), 1), 0);
  const Genus2Curve s = curve_validate(parse_coefficients("1,0,0,0,0,0,1"));
  EXPECT_EQ(three_rank_bound(euler_factor(s, 5), 1), 2);
  EXPECT_EQ(euler_factor(s, 5).mod3(), (std::array<std::uint8_t, 5>{1, 0, 1, 0, 1}));
}
