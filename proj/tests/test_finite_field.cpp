#include <gtest/gtest.h>

#include <random>
#include <set>

#include "mod3gal/fq_poly.hpp"

using namespace mod3gal;

namespace {

void check_field_axioms(const GFq& F, std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < trials; ++i) {
    const Fe a = F.random(rng), b = F.random(rng), c = F.random(rng);
    EXPECT_EQ(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)));
    EXPECT_EQ(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)));
    EXPECT_EQ(F.mul(a, b), F.mul(b, a));
    EXPECT_EQ(F.add(a, F.neg(a)), F.zero());
    if (!F.is_zero(a)) {
      EXPECT_TRUE(F.is_one(F.mul(a, F.inv(a))));
      EXPECT_TRUE(F.is_one(F.pow(a, F.q() - 1)));
    }
    EXPECT_EQ(F.frobenius(a), F.pow(a, F.p()));
  }
}

}  // namespace

TEST(FiniteField, PrimeFieldAndQuadraticExtension) {
  const GFq F7 = GFq::make(7, 1);
  EXPECT_EQ(F7.q(), 7);
  const GFq F49 = GFq::make(7, 2);
  EXPECT_EQ(F49.q(), 49);
  EXPECT_TRUE(fp::is_irreducible(F49.desc().modulus, 7));
  std::set<Fe> seen;
  Fe x = F49.one();
  const Fe g = F49.gen();
  for (int i = 0; i < 48; ++i) {
    seen.insert(x);
    x = F49.mul(x, g);
  }
  EXPECT_TRUE(F49.is_one(x));  // order of any unit divides 48
}

TEST(FiniteField, LagrangeInF625) {
  const GFq F = GFq::make(5, 4);
  EXPECT_EQ(F.q(), 625);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Fe a = F.random(rng);
    if (!F.is_zero(a)) EXPECT_TRUE(F.is_one(F.pow(a, 624)));
  }
}

TEST(FiniteField, DeterministicModulus) {
  EXPECT_EQ(GFq::make(11, 5, 9).desc().modulus, GFq::make(11, 5, 9).desc().modulus);
  EXPECT_THROW(GFq::make(9, 1), std::invalid_argument);
  EXPECT_THROW(GFq::make(7, 0), std::invalid_argument);
}

TEST(FiniteField, Axioms) {
  check_field_axioms(GFq::make(5, 3), 1, 300);
  check_field_axioms(GFq::make(97, 6), 2, 200);
  check_field_axioms(GFq::make(2147483647u, 1), 3, 200);
  check_field_axioms(GFq::make(2147483629u, 3), 4, 100);  // exercises the fully reduced product
}

TEST(FiniteField, SqrtExamples) {
  const GFq F = GFq::make(7, 1);
  EXPECT_EQ(F.sqrt(F.zero()), F.zero());
  const auto r = F.sqrt(F.from_int(2));
  ASSERT_TRUE(r.has_value());
  EXPECT_TRUE((*r)[0] == 3 || (*r)[0] == 4);
  EXPECT_FALSE(F.sqrt(F.from_int(5)).has_value());
}

TEST(FiniteField, SqrtAgreesWithEulerCriterion) {
  for (auto [p, k] : {std::pair{7u, 3}, {13u, 2}, {17u, 4}, {101u, 2}, {5u, 6}}) {
    const GFq F = GFq::make(p, k);
    std::mt19937_64 rng(p * 31 + k);
    for (int i = 0; i < 1000; ++i) {
      const Fe a = F.random(rng);
      const Fe e = F.pow(a, (F.q() - 1) / 2);
      const auto r = F.sqrt(a);
      EXPECT_EQ(r.has_value(), F.is_zero(e) || F.is_one(e));
      if (r) EXPECT_EQ(F.sqr(*r), a);
    }
  }
}

TEST(FqPoly, DivisionAndGcd) {
  const GFq F = GFq::make(11, 2);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    FqPoly a(7), b(4);
    for (auto& c : a) c = F.random(rng);
    for (auto& c : b) c = F.random(rng);
    fq::trim(F, a);
    fq::trim(F, b);
    if (b.empty()) continue;
    const auto [q, r] = fq::divmod(F, a, b);
    EXPECT_LT(fq::deg(r), fq::deg(b));
    EXPECT_EQ(fq::add(F, fq::mul(F, q, b), r), a);
    const auto [d, s, t] = fq::xgcd(F, a, b);
    EXPECT_EQ(fq::add(F, fq::mul(F, s, a), fq::mul(F, t, b)), d);
    if (!d.empty()) {
      EXPECT_TRUE(fq::mod(F, a, d).empty());
      EXPECT_TRUE(fq::mod(F, b, d).empty());
    }
  }
}

TEST(FqPoly, RootsOfSplitPolynomial) {
  const GFq F = GFq::make(13, 1);
  std::mt19937_64 rng(6);
  FqPoly f{F.one()};
  const std::set<int> want{1, 4, 7, 12};
  for (int r : want) f = fq::mul(F, f, FqPoly{F.from_int(-r), F.one()});
  const auto roots = fq::roots(F, f, rng);
  std::set<int> got;
  for (const auto& r : roots) got.insert(static_cast<int>(r[0]));
  EXPECT_EQ(got, want);
}
