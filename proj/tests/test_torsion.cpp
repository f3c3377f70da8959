#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "mod3gal/torsion.hpp"
#include "support.hpp"

using namespace mod3gal;

namespace {

const Genus2Curve& x5p1() {
  static const Genus2Curve c = curve_validate(parse_coefficients("1,0,0,0,0,1"));
  return c;
}
const Genus2Curve& x6p1() {
  static const Genus2Curve c = curve_validate(parse_coefficients("1,0,0,0,0,0,1"));
  return c;
}

/// Model over the smallest F_{p^K} containing J[3], with a basis of J[3].
struct FullTorsion {
  CurveModel model;
  std::vector<MumfordDivisor> tops;
};

FullTorsion full_torsion(const Genus2Curve& c, std::uint32_t p, std::mt19937_64& rng) {
  const FrobeniusClass fc = frobenius_class(c, p);
  CurveModel model = make_model(c, p, fc.K, 0);
  const SylowBasis S = sylow3(model.jacobian(), group_order_ext(euler_factor(c, p), fc.K), rng, 4);
  return {std::move(model), S.tops};
}

}  // namespace

TEST(Torsion, FactorDegreesOfXSixPlusOne) {
  // Distinct degrees: x^6+1 splits as 1,1,2,2 mod 5, as 2,2,2 mod 7 and into linears mod 13.
  EXPECT_EQ(factor_degrees(x6p1().reduce(5), 5), (std::vector<int>{1, 2}));
  EXPECT_EQ(factor_degrees(x6p1().reduce(7), 7), (std::vector<int>{2}));
  EXPECT_EQ(factor_degrees(x6p1().reduce(13), 13), (std::vector<int>{1}));
  EXPECT_EQ(factor_degrees(fp::Poly{1, 1, 0, 1}, 2), (std::vector<int>{3}));
}

TEST(Torsion, ThreeRankExamples) {
  EXPECT_EQ(three_rank(x5p1(), 7, 1), 0);
  EXPECT_EQ(three_rank(x6p1(), 5, 1), 2);
  const Signature a = signature_at(x5p1(), 7);
  EXPECT_EQ(a, (Signature{{1, 0, 0, 0, 1}, 0}));
  const Signature b = signature_at(x6p1(), 5);
  EXPECT_EQ(b, (Signature{{1, 0, 1, 0, 1}, 2}));
}

TEST(Torsion, SylowOrderMatchesGroupOrder) {
  std::mt19937_64 rng(51);
  const Genus2Curve c = x6p1();
  const CurveModel m = make_model(c, 5, 1, 0);
  const BigInt n = group_order_ext(euler_factor(c, 5), 1);
  const SylowBasis S = sylow3(m.jacobian(), n, rng);
  EXPECT_TRUE(S.complete());
  EXPECT_EQ(S.rank(), 2);
  BigInt three_part = 1;
  for (int i = 0; i < S.full_exponent; ++i) three_part *= 3;
  EXPECT_EQ(n % three_part, 0);
  EXPECT_NE((n / three_part) % 3, 0);
}

TEST(Torsion, ThreeRankIsMonotoneAlongDivisibility) {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 4; ++t) {
    const Genus2Curve c = test::random_curve(rng, 5 + t % 2);
    for (std::uint32_t p : {5u, 7u, 11u, 13u}) {
      if (c.is_bad(p)) continue;
      const int r1 = three_rank(c, p, 1), r2 = three_rank(c, p, 2), r4 = three_rank(c, p, 4);
      EXPECT_LE(r1, r2);
      EXPECT_LE(r2, r4);
      EXPECT_LE(r4, 4);
      EXPECT_LE(r1, three_rank_bound(euler_factor(c, p), 1));
    }
  }
}

TEST(Torsion, FrobeniusClassExamples) {
  const GroupTable& g = GroupTable::instance();
  const FrobeniusClass a = frobenius_class(x6p1(), 5);
  EXPECT_EQ(charpoly_rev(a.matrix), (std::array<std::uint8_t, 5>{1, 0, 1, 0, 1}));
  EXPECT_EQ(fixed_dim(a.matrix), 2);
  EXPECT_EQ(similitude(a.matrix), 2);
  EXPECT_EQ(g.classes()[a.class_id].signature, signature_at(x6p1(), 5));
  const FrobeniusClass b = frobenius_class(x5p1(), 7);
  EXPECT_EQ(charpoly_rev(b.matrix), (std::array<std::uint8_t, 5>{1, 0, 0, 0, 1}));
  EXPECT_EQ(fixed_dim(b.matrix), 0);
  EXPECT_EQ(similitude(b.matrix), 1);
}

TEST(Torsion, FrobeniusClassIsConsistentAndSeedStable) {
  std::mt19937_64 rng(53);
  const GroupTable& g = GroupTable::instance();
  int checked = 0;
  while (checked < 6) {
    const Genus2Curve c = test::random_curve(rng, 5 + checked % 2);
    const auto primes = primes_up_to(50);
    const std::uint32_t p = primes[rng() % primes.size()];
    if (c.is_bad(p)) continue;
    ++checked;
    const FrobeniusClass fc = frobenius_class(c, p, 0);
    EXPECT_EQ(charpoly_rev(fc.matrix), euler_factor(c, p).mod3());
    EXPECT_EQ(similitude(fc.matrix), static_cast<int>(p % 3));
    EXPECT_EQ(fixed_dim(fc.matrix), three_rank(c, p, 1));
    EXPECT_EQ(g.classes()[fc.class_id].signature, signature_at(c, p));
    for (std::uint64_t seed = 1; seed < 5; ++seed) EXPECT_EQ(frobenius_class(c, p, seed).class_id, fc.class_id);
  }
}

TEST(Torsion, TwistedFrobeniusAgreesWithMatrixPowers) {
  // x^6 + 1 has no root mod 7, so the working model is twisted.
  const FrobeniusClass fc = frobenius_class(x6p1(), 7);
  Mat4 power = Mat4::identity();
  for (int k = 1; k <= 6; ++k) {
    power = power * fc.matrix;
    EXPECT_EQ(three_rank(x6p1(), 7, k), fixed_dim(power)) << "k=" << k;
  }
}

TEST(WeilPairing, AlternatingBilinearNondegenerate) {
  std::mt19937_64 rng(54);
  const FullTorsion ft = full_torsion(x6p1(), 5, rng);
  const Jacobian& J = ft.model.jacobian();
  ASSERT_EQ(ft.tops.size(), 4u);
  const Fe zeta = primitive_cube_root(J.field(), rng);
  const auto& b = ft.tops;
  Mat4 gram;
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(weil_pairing(J, b[i], b[i], zeta, rng), 0);
    for (int j = 0; j < 4; ++j) {
      const int e = weil_pairing(J, b[i], b[j], zeta, rng);
      gram(i, j) = static_cast<std::uint8_t>(e);
      EXPECT_EQ((e + weil_pairing(J, b[j], b[i], zeta, rng)) % 3, 0);
    }
  }
  EXPECT_EQ(rank(gram), 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        const int lhs = weil_pairing(J, J.add(b[i], b[j]), b[k], zeta, rng);
        EXPECT_EQ(lhs, (gram(i, k) + gram(j, k)) % 3);
      }
  EXPECT_EQ(weil_pairing(J, J.negate(b[0]), b[3], zeta, rng), (3 - gram(0, 3)) % 3);
}

TEST(WeilPairing, GaloisCovariance) {
  std::mt19937_64 rng(55);
  const FullTorsion ft = full_torsion(x6p1(), 5, rng);
  const Jacobian& J = ft.model.jacobian();
  const Fe zeta = primitive_cube_root(J.field(), rng);
  const auto& b = ft.tops;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const int e = weil_pairing(J, b[i], b[j], zeta, rng);
      const int f = weil_pairing(J, ft.model.frobenius(b[i]), ft.model.frobenius(b[j]), zeta, rng);
      EXPECT_EQ(f, e * (5 % 3) % 3);
    }
}

TEST(WeilPairing, SymplecticBasisHasStandardGram) {
  std::mt19937_64 rng(56);
  const FullTorsion ft = full_torsion(x6p1(), 5, rng);
  const Jacobian& J = ft.model.jacobian();
  const TorsionBasis tb = make_torsion_basis(J, ft.tops, rng);
  EXPECT_EQ(tb.gram, symplectic_form());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(weil_pairing(J, tb.basis[i], tb.basis[j], tb.zeta, rng), tb.gram(i, j));
  const TorsionSpan span(J, {tb.basis.begin(), tb.basis.end()});
  EXPECT_EQ(span.dim(), 4);
}
