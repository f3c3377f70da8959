#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "mod3gal/jacobian.hpp"
#include "mod3gal/torsion.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mod3gal;

namespace {

Jacobian quintic_jacobian(const Genus2Curve& c, std::uint32_t p) {
  const GFq F = GFq::make(p, 1);
  return Jacobian(F, fq::embed(F, c.reduce(p)));
}

}  // namespace

TEST(Jacobian, ExhaustiveClassCountEqualsLAtOne) {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int t = 0; t < 8; ++t) {
    const Genus2Curve c = test::random_curve(rng, 5);
    for (std::uint32_t p : {5u, 7u}) {
      if (c.is_bad(p)) continue;
      const Jacobian J = quintic_jacobian(c, p);
      EXPECT_EQ(BigInt(oracle::enumerate_classes(J).size()), euler_factor(c, p).value_at_one()) << c.to_string() << " p=" << p;
      ++checked;
    }
  }
  EXPECT_GE(checked, 8);
}

TEST(Jacobian, SexticWithRationalRootViaQuinticModel) {
  std::mt19937_64 rng(42);
  int checked = 0;
  for (int t = 0; t < 40 && checked < 6; ++t) {
    const Genus2Curve c = test::random_curve(rng, 6);
    for (std::uint32_t p : {5u, 7u}) {
      if (c.is_bad(p) || model_degree(c, p, 1) != 1) continue;
      const CurveModel m = make_model(c, p, 1, 0);
      EXPECT_EQ(BigInt(oracle::enumerate_classes(m.jacobian()).size()), euler_factor(c, p).value_at_one());
      ++checked;
    }
  }
  EXPECT_GE(checked, 4);
}

TEST(Jacobian, FullAdditionTableIsAnAbelianGroup) {
  const Genus2Curve c = curve_validate(parse_coefficients("0,1,0,0,0,1"));  // y^2 = x^5 + x
  const Jacobian J = quintic_jacobian(c, 5);
  const auto all = oracle::enumerate_classes(J);
  ASSERT_EQ(BigInt(all.size()), euler_factor(c, 5).value_at_one());
  std::map<Jacobian::Key, std::size_t> index;
  for (std::size_t i = 0; i < all.size(); ++i) index.emplace(J.key(all[i]), i);
  ASSERT_EQ(index.size(), all.size());
  const std::size_t n = all.size();
  std::vector<std::size_t> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const MumfordDivisor s = J.add(all[i], all[j]);
      ASSERT_TRUE(J.is_valid(s));
      table[i * n + j] = index.at(J.key(s));
    }
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(table[i * n + 0], i);
    std::set<std::size_t> row;
    for (std::size_t j = 0; j < n; ++j) {
      row.insert(table[i * n + j]);
      EXPECT_EQ(table[i * n + j], table[j * n + i]);
      for (std::size_t k = 0; k < n; ++k)
        ASSERT_EQ(table[table[i * n + j] * n + k], table[i * n + table[j * n + k]]);
    }
    EXPECT_EQ(row.size(), n);
    EXPECT_EQ(table[i * n + index.at(J.key(J.negate(all[i])))], 0u);
  }
}

TEST(Jacobian, ScalarMultiplicationLaws) {
  std::mt19937_64 rng(43);
  for (auto [p, k] : {std::pair{11u, 1}, {13u, 2}, {101u, 3}}) {
    const Genus2Curve c = test::random_curve(rng, 5);
    if (c.is_bad(p)) continue;
    const GFq F = GFq::make(p, k);
    const Jacobian J(F, fq::embed(F, c.reduce(p)));
    const BigInt order = group_order_ext(euler_factor(c, p), k);
    for (int t = 0; t < 20; ++t) {
      const MumfordDivisor d = J.random(rng);
      ASSERT_TRUE(J.is_valid(d));
      EXPECT_EQ(J.add(d, J.identity()), d);
      EXPECT_TRUE(J.add(d, J.negate(d)).is_identity());
      EXPECT_TRUE(J.scalar_mul(order, d).is_identity());
      const std::int64_t m = static_cast<std::int64_t>(rng() % 1000), n = static_cast<std::int64_t>(rng() % 1000);
      EXPECT_EQ(J.scalar_mul(m + n, d), J.add(J.scalar_mul(m, d), J.scalar_mul(n, d)));
      EXPECT_EQ(J.scalar_mul(-m, d), J.negate(J.scalar_mul(m, d)));
    }
  }
}
