#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "mod3gal/group_table.hpp"
#include "support.hpp"

using namespace mod3gal;

TEST(GroupTable, OrderAndClasses) {
  const GroupTable& g = GroupTable::instance();
  EXPECT_EQ(g.size(), 103680u);
  EXPECT_EQ(g.size(), 2u * 81u * 8u * 80u);
  EXPECT_EQ(g.num_classes(), 38u);
  const auto sizes = g.class_sizes();
  EXPECT_EQ(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}), g.size());
  EXPECT_EQ(sizes[g.class_of(g.identity())], 1u);
  EXPECT_EQ(sizes[g.class_of(g.minus_identity())], 1u);
}

TEST(GroupTable, ElementOrders) {
  const GroupTable& g = GroupTable::instance();
  std::set<int> orders;
  for (const auto& c : g.classes()) orders.insert(c.order);
  EXPECT_EQ(orders, (std::set<int>{1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 18, 20, 24}));
  EXPECT_EQ(g.exponent(), 360);
}

TEST(GroupTable, HalfOfTheGroupIsSymplectic) {
  const GroupTable& g = GroupTable::instance();
  std::size_t sp = 0;
  for (Elem x = 0; x < g.size(); ++x) sp += g.in_sp(x);
  EXPECT_EQ(sp, 51840u);
}

TEST(GroupTable, MultiplicationAgreesWithMatrices) {
  const GroupTable& g = GroupTable::instance();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Elem a = static_cast<Elem>(rng() % g.size()), b = static_cast<Elem>(rng() % g.size());
    EXPECT_EQ(g.mat(g.mul(a, b)), g.mat(a) * g.mat(b));
    EXPECT_EQ(g.mul(a, g.inv(a)), g.identity());
    EXPECT_EQ(g.index_of(g.mat(a)), a);
  }
}

TEST(GroupTable, ClassesAreConjugationInvariantWithUniformSignature) {
  const GroupTable& g = GroupTable::instance();
  std::mt19937_64 rng(8);
  for (int i = 0; i < 5000; ++i) {
    const Elem x = static_cast<Elem>(rng() % g.size()), by = static_cast<Elem>(rng() % g.size());
    const Elem y = g.conj(by, x);
    EXPECT_EQ(g.class_of(x), g.class_of(y));
    EXPECT_EQ(signature_of(g.mat(x)), g.classes()[g.class_of(x)].signature);
    EXPECT_EQ(g.similitude(x), g.classes()[g.class_of(x)].similitude);
  }
}

TEST(GroupTable, TransposePreservesClasses) {
  const GroupTable& g = GroupTable::instance();
  std::mt19937_64 rng(9);
  for (int i = 0; i < 2000; ++i) {
    const Elem x = static_cast<Elem>(rng() % g.size());
    const Elem t = g.transpose(x);
    ASSERT_NE(t, kNoElem);
    EXPECT_EQ(g.class_of(t), g.class_of(x));
  }
}
