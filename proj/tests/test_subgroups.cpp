#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "mod3gal/conjugacy.hpp"
#include "mod3gal/fixed_stats.hpp"
#include "mod3gal/subgroup.hpp"
#include "support.hpp"

using namespace mod3gal;

namespace {

/// Permutation group on {0..n-1} given by generators, with a full multiplication table.
class PermGroup {
 public:
  using Perm = std::vector<int>;

  PermGroup(int n, const std::vector<Perm>& gens) {
    Perm id(n);
    std::iota(id.begin(), id.end(), 0);
    add(id);
    for (std::size_t head = 0; head < perms_.size(); ++head)
      for (const auto& s : gens) add(compose(perms_[head], s));
    const std::size_t m = perms_.size();
    table_.assign(m * m, 0);
    inv_.assign(m, 0);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        const Elem c = index_.at(compose(perms_[a], perms_[b]));
        table_[a * m + b] = c;
        if (c == 0) inv_[a] = static_cast<Elem>(b);
      }
  }

  std::size_t size() const { return perms_.size(); }
  Elem mul(Elem a, Elem b) const { return table_[a * perms_.size() + b]; }
  Elem inv(Elem a) const { return inv_[a]; }
  Elem identity() const { return 0; }

 private:
  static Perm compose(const Perm& a, const Perm& b) {
    Perm c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
    return c;
  }
  void add(const Perm& p) {
    if (index_.emplace(p, static_cast<Elem>(perms_.size())).second) perms_.push_back(p);
  }

  std::vector<Perm> perms_;
  std::map<Perm, Elem> index_;
  std::vector<Elem> table_, inv_;
};

std::size_t count_classes(const PermGroup& g) {
  SubgroupClassEnumerator<PermGroup> en(g);
  std::vector<Elem> all(g.size());
  std::iota(all.begin(), all.end(), 0);
  seed_perfect_subgroups(en, g, std::span<const Elem>(all), g.size());
  en.run();
  return en.classes().size();
}

}  // namespace

// Known numbers of conjugacy classes of subgroups.
TEST(SubgroupLattice, SmallGroupCensus) {
  EXPECT_EQ(count_classes(PermGroup(4, {{1, 2, 3, 0}, {3, 2, 1, 0}})), 8u);        // D8
  EXPECT_EQ(count_classes(PermGroup(4, {{1, 2, 3, 0}, {1, 0, 2, 3}})), 11u);       // S4
  EXPECT_EQ(count_classes(PermGroup(5, {{1, 2, 3, 4, 0}, {1, 2, 0, 3, 4}})), 9u);  // A5
  EXPECT_EQ(count_classes(PermGroup(5, {{1, 2, 3, 4, 0}, {1, 0, 2, 3, 4}})), 19u); // S5
  EXPECT_EQ(count_classes(PermGroup(6, {{1, 2, 3, 4, 5, 0}})), 4u);                // C6
}

TEST(Subgroup, CloseExamples) {
  const GroupTable& g = GroupTable::instance();
  EXPECT_EQ(subgroup_close(g, std::vector<Mat4>{}).order(), 1u);
  EXPECT_EQ(subgroup_close(g, std::vector<Mat4>{Mat4::scalar(2)}).order(), 2u);
  EXPECT_THROW(subgroup_close(g, std::vector<Mat4>{Mat4::diag(1, 2, 1, 1)}), std::invalid_argument);
  std::vector<Mat4> gens;
  for (Elem x : g.generators()) gens.push_back(g.mat(x));
  EXPECT_EQ(subgroup_close(g, gens).order(), g.size());
}

TEST(Subgroup, EligibilityExamples) {
  const GroupTable& g = GroupTable::instance();
  std::vector<Mat4> gens;
  for (Elem x : g.generators()) gens.push_back(g.mat(x));
  EXPECT_TRUE(is_eligible(g, subgroup_close(g, gens)));
  EXPECT_FALSE(is_eligible(g, subgroup_close(g, std::vector<Mat4>{})));
  std::vector<Mat4> sp;
  for (const auto& m : gens)
    if (similitude(m) == 1) sp.push_back(m);
  const Subgroup sp4 = subgroup_close(g, sp);
  EXPECT_EQ(sp4.order(), 51840u);
  EXPECT_FALSE(is_eligible(g, sp4));
}

TEST(Subgroup, DistributionsOfTrivialAndFullGroup) {
  const GroupTable& g = GroupTable::instance();
  const auto triv = class_vector(g, subgroup_close(g, std::vector<Mat4>{}));
  const auto sd = signature_distribution(g, triv);
  ASSERT_EQ(sd.size(), 1u);
  EXPECT_EQ(sd.begin()->first, (Signature{{1, 2, 0, 2, 1}, 4}));
  std::vector<Mat4> gens;
  for (Elem x : g.generators()) gens.push_back(g.mat(x));
  const auto full = class_vector(g, subgroup_close(g, gens));
  const auto sizes = g.class_sizes();
  for (std::size_t c = 0; c < sizes.size(); ++c) EXPECT_EQ(full[c], sizes[c]);
}

TEST(Subgroup, ConjugatesShareClassvectorsAndAreDetected) {
  const GroupTable& g = GroupTable::instance();
  const auto& atlas = test::shipped_atlas();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    const AtlasEntry& e = atlas.entries[rng() % atlas.entries.size()];
    const Subgroup h = e.subgroup();
    const Subgroup c = conjugate_subgroup(g, h, static_cast<Elem>(rng() % g.size()));
    EXPECT_EQ(class_vector(g, c), e.classvector);
    const auto w = are_conjugate(g, h, c, Ambient::GSp);
    ASSERT_TRUE(w.has_value()) << e.label;
    for (Elem x : h.elements) EXPECT_TRUE(c.contains(g.conj(g.index_of(*w), x)));
  }
}

TEST(Subgroup, TransposeIsAnInvolutionPreservingClassvectors) {
  const GroupTable& g = GroupTable::instance();
  for (const auto& e : test::shipped_atlas().entries) {
    const Subgroup h = e.subgroup();
    const Subgroup t = transpose_subgroup(g, h);
    EXPECT_EQ(transpose_subgroup(g, t).elements, h.elements);
    EXPECT_EQ(class_vector(g, t), e.classvector) << e.label;
  }
}

TEST(Subgroup, PointStabilizerIsNotConjugateToItsTranspose) {
  const GroupTable& g = GroupTable::instance();
  const Subgroup h = test::shipped_atlas().at("3.80.1").subgroup();
  const Subgroup t = transpose_subgroup(g, h);
  EXPECT_EQ(class_vector(g, t), class_vector(g, h));
  EXPECT_FALSE(are_conjugate(g, h, t, Ambient::GSp).has_value());
}

TEST(Conjugacy, TableOnePairIsGlButNotGspConjugate) {
  const GroupTable& g = GroupTable::instance();
  const auto& atlas = test::shipped_atlas();
  const Subgroup a = atlas.at("3.3240.6").subgroup(), b = atlas.at("3.3240.7").subgroup();
  EXPECT_FALSE(are_conjugate(g, a, b, Ambient::GSp).has_value());
  const auto w = are_conjugate(g, a, b, Ambient::GL);
  ASSERT_TRUE(w.has_value());
  EXPECT_NE(det(*w), 0);
}

TEST(Conjugacy, PointStabilizersDifferInFixedSpaceSoNotGlConjugate) {
  const GroupTable& g = GroupTable::instance();
  const auto& atlas = test::shipped_atlas();
  const Subgroup a = atlas.at("3.80.1").subgroup(), b = atlas.at("3.80.2").subgroup();
  EXPECT_NE(fixed_dim(a), fixed_dim(b));
  EXPECT_FALSE(are_conjugate(g, a, b, Ambient::GL).has_value());
}

TEST(FixedStats, TrivialAndMinusIdentity) {
  const GroupTable& g = GroupTable::instance();
  const FixedStats t = fixed_stats(g, subgroup_close(g, std::vector<Mat4>{}));
  EXPECT_EQ(t.h0dim, 4);
  EXPECT_EQ(t.maxdims.at(1), 4);
  const Subgroup m = subgroup_close(g, std::vector<Mat4>{Mat4::scalar(2)});
  const FixedStats s = fixed_stats(g, m);
  EXPECT_EQ(s.maxdims.at(1), 0);
  EXPECT_EQ(s.maxdims.at(2), 4);
}

TEST(FixedStats, TableExamples) {
  const GroupTable& g = GroupTable::instance();
  const auto& atlas = test::shipped_atlas();
  const FixedStats a = fixed_stats(g, atlas.at("3.320.1").subgroup());
  EXPECT_EQ(a.h0dim, 1);
  EXPECT_EQ(a.maxdims.at(1), 1);
  EXPECT_EQ(a.maxdims.at(2), 1);
  EXPECT_EQ(a.maxdims.at(3), 1);
  const FixedStats b = fixed_stats(g, atlas.at("3.5760.2").subgroup());
  const FixedStats c = fixed_stats(g, atlas.at("3.5760.5").subgroup());
  EXPECT_EQ(b.h0dim, 2);
  EXPECT_EQ(table_value(b, 18, 3), 2);
  EXPECT_EQ(table_value(c, 18, 3), 1);
  const AtlasEntry& e = atlas.at("3.320.3");
  EXPECT_EQ(table_value(fixed_stats(g, e.subgroup()), e.order, 8), std::nullopt);
}
