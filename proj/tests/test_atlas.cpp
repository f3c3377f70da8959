#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "mod3gal/atlas_verify.hpp"
#include "mod3gal/tables.hpp"
#include "support.hpp"

using namespace mod3gal;

namespace {

std::vector<LabelAnchor> all_anchors() {
  auto anchors = structural_anchors(GroupTable::instance());
  for (auto& a : load_anchors(test::data_file("label_anchors.json"))) anchors.push_back(std::move(a));
  return anchors;
}

bool has_diagnostic(const VerifyResult& r, const std::string& text) {
  for (const auto& d : r.diagnostics)
    if (d.find(text) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(Atlas, ShippedAtlasVerifies) {
  const VerifyResult r = verify_atlas(GroupTable::instance(), test::shipped_atlas(), all_anchors());
  for (const auto& d : r.diagnostics) ADD_FAILURE() << d;
  EXPECT_TRUE(r.ok());
  EXPECT_GT(r.delta, 0);
}

TEST(Atlas, DeletedEntryIsReported) {
  SubgroupAtlas a = test::shipped_atlas();
  a.entries.erase(a.entries.begin() + 17);
  for (auto& cell : a.cells)
    for (auto& i : cell)
      if (i > 17) --i;
  const VerifyResult r = verify_atlas(GroupTable::instance(), a, {});
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_diagnostic(r, "subgroup classes: 491 != 492"));
}

TEST(Atlas, CorruptedFieldsAreReported) {
  SubgroupAtlas a = test::shipped_atlas();
  const std::size_t i = *a.find("3.80.3");
  a.entries[i].classvector[5] += 1;
  a.entries[i].normalizer_order += 1;
  const VerifyResult r = verify_atlas(GroupTable::instance(), a, {});
  EXPECT_TRUE(has_diagnostic(r, "3.80.3: stored classvector differs"));
  EXPECT_TRUE(has_diagnostic(r, "3.80.3: normalizer order differs"));
}

TEST(Atlas, SwappedLabelFailsAnchorCheck) {
  SubgroupAtlas a = test::shipped_atlas();
  std::swap(a.entries[*a.find("3.80.3")].label, a.entries[*a.find("3.80.4")].label);
  const VerifyResult r = verify_atlas(GroupTable::instance(), a, all_anchors());
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_diagnostic(r, "anchor 3.80.3 matches 3.80.4"));
}

TEST(Atlas, NonGspGeneratorIsRejectedOnRead) {
  SubgroupAtlas a = test::shipped_atlas();
  a.entries[3].generators[0] = Mat4::diag(1, 2, 1, 1);
  std::ostringstream bad;
  write_atlas(a, bad);
  std::istringstream in(bad.str());
  EXPECT_THROW(read_atlas(GroupTable::instance(), in), std::runtime_error);
}

TEST(Atlas, WriteReadRoundTrip) {
  std::ostringstream os;
  write_atlas(test::shipped_atlas(), os);
  std::istringstream in(os.str());
  const SubgroupAtlas b = read_atlas(GroupTable::instance(), in);
  std::ostringstream os2;
  write_atlas(b, os2);
  EXPECT_EQ(os.str(), os2.str());
}

TEST(Atlas, CanonicalOrderAndRequiredEntries) {
  const auto& a = test::shipped_atlas();
  for (std::size_t i = 1; i < a.entries.size(); ++i)
    EXPECT_LT(std::tie(a.entries[i - 1].index, a.entries[i - 1].counter),
              std::tie(a.entries[i].index, a.entries[i].counter));
  EXPECT_EQ(a.entries.front().order, 103680u);
  EXPECT_EQ(a.entries.back().order, 1u);
}

TEST(Atlas, SmallOrderCensus) {
  const GroupTable& g = GroupTable::instance();
  std::size_t involutions = 0, order3 = 0, order4 = 0, klein_pairs = 0;
  std::vector<Elem> invs;
  for (Elem x = 0; x < g.size(); ++x) {
    const int o = g.elem_order(x);
    if (o == 2) invs.push_back(x);
    involutions += o == 2;
    order3 += o == 3;
    order4 += o == 4;
  }
  for (Elem a : invs)
    for (Elem b : invs)
      if (a != b && g.mul(a, b) == g.mul(b, a)) ++klein_pairs;
  std::map<std::size_t, std::size_t> census;
  for (const auto& e : test::shipped_atlas().entries) census[e.order] += g.size() / e.normalizer_order;
  EXPECT_EQ(census[2], involutions);
  EXPECT_EQ(census[3], order3 / 2);
  EXPECT_EQ(census[4], order4 / 2 + klein_pairs / 6);
}

TEST(Atlas, EligibleEntriesHaveEvenOrderAndBothSimilitudes) {
  const GroupTable& g = GroupTable::instance();
  std::size_t n = 0;
  for (const auto& e : test::shipped_atlas().entries) {
    if (!e.eligible) continue;
    ++n;
    EXPECT_EQ(e.order % 2, 0u);
    std::size_t sim2 = 0;
    for (Elem x : e.elements) sim2 += g.similitude(x) == 2;
    EXPECT_EQ(2 * sim2, e.order) << e.label;
  }
  EXPECT_EQ(n, 280u);
}

TEST(Atlas, ConjugateSubgroupsMatchTheSameEntryAndCell) {
  const GroupTable& g = GroupTable::instance();
  const auto& a = test::shipped_atlas();
  std::mt19937_64 rng(21);
  for (int t = 0; t < 100; ++t) {
    const std::size_t i = rng() % a.entries.size();
    const Subgroup c = conjugate_subgroup(g, a.entries[i].subgroup(), static_cast<Elem>(rng() % g.size()));
    EXPECT_EQ(match_subgroup(g, a, c), i);
  }
  std::vector<Mat4> full;
  for (Elem x : g.generators()) full.push_back(g.mat(x));
  EXPECT_EQ(a.entries[match_subgroup(g, a, std::span<const Mat4>(full))].label, "3.1.1");
}

TEST(Atlas, SignatureDistributionIsDeterminedByClassvector) {
  const GroupTable& g = GroupTable::instance();
  for (const auto& e : test::shipped_atlas().entries) {
    SigDist direct;
    for (Elem x : e.elements) ++direct[signature_of(g.mat(x))];
    EXPECT_EQ(signature_distribution(g, e.classvector), direct) << e.label;
  }
}

TEST(Atlas, GassmannExamples) {
  const auto& a = test::shipped_atlas();
  EXPECT_EQ(a.at("3.80.1").gassmann_cell, a.at("3.80.2").gassmann_cell);
  EXPECT_NE(a.at("3.80.3").gassmann_cell, a.at("3.80.4").gassmann_cell);
  EXPECT_NE(a.at("3.80.3").classvector, a.at("3.80.4").classvector);
  std::size_t members = 0;
  for (const auto& c : a.cells) members += c.size();
  EXPECT_EQ(a.cells.size(), 230u);
  EXPECT_EQ(members, 280u);
}

TEST(Atlas, DeltaIsStable) {
  EXPECT_EQ(min_distribution_distance(test::shipped_atlas()), min_distribution_distance(test::shipped_atlas()));
  EXPECT_GT(min_distribution_distance(test::shipped_atlas()), 0);
}

TEST(Tables, PrintedTablesAreReproduced) {
  const GroupTable& g = GroupTable::instance();
  const auto tables = load_expected_tables(test::data_file("expected_tables.json"));
  const auto& atlas = test::shipped_atlas();
  for (const auto& t : {check_table1(g, atlas, tables), check_stats_table(g, atlas, tables, "table2"),
                        check_stats_table(g, atlas, tables, "table3")}) {
    for (const auto& f : t.failures) ADD_FAILURE() << f;
  }
  EXPECT_EQ(tables.at("table1").size(), 5u);
}

TEST(Tables, MistranscribedValueIsReported) {
  const GroupTable& g = GroupTable::instance();
  auto tables = load_expected_tables(test::data_file("expected_tables.json"));
  tables["table2"]["cells"][1]["members"][0]["values"][3] = 7;
  const TableCheck t = check_stats_table(g, test::shipped_atlas(), tables, "table2");
  ASSERT_EQ(t.failures.size(), 1u);
  EXPECT_NE(t.failures[0].find("3.640.1 column 3: got 2, expected 7"), std::string::npos);
}
