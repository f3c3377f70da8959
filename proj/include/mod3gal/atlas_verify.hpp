/**
 * @file atlas_verify.hpp
 * @brief Re-checks a stored subgroup atlas without rebuilding it.
 */
#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "mod3gal/atlas.hpp"
#include "mod3gal/conjugacy.hpp"

namespace mod3gal {

inline constexpr std::size_t kExpectedClasses = 492;
inline constexpr std::size_t kExpectedNotInSp = 330;
inline constexpr std::size_t kExpectedEligible = 280;
inline constexpr std::size_t kExpectedCells = 230;
inline constexpr std::size_t kExpectedPairs = 38;
inline constexpr std::size_t kExpectedTriples = 3;
inline constexpr std::size_t kExpectedQuadruples = 2;

struct VerifyResult {
  std::vector<std::pair<std::string, bool>> checks;  // name, passed
  std::vector<std::string> diagnostics;
  double delta = 0;

  bool ok() const {
    for (const auto& [n, pass] : checks)
      if (!pass) return false;
    return true;
  }
};

namespace detail {

inline void expect_count(VerifyResult& r, const std::string& what, std::size_t got, std::size_t want, bool& pass) {
  if (got == want) return;
  pass = false;
  r.diagnostics.push_back(what + ": " + std::to_string(got) + " != " + std::to_string(want));
}

}  // namespace detail

inline VerifyResult verify_atlas(const GroupTable& g, const SubgroupAtlas& atlas, const std::vector<LabelAnchor>& anchors) {
  VerifyResult r;

  {
    bool pass = true;
    std::size_t not_sp = 0, eligible = 0;
    for (const auto& e : atlas.entries) {
      not_sp += std::any_of(e.elements.begin(), e.elements.end(), [&](Elem x) { return !g.in_sp(x); });
      eligible += e.eligible;
    }
    detail::expect_count(r, "subgroup classes", atlas.entries.size(), kExpectedClasses, pass);
    detail::expect_count(r, "classes not in Sp(4,F_3)", not_sp, kExpectedNotInSp, pass);
    detail::expect_count(r, "eligible classes", eligible, kExpectedEligible, pass);
    r.checks.emplace_back("counts 492/330/280", pass);
  }

  {
    bool pass = true;
    for (const auto& e : atlas.entries)
      for (const auto& m : e.generators)
        if (!in_gsp(m)) {
          pass = false;
          r.diagnostics.push_back(e.label + ": generator outside GSp(4,F_3)");
        }
    r.checks.emplace_back("generators in GSp(4,F_3)", pass);
  }

  {
    bool pass = true;
    for (const auto& e : atlas.entries) {
      const Subgroup h = e.subgroup();
      const auto [idx, counter] = detail::parse_label(e.label);
      if (e.elements.size() != e.order || e.order * e.index != g.size() || idx != e.index || counter != e.counter) {
        pass = false;
        r.diagnostics.push_back(e.label + ": order/index/label inconsistent");
      }
      if (class_vector(g, h) != e.classvector) {
        pass = false;
        r.diagnostics.push_back(e.label + ": stored classvector differs from recomputed");
      }
      if (is_eligible(g, h) != e.eligible) {
        pass = false;
        r.diagnostics.push_back(e.label + ": eligibility flag differs from recomputed");
      }
      std::vector<std::uint8_t> in_h(g.size(), 0);
      for (Elem x : e.elements) in_h[x] = 1;
      std::vector<Elem> gens;
      for (const auto& m : e.generators) gens.push_back(g.index_of(m));
      if (std::find(gens.begin(), gens.end(), kNoElem) != gens.end()) continue;
      if (normalizer(g, std::span<const Elem>(gens), in_h).size() != e.normalizer_order) {
        pass = false;
        r.diagnostics.push_back(e.label + ": normalizer order differs from recomputed");
      }
    }
    r.checks.emplace_back("orders, classvectors, eligibility, normalizers", pass);
  }

  {
    bool pass = true;
    std::map<std::string, int> seen;
    for (const auto& e : atlas.entries)
      if (++seen[e.label] > 1) {
        pass = false;
        r.diagnostics.push_back("duplicate label " + e.label);
      }
    std::map<std::pair<std::size_t, std::vector<std::uint32_t>>, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < atlas.entries.size(); ++i)
      buckets[{atlas.entries[i].order, atlas.entries[i].classvector}].push_back(i);
    for (const auto& [key, ids] : buckets)
      for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b)
          if (are_conjugate(g, atlas.entries[ids[a]].subgroup(), atlas.entries[ids[b]].subgroup(), Ambient::GSp)) {
            pass = false;
            r.diagnostics.push_back(atlas.entries[ids[a]].label + " and " + atlas.entries[ids[b]].label +
                                    " are conjugate");
          }
    r.checks.emplace_back("labels unique, classes pairwise non-conjugate", pass);
  }

  {
    bool pass = true;
    std::vector<AtlasEntry> copy = atlas.entries;
    const auto cells = gassmann_partition(copy);
    std::map<std::size_t, std::size_t> sizes;
    for (const auto& c : cells) ++sizes[c.size()];
    detail::expect_count(r, "Gassmann cells", cells.size(), kExpectedCells, pass);
    detail::expect_count(r, "cells of size 2", sizes[2], kExpectedPairs, pass);
    detail::expect_count(r, "cells of size 3", sizes[3], kExpectedTriples, pass);
    detail::expect_count(r, "cells of size 4", sizes[4], kExpectedQuadruples, pass);
    detail::expect_count(r, "cells larger than 4", cells.size() - sizes[1] - sizes[2] - sizes[3] - sizes[4], 0, pass);
    auto canon = [](std::vector<std::vector<std::size_t>> c) {
      for (auto& x : c) std::sort(x.begin(), x.end());
      std::sort(c.begin(), c.end());
      return c;
    };
    if (canon(cells) != canon(atlas.cells)) {
      pass = false;
      r.diagnostics.push_back("stored Gassmann cells differ from recomputed partition");
    }
    r.delta = min_distribution_distance(atlas);
    if (!(r.delta > 0)) {
      pass = false;
      r.diagnostics.push_back("minimum distribution distance is not positive");
    }
    r.checks.emplace_back("Gassmann cells 230 (38/3/2)", pass);
  }

  {
    bool pass = true;
    for (const auto& a : anchors) {
      const auto want = atlas.find(a.label);
      if (!want) {
        pass = false;
        r.diagnostics.push_back("anchor " + a.label + " missing from atlas");
        continue;
      }
      try {
        const std::size_t got = match_subgroup(g, atlas, std::span<const Mat4>(a.generators));
        if (got != *want) {
          pass = false;
          r.diagnostics.push_back("anchor " + a.label + " matches " + atlas.entries[got].label);
        }
      } catch (const std::exception& ex) {
        pass = false;
        r.diagnostics.push_back("anchor " + a.label + ": " + ex.what());
      }
    }
    r.checks.emplace_back("label anchors", pass);
  }
  return r;
}

}  // namespace mod3gal
