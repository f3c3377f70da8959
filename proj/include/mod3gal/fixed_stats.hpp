/**
 * @file fixed_stats.hpp
 * @brief Fixed-space statistics of a subgroup and of its subgroups of small index.
 */
#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <vector>

#include "mod3gal/subgroup.hpp"

namespace mod3gal {

inline constexpr std::array<int, 6> kFieldDegrees = {1, 2, 3, 6, 8, 12};

struct FixedStats {
  int h0dim = 0;                // fixed space of H n Sp(4,F_3)
  std::map<int, int> maxdims;   // d -> max fixed dim over index-d subgroups

  friend bool operator==(const FixedStats&, const FixedStats&) = default;
};

inline FixedStats fixed_stats(const GroupTable& g, const Subgroup& h) {
  FixedStats fs;
  std::vector<Elem> h0;
  for (Elem x : h.elements)
    if (g.in_sp(x)) h0.push_back(x);
  fs.h0dim = fixed_dim(g, h0);

  const SubgroupView<GroupTable> view(g, h.elements);
  std::vector<Elem> lgens;
  for (Elem x : generator_indices(g, h)) lgens.push_back(view.local(x));
  SubgroupClassEnumerator<SubgroupView<GroupTable>> en(view);
  seed_perfect_subgroups(en, view, lgens);
  en.run();

  for (const auto& k : en.classes()) {
    const std::size_t index = h.order() / k.elements.size();
    if (std::find(kFieldDegrees.begin(), kFieldDegrees.end(), static_cast<int>(index)) == kFieldDegrees.end())
      continue;
    std::vector<Elem> pg;
    for (Elem x : k.generators) pg.push_back(view.to_parent(x));
    const int d = fixed_dim(g, pg);
    auto [it, fresh] = fs.maxdims.emplace(static_cast<int>(index), d);
    if (!fresh) it->second = std::max(it->second, d);
  }
  return fs;
}

/// Printed-table reading of maxdims[d]: nullopt when d does not divide |H|,
/// otherwise the maximum with an empty maximum read as 0.
inline std::optional<int> table_value(const FixedStats& fs, std::size_t order, int d) {
  if (order % static_cast<std::size_t>(d) != 0) return std::nullopt;
  const auto it = fs.maxdims.find(d);
  return it == fs.maxdims.end() ? 0 : it->second;
}

}  // namespace mod3gal
