/**
 * @file tables.hpp
 * @brief Recomputes the Gassmann-cell tables (GL-conjugate pairs and the
 * fixed-space statistics) and diffs them against an expected-table file.
 */
#pragma once

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mod3gal/atlas.hpp"
#include "mod3gal/conjugacy.hpp"
#include "mod3gal/fixed_stats.hpp"

namespace mod3gal {

struct TableCheck {
  std::vector<std::string> lines;     // rendered rows
  std::vector<std::string> failures;  // one per mismatch
  bool ok() const { return failures.empty(); }
};

namespace detail {

inline std::string cell_string(const std::optional<int>& v) { return v ? std::to_string(*v) : "-"; }

inline std::vector<Mat4> expected_generators(const nlohmann::json& tables, const nlohmann::json& member) {
  auto gens = mats_from_json(member.at("generators"));
  if (tables.value("convention", "column") == "row") gens = from_row_convention(gens);
  return gens;
}

/// Looks up the printed group in the atlas and checks label, order and cell membership.
inline std::optional<std::size_t> locate(const GroupTable& g, const SubgroupAtlas& atlas, const nlohmann::json& tables,
                                         const nlohmann::json& member, std::size_t order, TableCheck& out) {
  const std::string label = member.at("label");
  Subgroup h;
  try {
    h = subgroup_close(g, expected_generators(tables, member));
  } catch (const std::exception& e) {
    out.failures.push_back(label + ": " + e.what());
    return std::nullopt;
  }
  if (h.order() != order) {
    out.failures.push_back(label + ": order " + std::to_string(h.order()) + ", expected " + std::to_string(order));
    return std::nullopt;
  }
  const std::size_t i = match_subgroup(g, atlas, h);
  if (atlas.entries[i].label != label) {
    out.failures.push_back(label + ": printed generators match atlas entry " + atlas.entries[i].label);
    return std::nullopt;
  }
  return i;
}

}  // namespace detail

/// Table 1: pairs that are Gassmann equivalent and GL(4,F_3)- but not GSp(4,F_3)-conjugate.
inline TableCheck check_table1(const GroupTable& g, const SubgroupAtlas& atlas, const nlohmann::json& tables) {
  TableCheck out;
  out.lines.push_back("order  pair                     gassmann  GSp-conj  GL-conj  fixed stats");
  for (const auto& row : tables.at("table1")) {
    const std::size_t order = row.at("order");
    std::vector<std::size_t> idx;
    for (const auto& m : row.at("members"))
      if (auto i = detail::locate(g, atlas, tables, m, order, out)) idx.push_back(*i);
    if (idx.size() != 2) continue;
    const AtlasEntry& a = atlas.entries[idx[0]];
    const AtlasEntry& b = atlas.entries[idx[1]];
    const bool gassmann = a.eligible && a.gassmann_cell == b.gassmann_cell;
    const bool gsp = are_conjugate(g, a.subgroup(), b.subgroup(), Ambient::GSp).has_value();
    const bool gl = are_conjugate(g, a.subgroup(), b.subgroup(), Ambient::GL).has_value();
    const bool same_stats = fixed_stats(g, a.subgroup()) == fixed_stats(g, b.subgroup());
    std::ostringstream os;
    os << std::left << std::setw(7) << order << std::setw(25) << (a.label + " / " + b.label) << std::setw(10)
       << (gassmann ? "yes" : "no") << std::setw(10) << (gsp ? "yes" : "no") << std::setw(9) << (gl ? "yes" : "no")
       << (same_stats ? "equal" : "differ");
    out.lines.push_back(os.str());
    const std::string pair = a.label + "/" + b.label;
    if (!gassmann) out.failures.push_back(pair + ": not Gassmann equivalent");
    if (gsp) out.failures.push_back(pair + ": conjugate in GSp(4,F_3)");
    if (!gl) out.failures.push_back(pair + ": not conjugate in GL(4,F_3)");
    if (!same_stats) out.failures.push_back(pair + ": fixed-space statistics differ");
  }
  return out;
}

/// Tables of fixed-space statistics: columns "h0" or field degrees d.
inline TableCheck check_stats_table(const GroupTable& g, const SubgroupAtlas& atlas, const nlohmann::json& tables,
                                    const std::string& key) {
  TableCheck out;
  const auto& t = tables.at(key);
  std::vector<std::string> cols = t.at("columns");
  std::ostringstream head;
  head << std::left << std::setw(7) << "order" << std::setw(12) << "label";
  for (const auto& c : cols) head << std::setw(5) << (c == "h0" ? "h0" : "d=" + c);
  out.lines.push_back(head.str());
  for (const auto& cell : t.at("cells")) {
    const std::size_t order = cell.at("order");
    std::optional<int> gassmann;
    for (const auto& m : cell.at("members")) {
      const auto i = detail::locate(g, atlas, tables, m, order, out);
      if (!i) continue;
      const AtlasEntry& e = atlas.entries[*i];
      if (!gassmann) gassmann = e.gassmann_cell;
      if (!e.eligible || e.gassmann_cell != *gassmann)
        out.failures.push_back(e.label + ": not in the same Gassmann cell as its row");
      const FixedStats fs = fixed_stats(g, e.subgroup());
      std::ostringstream os;
      os << std::left << std::setw(7) << order << std::setw(12) << e.label;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const std::optional<int> got = cols[c] == "h0" ? std::optional<int>(fs.h0dim)
                                                       : table_value(fs, e.order, std::stoi(cols[c]));
        const auto& want_j = m.at("values")[c];
        const std::optional<int> want = want_j.is_null() ? std::nullopt : std::optional<int>(want_j.get<int>());
        os << std::setw(5) << detail::cell_string(got);
        if (got != want)
          out.failures.push_back(e.label + " column " + cols[c] + ": got " + detail::cell_string(got) +
                                 ", expected " + detail::cell_string(want));
      }
      out.lines.push_back(os.str());
    }
    if (gassmann && atlas.cells[*gassmann].size() != cell.at("members").size())
      out.failures.push_back("row of order " + std::to_string(order) + ": Gassmann cell has " +
                             std::to_string(atlas.cells[*gassmann].size()) + " members");
  }
  return out;
}

inline nlohmann::json load_expected_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open expected tables " + path);
  return nlohmann::json::parse(in);
}

}  // namespace mod3gal
