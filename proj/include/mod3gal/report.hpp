/**
 * @file report.hpp
 * @brief Text and JSON rendering of a PosteriorReport. Output depends only on the
 * report and the atlas, so repeated runs with the same seed are byte-identical.
 */
#pragma once

#include <iomanip>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mod3gal/inference.hpp"

namespace mod3gal {

inline constexpr const char* kReportFormat = "mod3gal.posterior-report/1";

namespace detail {

inline const char* reason_name(EliminationReason r) {
  return r == EliminationReason::HardZero ? "hard-zero" : "below-epsilon";
}

/// Status and probability of every eligible entry after the last Bayes update.
struct PosteriorRow {
  std::size_t entry;
  double probability;
  std::string status;  // "survivor", "hard-zero", "below-epsilon"
  int stage;
};

inline std::vector<PosteriorRow> posterior_rows(const SubgroupAtlas& atlas, const CellResult& r) {
  std::map<std::size_t, const Elimination*> elim;
  for (const auto& e : r.eliminated) elim.emplace(e.entry, &e);
  std::vector<PosteriorRow> rows;
  for (std::size_t i : atlas.eligible()) {
    PosteriorRow row{i, r.posterior.of(i), "survivor", 0};
    if (auto it = elim.find(i); it != elim.end()) {
      row.status = reason_name(it->second->reason);
      row.stage = it->second->stage;
      if (row.stage == 1 && r.used_classes) row.probability = 0;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::map<int, int> field_degree_histogram(const CellResult& r) {
  std::map<int, int> h;
  for (const auto& s : r.samples)
    if (s.class_id) ++h[s.field_degree];
  return h;
}

inline std::size_t class_sample_count(const CellResult& r) {
  std::size_t n = 0;
  for (const auto& s : r.samples) n += s.class_id.has_value();
  return n;
}

inline std::string format_probability(double p) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(6) << p;
  return os.str();
}

}  // namespace detail

inline nlohmann::json report_to_json(const PosteriorReport& rep, const SubgroupAtlas& atlas, bool verbose) {
  using nlohmann::json;
  const CellResult& r = rep.cell;
  json j;
  j["format"] = kReportFormat;
  j["curve"] = rep.curve;
  j["config"] = {{"epsilon", rep.config.epsilon}, {"b1", rep.config.b1}, {"b2", rep.config.b2}, {"seed", rep.config.seed}};
  j["outcome"] = rep.outcome == Outcome::Resolved ? "resolved" : "ambiguous";
  if (r.cell) {
    json members = json::array();
    for (std::size_t i : atlas.cells[*r.cell]) members.push_back(atlas.entries[i].label);
    j["cell"] = {{"id", *r.cell}, {"members", members}};
  } else {
    j["cell"] = nullptr;
  }
  if (rep.final_entry) {
    const AtlasEntry& e = atlas.entries[*rep.final_entry];
    j["final"] = {{"label", e.label}, {"order", e.order}, {"index", e.index}, {"resolved_by", rep.resolved_by}};
  } else {
    j["final"] = nullptr;
  }
  json survivors = json::array();
  for (std::size_t i : r.survivors)
    survivors.push_back({{"label", atlas.entries[i].label}, {"probability", r.posterior.of(i)}});
  j["survivors"] = survivors;
  if (rep.guidance) {
    json members = json::array();
    for (std::size_t i : rep.guidance->members) members.push_back(atlas.entries[i].label);
    json g{{"members", members}};
    if (r.cell) g["resolution"] = rep.guidance->summary();
    else g["resolution"] = "no unique cell; raise B1 or B2";
    j["guidance"] = g;
  }
  std::size_t hard = 0, low = 0;
  for (const auto& e : r.eliminated) (e.reason == EliminationReason::HardZero ? hard : low)++;
  json degrees = json::object();
  for (auto [k, n] : detail::field_degree_histogram(r)) degrees[std::to_string(k)] = n;
  j["diagnostics"] = {{"signature_samples", r.samples.size()},
                      {"class_samples", detail::class_sample_count(r)},
                      {"class_stage_run", r.used_classes},
                      {"field_degrees", degrees},
                      {"eliminated_hard_zero", hard},
                      {"eliminated_below_epsilon", low}};
  if (verbose) {
    json table = json::array();
    for (const auto& row : detail::posterior_rows(atlas, r)) {
      json x{{"label", atlas.entries[row.entry].label},
             {"cell", atlas.entries[row.entry].gassmann_cell},
             {"probability", row.probability},
             {"status", row.status}};
      if (row.stage) x["stage"] = row.stage;
      table.push_back(x);
    }
    j["posterior"] = table;
  }
  return j;
}

inline std::string report_to_text(const PosteriorReport& rep, const SubgroupAtlas& atlas, bool verbose) {
  const CellResult& r = rep.cell;
  std::ostringstream os;
  os << "curve      " << rep.curve << '\n';
  os << "config     epsilon=" << rep.config.epsilon << " B1=" << rep.config.b1 << " B2=" << rep.config.b2
     << " seed=" << rep.config.seed << '\n';
  os << "outcome    " << (rep.outcome == Outcome::Resolved ? "resolved" : "ambiguous") << '\n';
  if (r.cell) {
    os << "cell       #" << *r.cell << " {";
    const auto& members = atlas.cells[*r.cell];
    for (std::size_t k = 0; k < members.size(); ++k) os << (k ? ", " : "") << atlas.entries[members[k]].label;
    os << "}\n";
  } else {
    os << "cell       none (survivors span several cells)\n";
  }
  if (rep.final_entry) {
    const AtlasEntry& e = atlas.entries[*rep.final_entry];
    os << "image      " << e.label << " (order " << e.order << ", index " << e.index << ", by " << rep.resolved_by
       << ")\n";
  }
  if (rep.guidance) {
    os << "guidance   candidates:";
    for (std::size_t i : rep.guidance->members) os << ' ' << atlas.entries[i].label;
    os << '\n';
    os << "           " << (r.cell ? rep.guidance->summary() : "no unique cell; raise B1 or B2") << '\n';
  }
  os << "survivors\n";
  for (std::size_t i : r.survivors)
    os << "  " << std::left << std::setw(12) << atlas.entries[i].label << detail::format_probability(r.posterior.of(i))
       << '\n';
  std::size_t hard = 0, low = 0;
  for (const auto& e : r.eliminated) (e.reason == EliminationReason::HardZero ? hard : low)++;
  os << "samples    " << r.samples.size() << " signatures, " << detail::class_sample_count(r) << " classes\n";
  if (r.used_classes) {
    os << "degrees   ";
    for (auto [k, n] : detail::field_degree_histogram(r)) os << " K=" << k << ":" << n;
    os << '\n';
  }
  os << "eliminated " << hard << " hard-zero, " << low << " below epsilon\n";
  if (verbose) {
    os << "posterior\n";
    for (const auto& row : detail::posterior_rows(atlas, r)) {
      os << "  " << std::left << std::setw(12) << atlas.entries[row.entry].label << std::setw(6)
         << atlas.entries[row.entry].gassmann_cell << detail::format_probability(row.probability) << "  " << row.status;
      if (row.stage) os << " (stage " << row.stage << ")";
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace mod3gal
