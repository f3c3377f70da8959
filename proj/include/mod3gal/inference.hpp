/**
 * @file inference.hpp
 * @brief Mod-3 image inference: Bayes over sampled Frobenius statistics to find the
 * Gassmann cell, then fixed-space statistics or explicit generators to pick the member.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mod3gal/atlas.hpp"
#include "mod3gal/fixed_stats.hpp"
#include "mod3gal/torsion.hpp"

namespace mod3gal {

struct Config {
  double epsilon = 1e-4;
  std::uint32_t b1 = 1000;
  std::uint32_t b2 = 200;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const {
    if (!(epsilon > 0 && epsilon < 0.25)) throw std::invalid_argument("epsilon must lie in (0, 1/4)");
    if (b2 < 1 || b1 < b2) throw std::invalid_argument("prime bounds must satisfy B1 >= B2 >= 1");
  }
};

struct FrobeniusSample {
  std::uint32_t p = 0;
  Signature sig;
  std::optional<std::uint16_t> class_id;
  int field_degree = 0;  // K used for the class computation

  friend bool operator<(const FrobeniusSample& a, const FrobeniusSample& b) { return a.p < b.p; }
};

enum class Mode { Signature, Class };

// ---------------------------------------------------------------------------
// Likelihoods

/// Positive real as mantissa * 2^exponent, so long products neither underflow nor
/// depend on anything but the factors and their order.
struct Likelihood {
  long double mantissa = 1.0L;
  long long exponent = 0;
  bool zero = false;

  void multiply(long double f) {
    if (zero) return;
    if (f == 0) {
      zero = true;
      return;
    }
    int e = 0;
    mantissa = std::frexp(mantissa * f, &e);
    exponent += e;
  }
};

/// Probability of an observed statistic under a candidate subgroup.
inline long double sample_probability(const GroupTable& g, const AtlasEntry& e, const FrobeniusSample& s, Mode mode,
                                      bool condition_on_similitude) {
  std::uint64_t hits = 0;
  if (mode == Mode::Class) {
    if (!s.class_id) throw std::invalid_argument("class-mode sample without a class id");
    hits = e.classvector[*s.class_id];
  } else {
    for (std::size_t c = 0; c < e.classvector.size(); ++c)
      if (g.classes()[c].signature == s.sig) hits += e.classvector[c];
  }
  // Eligible subgroups have half their elements at each similitude.
  const long double total = condition_on_similitude ? e.order / 2.0L : static_cast<long double>(e.order);
  return static_cast<long double>(hits) / total;
}

struct Posterior {
  std::vector<std::size_t> candidates;  // atlas indices
  std::vector<double> probability;      // aligned with candidates
  std::vector<bool> hard_zero;          // aligned with candidates

  double of(std::size_t entry) const {
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (candidates[i] == entry) return probability[i];
    return 0;
  }
};

/// Uniform prior over the candidates, likelihood folded over the samples sorted by p.
/// Samples with p <= class_bound use their class id when mode is Class; the rest use signatures.
inline Posterior bayes_update(const GroupTable& g, const SubgroupAtlas& atlas, std::vector<FrobeniusSample> samples,
                              const std::vector<std::size_t>& candidates, Mode mode, std::uint32_t class_bound = 0,
                              bool condition_on_similitude = false) {
  std::sort(samples.begin(), samples.end());
  std::vector<Likelihood> lik(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const AtlasEntry& e = atlas.entries[candidates[i]];
    for (const auto& s : samples) {
      const Mode m = (mode == Mode::Class && s.class_id && s.p <= class_bound) ? Mode::Class : Mode::Signature;
      lik[i].multiply(sample_probability(g, e, s, m, condition_on_similitude));
    }
  }
  Posterior post;
  post.candidates = candidates;
  post.hard_zero.resize(candidates.size());
  long long top = std::numeric_limits<long long>::min();
  for (std::size_t i = 0; i < lik.size(); ++i) {
    post.hard_zero[i] = lik[i].zero;
    if (!lik[i].zero) top = std::max(top, lik[i].exponent);
  }
  if (top == std::numeric_limits<long long>::min())
    throw std::runtime_error("every candidate was eliminated by an impossible Frobenius statistic");
  std::vector<long double> w(lik.size(), 0.0L);
  long double sum = 0;
  for (std::size_t i = 0; i < lik.size(); ++i) {
    if (lik[i].zero) continue;
    w[i] = std::ldexp(lik[i].mantissa, static_cast<int>(std::max<long long>(lik[i].exponent - top, -100000)));
    sum += w[i];
  }
  for (long double x : w) post.probability.push_back(static_cast<double>(x / sum));
  return post;
}

/// Drops candidates below epsilon and renormalizes.
inline Posterior prune(const Posterior& post, double epsilon) {
  Posterior out;
  long double sum = 0;
  for (std::size_t i = 0; i < post.candidates.size(); ++i)
    if (!post.hard_zero[i] && post.probability[i] >= epsilon) sum += post.probability[i];
  for (std::size_t i = 0; i < post.candidates.size(); ++i) {
    if (post.hard_zero[i] || post.probability[i] < epsilon) continue;
    out.candidates.push_back(post.candidates[i]);
    out.probability.push_back(static_cast<double>(post.probability[i] / sum));
    out.hard_zero.push_back(false);
  }
  if (out.candidates.empty()) throw std::runtime_error("no candidate survives pruning");
  return out;
}

/// Gassmann cells met by a candidate list, ascending.
inline std::vector<int> cells_of(const SubgroupAtlas& atlas, const std::vector<std::size_t>& entries) {
  std::set<int> s;
  for (auto i : entries) s.insert(atlas.entries[i].gassmann_cell);
  return {s.begin(), s.end()};
}

// ---------------------------------------------------------------------------
// Sampling

inline std::uint64_t prime_seed(std::uint64_t seed, std::uint32_t p) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (p + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Evaluates fn(p) for every p, in parallel, keeping the order of ps.
template <class Fn>
auto parallel_map(const std::vector<std::uint32_t>& ps, unsigned threads, Fn fn) {
  using R = decltype(fn(std::uint32_t{}));
  std::vector<R> out(ps.size());
  const unsigned n = std::max(1u, threads ? threads : std::thread::hardware_concurrency());
  std::vector<std::future<void>> jobs;
  for (unsigned t = 0; t < n; ++t)
    jobs.push_back(std::async(std::launch::async, [&, t] {
      for (std::size_t i = t; i < ps.size(); i += n) out[i] = fn(ps[i]);
    }));
  for (auto& j : jobs) j.get();
  return out;
}

/// Good primes 5 <= p <= bound.
inline std::vector<std::uint32_t> sample_primes(const Genus2Curve& c, std::uint32_t bound) {
  std::vector<std::uint32_t> out;
  for (auto p : primes_up_to(bound))
    if (!c.is_bad(p)) out.push_back(p);
  return out;
}

inline constexpr int kSamplingAttempts = 4;

template <class Fn>
auto with_retries(std::uint64_t seed, Fn fn) {
  for (int attempt = 0;; ++attempt) {
    try {
      return fn(seed + attempt);
    } catch (const std::runtime_error&) {
      if (attempt + 1 >= kSamplingAttempts) throw;
    }
  }
}

inline std::vector<FrobeniusSample> sample_signatures(const Genus2Curve& c, const Config& cfg) {
  const auto ps = sample_primes(c, cfg.b1);
  return parallel_map(ps, cfg.threads, [&](std::uint32_t p) {
    FrobeniusSample s;
    s.p = p;
    s.sig = with_retries(prime_seed(cfg.seed, p), [&](std::uint64_t sd) { return signature_at(c, p, sd); });
    return s;
  });
}

inline void sample_classes(const Genus2Curve& c, const Config& cfg, std::vector<FrobeniusSample>& samples) {
  std::vector<std::uint32_t> ps;
  for (const auto& s : samples)
    if (s.p <= cfg.b2) ps.push_back(s.p);
  const auto fcs = parallel_map(ps, cfg.threads, [&](std::uint32_t p) {
    return with_retries(prime_seed(cfg.seed ^ 0xc1a55ull, p), [&](std::uint64_t sd) { return frobenius_class(c, p, sd); });
  });
  for (std::size_t i = 0, j = 0; i < samples.size() && j < ps.size(); ++i) {
    if (samples[i].p != ps[j]) continue;
    samples[i].class_id = fcs[j].class_id;
    samples[i].field_degree = fcs[j].K;
    if (signature_of(fcs[j].matrix) != samples[i].sig)
      throw std::logic_error("Frobenius matrix contradicts the signature at p = " + std::to_string(ps[j]));
    ++j;
  }
}

// ---------------------------------------------------------------------------
// Algorithm 1: Gassmann cell

enum class EliminationReason { HardZero, BelowEpsilon };

struct Elimination {
  std::size_t entry;
  EliminationReason reason;
  int stage;  // 1: signatures, 2: conjugacy classes
};

struct CellResult {
  std::optional<int> cell;               // unique surviving cell
  std::vector<std::size_t> survivors;    // atlas indices
  Posterior posterior;                   // last computed (pre-pruning) posterior
  std::vector<Elimination> eliminated;
  std::vector<FrobeniusSample> samples;
  bool used_classes = false;
};

namespace detail {

inline void record_eliminations(const Posterior& post, double eps, int stage, std::vector<Elimination>& out) {
  for (std::size_t i = 0; i < post.candidates.size(); ++i) {
    if (post.hard_zero[i]) out.push_back({post.candidates[i], EliminationReason::HardZero, stage});
    else if (post.probability[i] < eps) out.push_back({post.candidates[i], EliminationReason::BelowEpsilon, stage});
  }
}

}  // namespace detail

/// Steps 1-3 on signatures for p <= B1; when the survivors span several cells,
/// Steps 4-6 add conjugacy classes for p <= B2.
inline CellResult run_algorithm1(const Genus2Curve& c, const Config& cfg, const SubgroupAtlas& atlas,
                                 const GroupTable& g = GroupTable::instance()) {
  cfg.validate();
  CellResult r;
  r.samples = sample_signatures(c, cfg);
  r.posterior = bayes_update(g, atlas, r.samples, atlas.eligible(), Mode::Signature);
  detail::record_eliminations(r.posterior, cfg.epsilon, 1, r.eliminated);
  Posterior kept = prune(r.posterior, cfg.epsilon);
  if (cells_of(atlas, kept.candidates).size() > 1) {
    r.used_classes = true;
    sample_classes(c, cfg, r.samples);
    r.posterior = bayes_update(g, atlas, r.samples, kept.candidates, Mode::Class, cfg.b2);
    detail::record_eliminations(r.posterior, cfg.epsilon, 2, r.eliminated);
    kept = prune(r.posterior, cfg.epsilon);
  }
  r.survivors = kept.candidates;
  const auto cells = cells_of(atlas, kept.candidates);
  if (cells.size() == 1) r.cell = cells.front();
  return r;
}

// ---------------------------------------------------------------------------
// Algorithm 2: member of the cell

struct ArithmeticTorsionData {
  std::string curve_id;
  std::optional<int> h0dim;
  std::map<int, int> maxdims;
  std::string provenance;

  void validate() const {
    auto in_range = [](int v) { return v >= 0 && v <= 4; };
    if (h0dim && !in_range(*h0dim)) throw std::invalid_argument("h0dim out of range");
    for (auto [d, v] : maxdims) {
      if (std::find(kFieldDegrees.begin(), kFieldDegrees.end(), d) == kFieldDegrees.end())
        throw std::invalid_argument("maxdims degree " + std::to_string(d) + " not in {1,2,3,6,8,12}");
      if (!in_range(v)) throw std::invalid_argument("maxdims value out of range");
    }
    if (auto it = maxdims.find(1); it != maxdims.end())
      for (auto [d, v] : maxdims)
        if (v < it->second) throw std::invalid_argument("maxdims[1] exceeds maxdims[" + std::to_string(d) + "]");
  }
};

inline ArithmeticTorsionData torsion_data_from_json(const nlohmann::json& j) {
  ArithmeticTorsionData t;
  t.curve_id = j.value("curve_id", "");
  if (j.contains("h0dim") && !j["h0dim"].is_null()) t.h0dim = j["h0dim"].get<int>();
  if (j.contains("maxdims"))
    for (const auto& [k, v] : j["maxdims"].items())
      if (!v.is_null()) t.maxdims[std::stoi(k)] = v.get<int>();
  t.provenance = j.value("provenance", "");
  t.validate();
  return t;
}

inline ArithmeticTorsionData load_torsion_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open torsion data " + path);
  return torsion_data_from_json(nlohmann::json::parse(in));
}

/// Generators from a resolution file; "convention": "row" (default) transposes.
inline std::vector<Mat4> load_generators(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open generators file " + path);
  const auto j = nlohmann::json::parse(in);
  auto gens = mats_from_json(j.at("generators"));
  const std::string conv = j.value("convention", "row");
  if (conv == "row") return from_row_convention(gens);
  if (conv != "column") throw std::invalid_argument("convention must be 'row' or 'column'");
  return gens;
}

/// Whether a member's statistics agree with the data on every entry the data provides.
inline bool matches(const FixedStats& fs, std::size_t order, const ArithmeticTorsionData& data) {
  if (data.h0dim && fs.h0dim != *data.h0dim) return false;
  for (auto [d, v] : data.maxdims) {
    const auto t = table_value(fs, order, d);
    if (!t || *t != v) return false;
  }
  return true;
}

inline std::size_t run_algorithm2(const SubgroupAtlas& atlas, const std::vector<std::size_t>& cell,
                                  const ArithmeticTorsionData& data, const GroupTable& g = GroupTable::instance()) {
  if (cell.empty()) throw std::invalid_argument("empty cell");
  if (cell.size() == 1) return cell.front();
  std::vector<std::size_t> hits;
  std::set<std::pair<int, std::vector<std::optional<int>>>> seen;
  for (auto i : cell) {
    const AtlasEntry& e = atlas.entries[i];
    const FixedStats fs = fixed_stats(g, e.subgroup());
    std::vector<std::optional<int>> row;
    for (int d : kFieldDegrees) row.push_back(table_value(fs, e.order, d));
    seen.insert({fs.h0dim, row});
    if (matches(fs, e.order, data)) hits.push_back(i);
  }
  if (seen.size() < cell.size())
    throw std::invalid_argument("cell members share fixed-space statistics; resolve with explicit generators");
  if (hits.size() != 1)
    throw std::runtime_error(std::to_string(hits.size()) + " cell members match the supplied torsion data");
  return hits.front();
}

struct DistinguishReport {
  std::vector<std::size_t> members;
  std::vector<std::string> statistics;  // "h0", "d=1", ...; empty when external data is required
  bool requires_external_data = false;

  std::string summary() const {
    if (requires_external_data) return "requires external Galois data";
    std::string s;
    for (const auto& t : statistics) s += (s.empty() ? "" : ", ") + t;
    return "separated by " + s;
  }
};

/// Smallest set of fixed-space statistics separating all members of a cell.
inline DistinguishReport distinguish_report(const SubgroupAtlas& atlas, const std::vector<std::size_t>& cell,
                                            const GroupTable& g = GroupTable::instance()) {
  DistinguishReport rep;
  rep.members = cell;
  if (cell.size() <= 1) return rep;
  std::vector<std::string> names{"h0"};
  for (int d : kFieldDegrees) names.push_back("d=" + std::to_string(d));
  std::vector<std::vector<std::optional<int>>> rows;
  for (auto i : cell) {
    const AtlasEntry& e = atlas.entries[i];
    const FixedStats fs = fixed_stats(g, e.subgroup());
    std::vector<std::optional<int>> row{fs.h0dim};
    for (int d : kFieldDegrees) row.push_back(table_value(fs, e.order, d));
    rows.push_back(row);
  }
  const int n = static_cast<int>(names.size());
  std::optional<unsigned> best;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::set<std::vector<std::optional<int>>> proj;
    for (const auto& row : rows) {
      std::vector<std::optional<int>> v;
      for (int b = 0; b < n; ++b)
        if (mask >> b & 1) v.push_back(row[b]);
      proj.insert(v);
    }
    if (proj.size() != rows.size()) continue;
    if (!best || std::popcount(mask) < std::popcount(*best)) best = mask;
  }
  if (!best) {
    rep.requires_external_data = true;
    return rep;
  }
  for (int b = 0; b < n; ++b)
    if (*best >> b & 1) rep.statistics.push_back(names[b]);
  return rep;
}

// ---------------------------------------------------------------------------
// End to end

enum class Outcome { Resolved, Ambiguous };

struct PosteriorReport {
  std::string curve;
  Config config;
  Outcome outcome = Outcome::Ambiguous;
  CellResult cell;
  std::optional<std::size_t> final_entry;
  std::string resolved_by;  // "singleton cell", "torsion data", "generators"
  std::optional<DistinguishReport> guidance;
};

inline PosteriorReport end_to_end(const Genus2Curve& c, const Config& cfg, const SubgroupAtlas& atlas,
                                  const std::optional<ArithmeticTorsionData>& data = std::nullopt,
                                  const std::optional<std::vector<Mat4>>& generators = std::nullopt,
                                  const GroupTable& g = GroupTable::instance()) {
  PosteriorReport rep;
  rep.curve = c.to_string();
  rep.config = cfg;
  rep.cell = run_algorithm1(c, cfg, atlas, g);
  if (!rep.cell.cell) {
    rep.guidance = DistinguishReport{rep.cell.survivors, {}, false};
    return rep;
  }
  const auto& members = atlas.cells[*rep.cell.cell];
  if (members.size() == 1) {
    rep.final_entry = members.front();
    rep.resolved_by = "singleton cell";
  } else if (generators) {
    const std::size_t i = match_subgroup(g, atlas, std::span<const Mat4>(*generators));
    if (std::find(members.begin(), members.end(), i) == members.end())
      throw std::runtime_error("supplied generators give " + atlas.entries[i].label + ", outside the inferred cell");
    rep.final_entry = i;
    rep.resolved_by = "generators";
  } else {
    DistinguishReport dr = distinguish_report(atlas, members, g);
    if (data && !dr.requires_external_data) {
      rep.final_entry = run_algorithm2(atlas, members, *data, g);
      rep.resolved_by = "torsion data";
    } else {
      rep.guidance = std::move(dr);
    }
  }
  if (rep.final_entry) rep.outcome = Outcome::Resolved;
  return rep;
}

}  // namespace mod3gal
