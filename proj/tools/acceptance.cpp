// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "mod3gal/atlas_verify.hpp"
#include "mod3gal/inference.hpp"
#include "mod3gal/tables.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace {

using namespace mod3gal;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

const GroupTable& G() { return GroupTable::instance(); }
const SubgroupAtlas& atlas() { return test::shipped_atlas(); }

std::string seconds(Clock::duration d) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << std::chrono::duration<double>(d).count() << "s";
  return os.str();
}

void budget(Verdict& v, Clock::duration took, double limit_seconds, const std::string& what) {
  v.require(std::chrono::duration<double>(took).count() <= limit_seconds,
            what + " took " + seconds(took) + ", budget " + std::to_string(static_cast<int>(limit_seconds)) + "s");
}

Verdict atlas_counts() {
  Verdict v;
  const auto t0 = Clock::now();
  const SubgroupAtlas built = build_atlas(G(), load_anchors(test::data_file("label_anchors.json")));
  budget(v, Clock::now() - t0, 4 * 3600, "enumeration");
  std::size_t not_sp = 0;
  for (const auto& e : built.entries) not_sp += !std::all_of(e.elements.begin(), e.elements.end(), [](Elem x) {
    return G().in_sp(x);
  });
  v.require(built.entries.size() == 492, "built " + std::to_string(built.entries.size()) + " classes");
  v.require(not_sp == 330, std::to_string(not_sp) + " classes not in Sp");
  v.require(built.eligible().size() == 280, std::to_string(built.eligible().size()) + " eligible");
  std::ostringstream a, b;
  write_atlas(built, a);
  write_atlas(atlas(), b);
  v.require(a.str() == b.str(), "rebuilt atlas differs from the shipped file");

  const auto t1 = Clock::now();
  auto anchors = structural_anchors(G());
  for (auto& x : load_anchors(test::data_file("label_anchors.json"))) anchors.push_back(std::move(x));
  const SubgroupAtlas shipped = read_atlas(G(), test::data_file("atlas.jsonl"));
  const VerifyResult r = verify_atlas(G(), shipped, anchors);
  budget(v, Clock::now() - t1, 120, "verify");
  for (const auto& [name, ok] : r.checks) v.require(ok, "verify: " + name);
  v.notes.push_back("enumeration " + seconds(t1 - t0) + ", verify " + seconds(Clock::now() - t1));
  return v;
}

Verdict gassmann_statistics() {
  Verdict v;
  std::set<std::vector<std::uint32_t>> dists;
  for (auto i : atlas().eligible()) dists.insert(atlas().entries[i].classvector);
  v.require(dists.size() == 230, std::to_string(dists.size()) + " distinct distributions");
  v.require(atlas().cells.size() == 230, std::to_string(atlas().cells.size()) + " cells");
  std::map<std::size_t, int> sizes;
  for (const auto& c : atlas().cells)
    if (c.size() > 1) ++sizes[c.size()];
  v.require(sizes == std::map<std::size_t, int>{{2, 38}, {3, 3}, {4, 2}}, "non-singleton cell sizes differ");
  return v;
}

Verdict table1() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto tables = load_expected_tables(test::data_file("expected_tables.json"));
  const TableCheck t = check_table1(G(), atlas(), tables);
  for (const auto& f : t.failures) v.require(false, f);
  std::vector<std::size_t> orders;
  for (const auto& row : tables.at("table1")) orders.push_back(row.at("order"));
  v.require(orders == std::vector<std::size_t>{32, 16, 16, 16, 8}, "printed orders differ");
  v.require(t.lines.size() == 6, "expected 5 rendered pairs");
  budget(v, Clock::now() - t0, 30 * 60, "table 1");
  return v;
}

Verdict tables23() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto tables = load_expected_tables(test::data_file("expected_tables.json"));
  for (const char* key : {"table2", "table3"}) {
    const TableCheck t = check_stats_table(G(), atlas(), tables, key);
    for (const auto& f : t.failures) v.require(false, f);
  }
  for (const char* label : {"3.320.3", "3.320.4"}) {
    const AtlasEntry& e = atlas().at(label);
    v.require(!table_value(fixed_stats(G(), e.subgroup()), e.order, 8).has_value(),
              std::string(label) + " d=8 should be absent");
  }
  budget(v, Clock::now() - t0, 10 * 60, "tables 2-3");
  return v;
}

Verdict transpose_duality() {
  Verdict v;
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const AtlasEntry& e = atlas().entries[rng() % atlas().entries.size()];
    const Subgroup ht = transpose_subgroup(G(), e.subgroup());
    v.require(class_vector(G(), ht) == e.classvector, e.label + " and its transpose differ");
  }
  return v;
}

Verdict curve_oracles() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(6);
  int jac_checks = 0;
  for (int t = 0; t < 10; ++t) {
    const Genus2Curve c = test::random_curve(rng, 5 + t % 2);
    for (std::uint32_t p : primes_up_to(31)) {
      if (c.is_bad(p)) continue;
      const EulerFactor L = euler_factor(c, p);
      const std::uint64_t n1 = oracle::naive_count(c, p);
      const BigInt n2 = count_points(c, GFq::make(p, 2));
      v.require(BigInt(p + 1) - L.e1 == n1, c.to_string() + " p=" + std::to_string(p) + ": e1 disagrees");
      const BigInt s2 = BigInt(p) * p + 1 - n2;
      v.require(2 * L.e2 == L.e1 * L.e1 - s2, c.to_string() + " p=" + std::to_string(p) + ": e2 disagrees");
      if ((p == 5 || p == 7) && model_degree(c, p, 1) == 1) {
        const CurveModel m = make_model(c, p, 1, 0);
        const BigInt classes = oracle::enumerate_classes(m.jacobian()).size();
        v.require(classes == L.value_at_one(), c.to_string() + " p=" + std::to_string(p) + ": #J differs");
        ++jac_checks;
      }
    }
  }
  v.require(jac_checks >= 10, "only " + std::to_string(jac_checks) + " Jacobian enumerations");
  v.notes.push_back(std::to_string(jac_checks) + " Jacobian enumerations");
  budget(v, Clock::now() - t0, 5 * 60, "curve oracles");
  return v;
}

Verdict frobenius_consistency() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(7);
  const auto primes = primes_up_to(50);
  int done = 0;
  while (done < 20) {
    const Genus2Curve c = test::random_curve(rng, 5 + done % 2);
    const std::uint32_t p = primes[rng() % primes.size()];
    if (c.is_bad(p)) continue;
    ++done;
    const std::string where = c.to_string() + " p=" + std::to_string(p);
    const FrobeniusClass fc = frobenius_class(c, p, 0);
    v.require(charpoly_rev(fc.matrix) == euler_factor(c, p).mod3(), where + ": charpoly");
    v.require(similitude(fc.matrix) == static_cast<int>(p % 3), where + ": similitude");
    v.require(fixed_dim(fc.matrix) == three_rank(c, p, 1), where + ": fixdim");
    for (std::uint64_t seed = 1; seed < 5; ++seed)
      v.require(frobenius_class(c, p, seed).class_id == fc.class_id, where + ": class unstable");
  }
  budget(v, Clock::now() - t0, 15 * 60, "frobenius");
  return v;
}

/// Whether the group stabilizes some 2-dimensional isotropic subspace.
bool stabilizes_isotropic_plane(const Subgroup& h) {
  using Vec = std::array<int, 4>;
  const Mat4 J = symplectic_form();
  auto pair = [&](const Vec& x, const Vec& y) {
    int s = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s += x[i] * J(i, j) * y[j];
    return s % 3;
  };
  auto apply = [](const Mat4& m, const Vec& x) {
    Vec y{};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) y[i] += m(i, j) * x[j];
      y[i] %= 3;
    }
    return y;
  };
  std::vector<Vec> all;
  for (int n = 1; n < 81; ++n) all.push_back({n % 3, n / 3 % 3, n / 9 % 3, n / 27});
  for (const Vec& u : all)
    for (const Vec& w : all) {
      if (pair(u, w) != 0) continue;
      std::set<Vec> plane;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          Vec x;
          for (int i = 0; i < 4; ++i) x[i] = (a * u[i] + b * w[i]) % 3;
          plane.insert(x);
        }
      if (plane.size() != 9) continue;
      const bool stable = std::all_of(h.generators.begin(), h.generators.end(), [&](const Mat4& m) {
        return std::all_of(plane.begin(), plane.end(), [&](const Vec& x) { return plane.count(apply(m, x)) > 0; });
      });
      if (stable) return true;
    }
  return false;
}

int exponent_of(const AtlasEntry& e) {
  int ex = 1;
  for (Elem x : e.elements) ex = std::lcm(ex, G().elem_order(x));
  return ex;
}

Verdict elkies() {
  Verdict v;
  const auto t0 = Clock::now();
  const Genus2Curve c = curve_validate(parse_coefficients("-16,-60,-543,1278,-693,54,-27"));
  const Config cfg;  // epsilon 1e-4, B1 1000, B2 200
  const PosteriorReport rep = end_to_end(c, cfg, atlas());
  v.require(rep.outcome == Outcome::Resolved && rep.final_entry.has_value(), "not resolved");
  if (!rep.final_entry) return v;
  const AtlasEntry& e = atlas().entries[*rep.final_entry];
  v.require(e.label == "3.80.3", "final label " + e.label);
  v.require(e.eligible && e.index == 80, "final entry not an eligible index-80 subgroup");
  v.require(atlas().cells[e.gassmann_cell].size() == 1, "final cell not a singleton");
  v.require(stabilizes_isotropic_plane(e.subgroup()), "final entry fixes no isotropic plane");
  const AtlasEntry& sib = atlas().at("3.80.4");
  v.require(sib.classvector != e.classvector, "3.80.3 and 3.80.4 share a distribution");
  std::set<std::size_t> gone;
  for (const auto& x : rep.cell.eliminated) gone.insert(x.entry);
  for (std::size_t i : atlas().cells[sib.gassmann_cell]) v.require(gone.count(i) > 0, "3.80.4 cell not eliminated");
  budget(v, Clock::now() - t0, 10 * 60, "elkies");
  return v;
}

Verdict example_41() {
  Verdict v;
  struct Case {
    const char* f;
    const char* label;
    std::size_t order;
  };
  for (const Case& k : {Case{"0,456976,0,-6840,0,1", "3.25920.3", 4}, Case{"0,913952,0,-13680,0,2", "3.12960.9", 8}}) {
    const auto t0 = Clock::now();
    const PosteriorReport rep = end_to_end(curve_validate(parse_coefficients(k.f)), Config{}, atlas());
    v.require(rep.final_entry.has_value(), std::string(k.f) + ": not resolved");
    if (!rep.final_entry) continue;
    const AtlasEntry& e = atlas().entries[*rep.final_entry];
    v.require(e.label == k.label, std::string(k.f) + ": label " + e.label);
    v.require(e.order == k.order, std::string(k.f) + ": order " + std::to_string(e.order));
    v.require(exponent_of(e) == 2, std::string(k.f) + ": exponent " + std::to_string(exponent_of(e)));
    budget(v, Clock::now() - t0, 10 * 60, k.f);
  }
  return v;
}

std::vector<FrobeniusSample> synthetic_samples(const AtlasEntry& e, std::size_t n, std::mt19937_64& rng) {
  std::discrete_distribution<std::size_t> dist(e.classvector.begin(), e.classvector.end());
  std::vector<FrobeniusSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = dist(rng);
    out[i].p = static_cast<std::uint32_t>(i + 5);
    out[i].sig = G().classes()[c].signature;
    out[i].class_id = static_cast<std::uint16_t>(c);
  }
  return out;
}

Verdict bayes_soundness() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(10);
  const auto& el = atlas().eligible();
  double worst = 1;
  for (int t = 0; t < 20; ++t) {
    const std::size_t truth = el[rng() % el.size()];
    const AtlasEntry& e = atlas().entries[truth];
    const Posterior post = bayes_update(G(), atlas(), synthetic_samples(e, 2000, rng), el, Mode::Class, 1u << 31);
    double mass = 0;
    for (std::size_t i : atlas().cells[e.gassmann_cell]) mass += post.of(i);
    worst = std::min(worst, mass);
    v.require(mass >= 0.99, e.label + ": cell posterior " + std::to_string(mass));
  }
  int hard = 0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t truth = el[rng() % el.size()];
    const auto s = synthetic_samples(atlas().entries[truth], 10, rng);
    const Posterior post = bayes_update(G(), atlas(), s, el, t % 2 ? Mode::Class : Mode::Signature, 1u << 31);
    const auto it = std::find(post.candidates.begin(), post.candidates.end(), truth);
    hard += post.hard_zero[it - post.candidates.begin()];
  }
  v.require(hard == 0, std::to_string(hard) + " hard eliminations of the true entry");
  std::ostringstream os;
  os << "min cell posterior " << std::setprecision(6) << worst;
  v.notes.push_back(os.str());
  budget(v, Clock::now() - t0, 5 * 60, "simulation");
  return v;
}

Verdict posterior_symmetry() {
  Verdict v;
  std::mt19937_64 rng(11);
  const auto& el = atlas().eligible();
  for (int t = 0; t < 10; ++t) {
    const auto s = synthetic_samples(atlas().entries[el[rng() % el.size()]], 50 + rng() % 500, rng);
    for (Mode m : {Mode::Signature, Mode::Class}) {
      const Posterior post = bayes_update(G(), atlas(), s, el, m, 1u << 31);
      for (const auto& cell : atlas().cells)
        for (std::size_t i : cell) {
          const double a = post.of(i), b = post.of(cell.front());
          v.require(std::memcmp(&a, &b, sizeof a) == 0, atlas().entries[i].label + " differs from its cell");
        }
    }
  }
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"atlas counts 492/330/280", atlas_counts},
      {"Gassmann statistics 230 cells, 38/3/2", gassmann_statistics},
      {"Table 1 pairs", table1},
      {"Tables 2-3 fixed-space statistics", tables23},
      {"transpose duality", transpose_duality},
      {"curve arithmetic oracles", curve_oracles},
      {"Frobenius matrix consistency", frobenius_consistency},
      {"Elkies curve end to end", elkies},
      {"example base curve and twist end to end", example_41},
      {"Bayes soundness simulation", bayes_soundness},
      {"posterior symmetry", posterior_symmetry},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << std::setw(2) << i + 1 << " " << criteria[i].first << " ["
              << seconds(Clock::now() - t0) << "]";
    for (const auto& n : v.notes) std::cout << "; " << n;
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
