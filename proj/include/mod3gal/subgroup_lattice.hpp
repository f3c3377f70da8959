/**
 * @file subgroup_lattice.hpp
 * @brief Subgroups of a finite group up to conjugacy, by cyclic extension.
 *
 * Every subgroup H has a chain R = H_0 < H_1 < ... < H_n = H where R is the
 * solvable residual (a perfect group) and each H_i is normal of prime index
 * in H_{i+1}. Starting from representatives of the perfect subgroups and
 * repeatedly adjoining elements g of N_G(K) \ K whose image in N_G(K)/K has
 * prime order therefore reaches every conjugacy class.
 *
 * Duplicate detection uses set fingerprints: each element gets a random
 * 64-bit weight and a subgroup's fingerprint is the wrapping sum of the
 * weights of its elements. When a class representative is accepted, the
 * fingerprints of all its conjugates are registered, so a candidate is
 * recognised with one O(|H|) pass and one hash lookup.
 */
#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mod3gal/group_table.hpp"

namespace mod3gal {

template <class G>
concept FiniteGroupOps = requires(const G& g, Elem a, Elem b) {
  { g.size() } -> std::convertible_to<std::size_t>;
  { g.mul(a, b) } -> std::convertible_to<Elem>;
  { g.inv(a) } -> std::convertible_to<Elem>;
  { g.identity() } -> std::convertible_to<Elem>;
};

template <FiniteGroupOps G>
inline Elem conjugate(const G& g, Elem by, Elem x) {
  if constexpr (requires { g.conj(by, x); })
    return g.conj(by, x);
  else
    return g.mul(g.mul(by, x), g.inv(by));
}

/// A subgroup of a parent group, re-indexed densely on [0, |H|).
template <FiniteGroupOps P>
class SubgroupView {
 public:
  SubgroupView(const P& parent, std::span<const Elem> elements)
      : parent_(&parent), elems_(elements.begin(), elements.end()), local_(parent.size(), kNoElem) {
    for (Elem i = 0; i < elems_.size(); ++i) local_[elems_[i]] = i;
    id_ = local_[parent.identity()];
    if (id_ == kNoElem) throw std::invalid_argument("element set does not contain the identity");
  }

  std::size_t size() const { return elems_.size(); }
  Elem mul(Elem a, Elem b) const { return local_[parent_->mul(elems_[a], elems_[b])]; }
  Elem inv(Elem a) const { return local_[parent_->inv(elems_[a])]; }
  Elem identity() const { return id_; }
  Elem to_parent(Elem a) const { return elems_[a]; }
  /// Local index of a parent element, or kNoElem when outside the subgroup.
  Elem local(Elem parent_elem) const { return local_[parent_elem]; }

 private:
  const P* parent_;
  std::vector<Elem> elems_;
  std::vector<Elem> local_;
  Elem id_ = 0;
};

template <FiniteGroupOps G>
int element_order(const G& g, Elem x) {
  int n = 1;
  for (Elem y = x; y != g.identity(); y = g.mul(y, x)) ++n;
  return n;
}

/// Sorted elements of the subgroup generated by `gens`. Returns nullopt if it
/// would exceed `cap` elements.
template <FiniteGroupOps G>
std::optional<std::vector<Elem>> closure_capped(const G& g, std::span<const Elem> gens, std::size_t cap) {
  std::vector<Elem> elems{g.identity()};
  std::unordered_map<Elem, char> seen;
  seen.reserve(64);
  seen.emplace(g.identity(), 1);
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (Elem s : gens) {
      const Elem y = g.mul(elems[head], s);
      if (seen.emplace(y, 1).second) {
        elems.push_back(y);
        if (elems.size() > cap) return std::nullopt;
      }
    }
  }
  std::sort(elems.begin(), elems.end());
  return elems;
}

/// Variant backed by a bitmap over the whole group, for large subgroups.
template <FiniteGroupOps G>
std::vector<Elem> closure(const G& g, std::span<const Elem> gens) {
  std::vector<std::uint8_t> in(g.size(), 0);
  std::vector<Elem> elems{g.identity()};
  in[g.identity()] = 1;
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (Elem s : gens) {
      const Elem y = g.mul(elems[head], s);
      if (!in[y]) {
        in[y] = 1;
        elems.push_back(y);
      }
    }
  }
  std::sort(elems.begin(), elems.end());
  return elems;
}

/// A generating set of the subgroup with the given sorted elements, built by
/// adjoining elements in a fixed pseudo-random order until the closure is full.
template <FiniteGroupOps G>
std::vector<Elem> small_generating_set(const G& g, std::span<const Elem> elements, std::uint64_t seed = 1) {
  std::vector<Elem> order(elements.begin(), elements.end());
  std::shuffle(order.begin(), order.end(), std::mt19937_64(seed));
  std::vector<Elem> gens;
  std::vector<std::uint8_t> in(g.size(), 0);
  in[g.identity()] = 1;
  std::size_t have = 1;
  for (Elem x : order) {
    if (have == elements.size()) break;
    if (in[x]) continue;
    gens.push_back(x);
    const std::vector<Elem> c = closure(g, gens);
    for (Elem y : c) in[y] = 1;
    have = c.size();
  }
  return gens;
}

/// Generators of the derived subgroup of <gens>: the normal closure of the
/// commutators of generator pairs.
template <FiniteGroupOps G>
std::vector<Elem> derived_subgroup(const G& g, std::span<const Elem> gens) {
  std::vector<Elem> dgens;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      const Elem c = g.mul(g.mul(gens[i], gens[j]), g.mul(g.inv(gens[i]), g.inv(gens[j])));
      if (c != g.identity()) dgens.push_back(c);
    }
  std::vector<Elem> d = closure(g, dgens);
  std::vector<std::uint8_t> in(g.size(), 0);
  for (Elem x : d) in[x] = 1;
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < dgens.size() && !grew; ++i)
      for (Elem s : gens) {
        const Elem y = conjugate(g, s, dgens[i]);
        if (!in[y]) {
          dgens.push_back(y);
          d = closure(g, dgens);
          std::fill(in.begin(), in.end(), 0);
          for (Elem x : d) in[x] = 1;
          grew = true;
          break;
        }
      }
  }
  return d;
}

/// Elements of N_G(H) where H = <gens> has membership bitmap `in_h`.
template <FiniteGroupOps G>
std::vector<Elem> normalizer(const G& g, std::span<const Elem> gens, const std::vector<std::uint8_t>& in_h) {
  std::vector<Elem> n;
  for (Elem x = 0; x < g.size(); ++x) {
    bool ok = true;
    for (Elem s : gens)
      if (!in_h[conjugate(g, x, s)]) {
        ok = false;
        break;
      }
    if (ok) n.push_back(x);
  }
  return n;
}

struct SubgroupClassRecord {
  std::vector<Elem> elements;    // sorted
  std::vector<Elem> generators;  // generating set
  std::size_t normalizer_order = 0;
};

inline bool is_prime_small(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Cyclic-extension enumerator of subgroup classes.
template <FiniteGroupOps G>
class SubgroupClassEnumerator {
 public:
  explicit SubgroupClassEnumerator(const G& g, std::uint64_t seed = 0x6d6f6433ull) : g_(g) {
    std::mt19937_64 rng(seed);
    weight_.resize(g.size());
    for (auto& w : weight_) w = rng();
  }

  std::uint64_t fingerprint(std::span<const Elem> elements) const {
    std::uint64_t s = 0;
    for (Elem x : elements) s += weight_[x];
    return s;
  }

  /// Index of the class containing the subgroup with these elements, if known.
  std::optional<std::size_t> find(std::span<const Elem> elements) const {
    const auto it = known_.find(fingerprint(elements));
    if (it == known_.end()) return std::nullopt;
    return it->second;
  }

  /// Registers <gens> as a starting point. Returns its class index.
  std::size_t add_seed(std::span<const Elem> gens) {
    std::vector<Elem> gv(gens.begin(), gens.end());
    std::vector<Elem> elems = closure(g_, gv);
    return consider(std::move(elems), std::move(gv));
  }

  /// Runs cyclic extension to a fixpoint from every class found so far.
  void run() {
    while (next_ < reps_.size()) extend(next_++);
  }

  const std::vector<SubgroupClassRecord>& classes() const { return reps_; }

 private:
  std::size_t consider(std::vector<Elem> elements, std::vector<Elem> gens) {
    if (auto hit = find(elements)) return *hit;
    const std::size_t id = reps_.size();
    std::vector<std::uint8_t> in_h(g_.size(), 0);
    for (Elem x : elements) in_h[x] = 1;
    std::vector<Elem> norm = normalizer(g_, gens, in_h);

    // Register every conjugate: one per left coset of the normalizer.
    std::vector<std::uint8_t> covered(g_.size(), 0);
    for (Elem x = 0; x < g_.size(); ++x) {
      if (covered[x]) continue;
      for (Elem n : norm) covered[g_.mul(x, n)] = 1;
      std::uint64_t fp = 0;
      for (Elem h : elements) fp += weight_[conjugate(g_, x, h)];
      known_.emplace(fp, id);
    }
    reps_.push_back({std::move(elements), std::move(gens), norm.size()});
    return id;
  }

  void extend(std::size_t id) {
    // Copies: consider() may reallocate reps_.
    const std::vector<Elem> kelems = reps_[id].elements;
    const std::vector<Elem> kgens = reps_[id].generators;
    std::vector<std::uint8_t> in_k(g_.size(), 0), done(g_.size(), 0);
    for (Elem x : kelems) in_k[x] = done[x] = 1;
    const std::vector<Elem> norm = normalizer(g_, kgens, in_k);

    for (Elem x : norm) {
      if (done[x]) continue;
      std::size_t ord = 1;
      Elem y = x;
      while (!in_k[y]) {
        y = g_.mul(y, x);
        ++ord;
      }
      if (!is_prime_small(ord)) continue;
      // H = K <x> is the union of the cosets x^i K, i < ord.
      std::vector<Elem> h;
      h.reserve(kelems.size() * ord);
      Elem xp = g_.identity();
      for (std::size_t i = 0; i < ord; ++i) {
        for (Elem k : kelems) h.push_back(g_.mul(xp, k));
        xp = g_.mul(xp, x);
      }
      for (Elem e : h) done[e] = 1;
      std::sort(h.begin(), h.end());
      std::vector<Elem> gens = kgens;
      gens.push_back(x);
      consider(std::move(h), std::move(gens));
    }
  }

  const G& g_;
  std::vector<std::uint64_t> weight_;
  std::unordered_map<std::uint64_t, std::size_t> known_;
  std::vector<SubgroupClassRecord> reps_;
  std::size_t next_ = 0;
};

/// Largest order of a proper perfect subgroup of Sp(4,F_3); its perfect
/// subgroups have orders 1, 120, 720, 1920 and 51840.
inline constexpr std::size_t kMaxProperPerfectOrder = 1920;

/// Seeds `en` with the trivial group, the perfect residual of <gens> = g and
/// every perfect subgroup of order <= cap generated by an element of order 5
/// and one further element. For subgroups of GSp(4,F_3) this reaches every
/// perfect subgroup: a nontrivial perfect group is nonsolvable, so its order
/// is divisible by 5.
template <FiniteGroupOps G>
void seed_perfect_subgroups(SubgroupClassEnumerator<G>& en, const G& g, std::span<const Elem> gens,
                            std::size_t cap = kMaxProperPerfectOrder) {
  en.add_seed(std::span<const Elem>{});

  std::vector<Elem> cur(gens.begin(), gens.end());
  std::vector<Elem> res = closure(g, cur);
  for (;;) {
    std::vector<Elem> d = derived_subgroup(g, cur);
    if (d.size() == res.size()) break;
    res = std::move(d);
    cur = small_generating_set(g, res);
  }
  if (res.size() == 1) return;
  if (res.size() > cap) en.add_seed(cur);

  std::vector<std::uint8_t> in_res(g.size(), 0);
  for (Elem x : res) in_res[x] = 1;
  std::vector<std::uint8_t> seen5(g.size(), 0), vis(g.size(), 0);
  for (Elem a : res) {
    if (seen5[a] || element_order(g, a) != 5) continue;
    for (Elem x = 0; x < g.size(); ++x) seen5[conjugate(g, x, a)] = 1;
    std::vector<Elem> cent;
    for (Elem x = 0; x < g.size(); ++x)
      if (g.mul(x, a) == g.mul(a, x)) cent.push_back(x);
    std::fill(vis.begin(), vis.end(), 0);
    for (Elem b : res) {
      if (vis[b]) continue;
      for (Elem z : cent) vis[conjugate(g, z, b)] = 1;
      const Elem pair[2] = {a, b};
      const auto h = closure_capped(g, std::span<const Elem>(pair), cap);
      if (!h) continue;
      if (derived_subgroup(g, std::span<const Elem>(pair)).size() == h->size()) en.add_seed(std::span<const Elem>(pair));
    }
  }
}

}  // namespace mod3gal
