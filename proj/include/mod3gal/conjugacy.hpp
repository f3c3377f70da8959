/**
 * @file conjugacy.hpp
 * @brief Conjugacy of subgroups of GSp(4,F_3) inside GSp(4,F_3) or GL(4,F_3).
 *
 * A conjugator g with g h_i g^-1 = x_i for generators h_i of H1 and chosen
 * images x_i in H2 solves the linear system g h_i = x_i g in the 16 entries
 * of g. The search assigns images generator by generator, keeps the solution
 * space in reduced echelon form, and at each complete assignment looks for an
 * invertible (or similitude) matrix inside that space.
 */
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mod3gal/subgroup.hpp"

namespace mod3gal {

enum class Ambient { GSp, GL };

namespace detail {

using Row16 = std::array<std::uint8_t, 16>;

/// Homogeneous linear system over F_3 in 16 unknowns, kept in reduced echelon form.
class System16 {
 public:
  /// Adds an equation; returns false when it was already implied.
  bool add(Row16 r) {
    for (const auto& [c, row] : rows_) {
      if (r[c] == 0) continue;
      const int f = r[c];
      for (int j = 0; j < 16; ++j) r[j] = static_cast<std::uint8_t>((r[j] + 3 * 3 - f * row[j]) % 3);
    }
    int piv = -1;
    for (int j = 0; j < 16; ++j)
      if (r[j]) {
        piv = j;
        break;
      }
    if (piv < 0) return false;
    const int inv = r[piv];  // self-inverse in F_3
    for (int j = 0; j < 16; ++j) r[j] = static_cast<std::uint8_t>(r[j] * inv % 3);
    for (auto& [c, row] : rows_) {
      if (row[piv] == 0) continue;
      const int f = row[piv];
      for (int j = 0; j < 16; ++j) row[j] = static_cast<std::uint8_t>((row[j] + 3 * 3 - f * r[j]) % 3);
    }
    rows_.emplace_back(piv, r);
    return true;
  }

  int rank() const { return static_cast<int>(rows_.size()); }

  std::vector<Row16> nullspace() const {
    std::array<int, 16> pivot_row;
    pivot_row.fill(-1);
    for (std::size_t i = 0; i < rows_.size(); ++i) pivot_row[rows_[i].first] = static_cast<int>(i);
    std::vector<Row16> basis;
    for (int f = 0; f < 16; ++f) {
      if (pivot_row[f] >= 0) continue;
      Row16 v{};
      v[f] = 1;
      for (const auto& [c, row] : rows_) v[c] = static_cast<std::uint8_t>((3 - row[f]) % 3);
      basis.push_back(v);
    }
    return basis;
  }

 private:
  std::vector<std::pair<int, Row16>> rows_;
};

inline void add_intertwining(System16& sys, const Mat4& h, const Mat4& x) {
  // (g h - x g)_{ij} = sum_k g_{ik} h_{kj} - x_{ik} g_{kj}
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Row16 r{};
      for (int k = 0; k < 4; ++k) {
        r[4 * i + k] = static_cast<std::uint8_t>((r[4 * i + k] + h(k, j)) % 3);
        r[4 * k + j] = static_cast<std::uint8_t>((r[4 * k + j] + 3 - x(i, k)) % 3);
      }
      sys.add(r);
    }
}

/// First matrix in span(basis) that is invertible (GL) or a similitude (GSp).
inline std::optional<Mat4> find_unit(const std::vector<Row16>& basis, Ambient amb) {
  const std::size_t s = basis.size();
  if (s == 0) return std::nullopt;
  std::vector<int> c(s, 0);
  // Leading nonzero coefficient fixed to 1: scalar multiples change nothing.
  for (std::size_t lead = 0; lead < s; ++lead) {
    std::fill(c.begin(), c.end(), 0);
    c[lead] = 1;
    for (;;) {
      Mat4 m;
      for (std::size_t b = 0; b < s; ++b)
        if (c[b])
          for (int j = 0; j < 16; ++j) m.e[j] = static_cast<std::uint8_t>((m.e[j] + c[b] * basis[b][j]) % 3);
      if (amb == Ambient::GL ? det(m) != 0 : in_gsp(m)) return m;
      std::size_t pos = lead + 1;
      while (pos < s && c[pos] == 2) c[pos++] = 0;
      if (pos >= s) break;
      ++c[pos];
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// A g in the ambient group with g H1 g^-1 = H2, or nullopt.
inline std::optional<Mat4> are_conjugate(const GroupTable& g, const Subgroup& h1, const Subgroup& h2, Ambient amb) {
  if (h1.order() != h2.order()) return std::nullopt;
  if (h1.elements == h2.elements) return Mat4::identity();

  // Invariant key of an element under the ambient conjugation.
  auto key = [&](Elem x) -> int {
    if (amb == Ambient::GSp) return g.class_of(x);
    return g.classes()[g.class_of(x)].signature.code() * 64 + g.elem_order(x);
  };
  std::map<int, int> k1, k2;
  for (Elem x : h1.elements) ++k1[key(x)];
  for (Elem x : h2.elements) ++k2[key(x)];
  if (k1 != k2) return std::nullopt;
  if (fixed_dim(g, h1.elements) != fixed_dim(g, h2.elements)) return std::nullopt;
  if (fixed_dim(transpose_subgroup(g, h1)) != fixed_dim(transpose_subgroup(g, h2))) return std::nullopt;

  std::vector<Elem> gens;
  for (Elem x : small_generating_set(g, h1.elements)) gens.push_back(x);
  std::vector<Elem> h2gens = small_generating_set(g, h2.elements);

  std::vector<std::vector<Elem>> cands(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (Elem x : h2.elements)
      if (key(x) == key(gens[i])) cands[i].push_back(x);
  {
    // Images of the first generator matter only up to conjugacy in H2.
    std::vector<Elem> reps;
    std::vector<std::uint8_t> seen(g.size(), 0);
    for (Elem x : cands[0]) {
      if (seen[x]) continue;
      reps.push_back(x);
      std::vector<Elem> stack{x};
      seen[x] = 1;
      while (!stack.empty()) {
        const Elem y = stack.back();
        stack.pop_back();
        for (Elem s : h2gens) {
          const Elem z = g.conj(s, y);
          if (!seen[z]) {
            seen[z] = 1;
            stack.push_back(z);
          }
        }
      }
    }
    cands[0] = std::move(reps);
  }

  std::optional<Mat4> found;
  auto dfs = [&](auto&& self, std::size_t depth, const detail::System16& sys) -> bool {
    if (depth == gens.size()) {
      found = detail::find_unit(sys.nullspace(), amb);
      return found.has_value();
    }
    for (Elem x : cands[depth]) {
      detail::System16 next = sys;
      detail::add_intertwining(next, g.mat(gens[depth]), g.mat(x));
      if (next.rank() == 16) continue;
      if (self(self, depth + 1, next)) return true;
    }
    return false;
  };
  if (!dfs(dfs, 0, detail::System16{})) return std::nullopt;
  return found;
}

}  // namespace mod3gal
