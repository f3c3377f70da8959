/**
 * @file subgroup.hpp
 * @brief Subgroups of GSp(4,F_3) given by generators, and their class statistics.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mod3gal/group_table.hpp"
#include "mod3gal/subgroup_lattice.hpp"

namespace mod3gal {

struct Subgroup {
  std::vector<Mat4> generators;
  std::vector<Elem> elements;  // sorted indices into GroupTable::instance()
  std::optional<std::string> label;

  std::size_t order() const { return elements.size(); }
  bool contains(Elem x) const { return std::binary_search(elements.begin(), elements.end(), x); }
};

/// Subgroup generated by `gens`; throws std::invalid_argument for a matrix outside GSp(4,F_3).
inline Subgroup subgroup_close(const GroupTable& g, std::span<const Mat4> gens) {
  std::vector<Elem> idx;
  for (const auto& m : gens) {
    const Elem e = g.index_of(m);
    if (e == kNoElem) throw std::invalid_argument("generator not in GSp(4,F3)");
    idx.push_back(e);
  }
  return Subgroup{{gens.begin(), gens.end()}, closure(g, idx), std::nullopt};
}

/// Subgroup from a sorted element list; generators are recomputed.
inline Subgroup subgroup_from_elements(const GroupTable& g, std::vector<Elem> elements) {
  Subgroup h;
  for (Elem x : small_generating_set(g, elements)) h.generators.push_back(g.mat(x));
  h.elements = std::move(elements);
  return h;
}

/// Reads matrices printed in the row-vector convention (the group acts by
/// v -> vM). Internally groups act on column vectors, so each is transposed.
inline std::vector<Mat4> from_row_convention(std::span<const Mat4> printed) {
  std::vector<Mat4> out;
  for (const auto& m : printed) out.push_back(transpose(m));
  return out;
}

inline std::vector<Elem> generator_indices(const GroupTable& g, const Subgroup& h) {
  std::vector<Elem> idx;
  for (const auto& m : h.generators) idx.push_back(g.index_of(m));
  return idx;
}

/// Similitude surjective and some involution has similitude 2.
inline bool is_eligible(const GroupTable& g, const Subgroup& h) {
  bool sim2 = false, inv2 = false;
  for (Elem x : h.elements) {
    if (g.similitude(x) != 2) continue;
    sim2 = true;
    if (g.mul(x, x) == g.identity()) {
      inv2 = true;
      break;
    }
  }
  return sim2 && inv2;
}

/// classvector[c] = |H n class c|.
inline std::vector<std::uint32_t> class_vector(const GroupTable& g, const Subgroup& h) {
  std::vector<std::uint32_t> cv(g.num_classes(), 0);
  for (Elem x : h.elements) ++cv[g.class_of(x)];
  return cv;
}

using SigDist = std::map<Signature, std::uint32_t>;

/// Aggregates a classvector through the class -> signature map.
inline SigDist signature_distribution(const GroupTable& g, std::span<const std::uint32_t> classvector) {
  SigDist d;
  for (std::size_t c = 0; c < classvector.size(); ++c)
    if (classvector[c]) d[g.classes()[c].signature] += classvector[c];
  return d;
}

inline Subgroup transpose_subgroup(const GroupTable& g, const Subgroup& h) {
  Subgroup t;
  for (const auto& m : h.generators) t.generators.push_back(transpose(m));
  for (Elem x : h.elements) t.elements.push_back(g.transpose(x));
  std::sort(t.elements.begin(), t.elements.end());
  return t;
}

/// g H g^-1 for g in GSp(4,F_3).
inline Subgroup conjugate_subgroup(const GroupTable& g, const Subgroup& h, Elem by) {
  Subgroup c;
  for (const auto& m : h.generators) c.generators.push_back(g.mat(g.conj(by, g.index_of(m))));
  for (Elem x : h.elements) c.elements.push_back(g.conj(by, x));
  std::sort(c.elements.begin(), c.elements.end());
  return c;
}

inline int fixed_dim(const GroupTable& g, std::span<const Elem> elems) {
  std::vector<Mat4> ms;
  ms.reserve(elems.size());
  for (Elem x : elems) ms.push_back(g.mat(x));
  return fixed_space_dim(ms);
}

inline int fixed_dim(const Subgroup& h) { return fixed_space_dim(h.generators); }

}  // namespace mod3gal
