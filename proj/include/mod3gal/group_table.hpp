/**
 * @file group_table.hpp
 * @brief Element table and conjugacy classes of GSp(4,F_3).
 *
 * Elements are addressed by a dense index in [0, 103680), assigned in
 * increasing MatKey order. A flat open-addressing table maps keys back to
 * indices so products stay O(1).
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mod3gal/gf3_matrix.hpp"

namespace mod3gal {

using Elem = std::uint32_t;
inline constexpr Elem kNoElem = 0xffffffffu;

inline constexpr std::size_t kGsp43Order = 103680;  // 2 * 3^4 * (3^2 - 1) * (3^4 - 1)

/// Open-addressing map MatKey -> element index.
class KeyIndex {
 public:
  explicit KeyIndex(std::size_t n = 0) {
    std::size_t cap = 16;
    while (cap < 2 * n + 16) cap <<= 1;
    mask_ = cap - 1;
    keys_.assign(cap, kEmpty);
    vals_.assign(cap, kNoElem);
  }

  void insert(MatKey k, Elem v) {
    std::size_t h = slot(k);
    while (keys_[h] != kEmpty && keys_[h] != k) h = (h + 1) & mask_;
    keys_[h] = k;
    vals_[h] = v;
  }

  Elem find(MatKey k) const {
    std::size_t h = slot(k);
    while (keys_[h] != kEmpty) {
      if (keys_[h] == k) return vals_[h];
      h = (h + 1) & mask_;
    }
    return kNoElem;
  }

 private:
  static constexpr MatKey kEmpty = 0xffffffffu;
  std::size_t slot(MatKey k) const {
    return static_cast<std::size_t>((static_cast<std::uint64_t>(k) * 0x9E3779B97F4A7C15ull) >> 20) & mask_;
  }
  std::size_t mask_ = 0;
  std::vector<MatKey> keys_;
  std::vector<Elem> vals_;
};

struct ConjugacyClass {
  Elem rep = 0;
  std::size_t size = 0;
  int order = 1;        // element order
  int similitude = 1;   // 1 or 2
  Signature signature;  // constant on the class
};

/// GSp(4,F_3) with its conjugacy classes. Immutable after construction.
class GroupTable {
 public:
  /// Builds the group by closure of the standard generators and classifies it.
  static std::shared_ptr<const GroupTable> build() {
    return std::shared_ptr<const GroupTable>(new GroupTable());
  }

  /// Lazily built process-wide instance.
  static const GroupTable& instance() {
    static const std::shared_ptr<const GroupTable> g = build();
    return *g;
  }

  /// Standard generators: transvections for e1..e4 and e1+e2, plus diag(1,1,2,2).
  static std::vector<Mat4> standard_generators() {
    const Mat4 J = symplectic_form();
    std::vector<std::array<int, 4>> vecs = {
        {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 1, 0, 0}};
    std::vector<Mat4> gens;
    for (const auto& v : vecs) {
      // T_v(x) = x + <v, x> v  =>  T_v = I + v v^T J
      Mat4 vvt;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) vvt(i, j) = static_cast<std::uint8_t>(v[i] * v[j] % 3);
      gens.push_back(Mat4::identity() + vvt * J);
    }
    gens.push_back(Mat4::diag(1, 1, 2, 2));
    return gens;
  }

  std::size_t size() const { return mats_.size(); }
  const Mat4& mat(Elem a) const { return mats_[a]; }
  MatKey key(Elem a) const { return keys_[a]; }
  Elem identity() const { return identity_; }
  Elem minus_identity() const { return minus_identity_; }

  /// Index of a matrix, or kNoElem when it is not in GSp(4,F_3).
  Elem index_of(const Mat4& m) const { return index_.find(encode(m)); }
  Elem index_of_key(MatKey k) const { return index_.find(k); }

  Elem mul(Elem a, Elem b) const { return index_.find(row_mul_key(rows_[a], rows_[b])); }
  Elem inv(Elem a) const { return inv_[a]; }
  Elem conj(Elem g, Elem x) const {  // g x g^-1
    return index_.find(row_mul_key(row_mul(rows_[g], rows_[x]), rows_[inv_[g]]));
  }
  Elem transpose(Elem a) const { return index_.find(encode(mod3gal::transpose(mats_[a]))); }

  int similitude(Elem a) const { return sim_[a]; }
  bool in_sp(Elem a) const { return sim_[a] == 1; }
  int elem_order(Elem a) const { return classes_[class_of_[a]].order; }

  std::uint16_t class_of(Elem a) const { return class_of_[a]; }
  std::size_t num_classes() const { return classes_.size(); }
  const std::vector<ConjugacyClass>& classes() const { return classes_; }
  const std::vector<Elem>& generators() const { return gens_; }

  /// lcm of all element orders.
  int exponent() const {
    int e = 1;
    for (const auto& c : classes_) e = std::lcm(e, c.order);
    return e;
  }

  /// Class sizes as a vector indexed by class id.
  std::vector<std::size_t> class_sizes() const {
    std::vector<std::size_t> v;
    for (const auto& c : classes_) v.push_back(c.size);
    return v;
  }

 private:
  // Row-packed arithmetic: each row of a matrix is a base-3 integer in [0,81),
  // first entry most significant, so a key is ((r0*81 + r1)*81 + r2)*81 + r3.
  using Rows = std::array<std::uint8_t, 4>;
  static constexpr std::uint32_t kPow81[4] = {1, 81, 6561, 531441};

  struct RowTables {
    std::uint8_t add[81][81];
    std::uint8_t smul[3][81];
    RowTables() {
      for (int a = 0; a < 81; ++a) {
        for (int b = 0; b < 81; ++b) {
          int r = 0, pa = a, pb = b, w = 1;
          for (int i = 0; i < 4; ++i) {
            r += ((pa % 3 + pb % 3) % 3) * w;
            pa /= 3;
            pb /= 3;
            w *= 3;
          }
          add[a][b] = static_cast<std::uint8_t>(r);
        }
        for (int s = 0; s < 3; ++s) {
          int r = 0, pa = a, w = 1;
          for (int i = 0; i < 4; ++i) {
            r += ((pa % 3) * s % 3) * w;
            pa /= 3;
            w *= 3;
          }
          smul[s][a] = static_cast<std::uint8_t>(r);
        }
      }
    }
  };
  static const RowTables& tables() {
    static const RowTables t;
    return t;
  }
  static std::uint8_t row_times(std::uint8_t row, const Rows& b) {
    const auto& t = tables();
    // row entries (most significant first) multiply the rows of b
    const int e0 = row / 27, e1 = row / 9 % 3, e2 = row / 3 % 3, e3 = row % 3;
    return t.add[t.add[t.smul[e0][b[0]]][t.smul[e1][b[1]]]][t.add[t.smul[e2][b[2]]][t.smul[e3][b[3]]]];
  }
  static Rows row_mul(const Rows& a, const Rows& b) {
    return {row_times(a[0], b), row_times(a[1], b), row_times(a[2], b), row_times(a[3], b)};
  }
  static MatKey row_mul_key(const Rows& a, const Rows& b) {
    return ((static_cast<MatKey>(row_times(a[0], b)) * 81 + row_times(a[1], b)) * 81 + row_times(a[2], b)) * 81 +
           row_times(a[3], b);
  }

  GroupTable() {
    std::vector<Mat4> gm = standard_generators();
    // Closure by BFS over keys.
    KeyIndex seen(kGsp43Order);
    std::vector<Mat4> found;
    found.reserve(kGsp43Order);
    found.push_back(Mat4::identity());
    seen.insert(encode(Mat4::identity()), 0);
    for (std::size_t head = 0; head < found.size(); ++head) {
      for (const auto& g : gm) {
        const Mat4 y = found[head] * g;
        const MatKey k = encode(y);
        if (seen.find(k) == kNoElem) {
          seen.insert(k, static_cast<Elem>(found.size()));
          found.push_back(y);
          if (found.size() > kGsp43Order) break;
        }
      }
      if (found.size() > kGsp43Order) break;
    }
    if (found.size() != kGsp43Order)
      throw std::logic_error("GSp(4,3) closure has " + std::to_string(found.size()) +
                             " elements, expected 103680");

    std::sort(found.begin(), found.end(), [](const Mat4& a, const Mat4& b) { return encode(a) < encode(b); });
    mats_ = std::move(found);
    keys_.resize(mats_.size());
    index_ = KeyIndex(mats_.size());
    for (Elem i = 0; i < mats_.size(); ++i) {
      keys_[i] = encode(mats_[i]);
      index_.insert(keys_[i], i);
    }
    rows_.resize(mats_.size());
    for (Elem i = 0; i < mats_.size(); ++i)
      for (int r = 0; r < 4; ++r) rows_[i][r] = static_cast<std::uint8_t>(keys_[i] / kPow81[3 - r] % 81);
    identity_ = index_of(Mat4::identity());
    minus_identity_ = index_of(Mat4::scalar(2));
    for (const auto& g : gm) gens_.push_back(index_of(g));

    inv_.resize(mats_.size());
    sim_.resize(mats_.size());
    for (Elem i = 0; i < mats_.size(); ++i) {
      inv_[i] = index_of(inverse(mats_[i]));
      sim_[i] = static_cast<std::uint8_t>(*mod3gal::similitude(mats_[i]));
    }

    // Conjugacy classes: orbits under conjugation by the generators.
    class_of_.assign(mats_.size(), 0xffff);
    std::vector<Elem> stack;
    for (Elem x = 0; x < mats_.size(); ++x) {
      if (class_of_[x] != 0xffff) continue;
      const auto cid = static_cast<std::uint16_t>(classes_.size());
      ConjugacyClass cc;
      cc.rep = x;
      class_of_[x] = cid;
      stack.assign(1, x);
      std::size_t count = 0;
      while (!stack.empty()) {
        const Elem y = stack.back();
        stack.pop_back();
        ++count;
        for (Elem g : gens_) {
          const Elem z = conj(g, y);
          if (class_of_[z] == 0xffff) {
            class_of_[z] = cid;
            stack.push_back(z);
          }
        }
      }
      cc.size = count;
      cc.similitude = sim_[x];
      cc.signature = signature_of(mats_[x]);
      int ord = 1;
      for (Elem y = x; y != identity_; y = mul(y, x)) ++ord;
      cc.order = ord;
      classes_.push_back(cc);
    }
  }

  std::vector<Mat4> mats_;
  std::vector<MatKey> keys_;
  std::vector<Rows> rows_;
  KeyIndex index_;
  std::vector<Elem> inv_;
  std::vector<std::uint8_t> sim_;
  std::vector<std::uint16_t> class_of_;
  std::vector<ConjugacyClass> classes_;
  std::vector<Elem> gens_;
  Elem identity_ = 0;
  Elem minus_identity_ = 0;
};

}  // namespace mod3gal
