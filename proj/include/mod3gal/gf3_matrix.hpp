/**
 * @file gf3_matrix.hpp
 * @brief 4x4 matrices over F_3 and the symplectic-similitude structure.
 *
 * Matrices act on column vectors. The alternating form is the antidiagonal
 * block form
 *
 *      [  0  0  0  1 ]
 *      [  0  0  1  0 ]
 *      [  0 -1  0  0 ]
 *      [ -1  0  0  0 ]
 *
 * so (e1,e4) and (e2,e3) are the hyperbolic pairs. A matrix M lies in
 * GSp(4,F_3) when M^T J M = lambda J for some lambda in {1,2}.
 */
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mod3gal {

/// Base-3 integer of the 16 row-major entries, first entry most significant.
using MatKey = std::uint32_t;

inline constexpr MatKey kNumMatKeys = 43046721u;  // 3^16

namespace detail {
inline constexpr std::uint8_t kAdd3[6] = {0, 1, 2, 0, 1, 2};
inline constexpr std::uint8_t neg3(std::uint8_t a) { return a == 0 ? 0 : 3 - a; }
inline constexpr std::uint8_t inv3(std::uint8_t a) { return a; }  // 1^-1=1, 2^-1=2
}  // namespace detail

struct Mat4 {
  std::array<std::uint8_t, 16> e{};

  constexpr std::uint8_t operator()(int r, int c) const { return e[r * 4 + c]; }
  constexpr std::uint8_t& operator()(int r, int c) { return e[r * 4 + c]; }

  friend constexpr bool operator==(const Mat4&, const Mat4&) = default;
  friend constexpr auto operator<=>(const Mat4&, const Mat4&) = default;

  static constexpr Mat4 identity() {
    Mat4 m;
    for (int i = 0; i < 4; ++i) m(i, i) = 1;
    return m;
  }
  static constexpr Mat4 scalar(std::uint8_t s) {
    Mat4 m;
    for (int i = 0; i < 4; ++i) m(i, i) = s % 3;
    return m;
  }
  static constexpr Mat4 diag(int a, int b, int c, int d) {
    Mat4 m;
    m(0, 0) = static_cast<std::uint8_t>(((a % 3) + 3) % 3);
    m(1, 1) = static_cast<std::uint8_t>(((b % 3) + 3) % 3);
    m(2, 2) = static_cast<std::uint8_t>(((c % 3) + 3) % 3);
    m(3, 3) = static_cast<std::uint8_t>(((d % 3) + 3) % 3);
    return m;
  }
  /// Builds a matrix from 16 row-major integers (reduced mod 3).
  static Mat4 from_entries(std::span<const int> v) {
    if (v.size() != 16) throw std::invalid_argument("GF3 matrix needs 16 entries");
    Mat4 m;
    for (int i = 0; i < 16; ++i) m.e[i] = static_cast<std::uint8_t>(((v[i] % 3) + 3) % 3);
    return m;
  }
  std::vector<int> entries() const { return {e.begin(), e.end()}; }
};

inline Mat4 operator*(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 4; ++i) {
    const int a0 = a.e[i * 4], a1 = a.e[i * 4 + 1], a2 = a.e[i * 4 + 2], a3 = a.e[i * 4 + 3];
    for (int j = 0; j < 4; ++j) {
      const int s = a0 * b.e[j] + a1 * b.e[4 + j] + a2 * b.e[8 + j] + a3 * b.e[12 + j];
      r.e[i * 4 + j] = static_cast<std::uint8_t>(s % 3);
    }
  }
  return r;
}

inline Mat4 operator+(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 16; ++i) r.e[i] = detail::kAdd3[a.e[i] + b.e[i]];
  return r;
}

inline Mat4 operator-(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 16; ++i) r.e[i] = detail::kAdd3[a.e[i] + detail::neg3(b.e[i])];
  return r;
}

inline Mat4 scale(const Mat4& a, int s) {
  s = ((s % 3) + 3) % 3;
  Mat4 r;
  for (int i = 0; i < 16; ++i) r.e[i] = static_cast<std::uint8_t>((a.e[i] * s) % 3);
  return r;
}

inline Mat4 transpose(const Mat4& a) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = a(j, i);
  return r;
}

inline constexpr MatKey encode(const Mat4& m) {
  MatKey k = 0;
  for (int i = 0; i < 16; ++i) k = k * 3 + m.e[i];
  return k;
}

inline constexpr Mat4 decode(MatKey k) {
  Mat4 m;
  for (int i = 15; i >= 0; --i) {
    m.e[i] = static_cast<std::uint8_t>(k % 3);
    k /= 3;
  }
  return m;
}

/// The fixed alternating form.
inline constexpr Mat4 symplectic_form() {
  Mat4 j;
  j(0, 3) = 1;
  j(1, 2) = 1;
  j(2, 1) = 2;
  j(3, 0) = 2;
  return j;
}

/// Rank over F_3 by Gaussian elimination.
inline int rank(Mat4 m) {
  int r = 0;
  for (int c = 0; c < 4 && r < 4; ++c) {
    int piv = -1;
    for (int i = r; i < 4; ++i)
      if (m(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < 4; ++j) std::swap(m(r, j), m(piv, j));
    const int inv = detail::inv3(m(r, c));
    for (int j = 0; j < 4; ++j) m(r, j) = static_cast<std::uint8_t>((m(r, j) * inv) % 3);
    for (int i = 0; i < 4; ++i) {
      if (i == r || m(i, c) == 0) continue;
      const int f = m(i, c);
      for (int j = 0; j < 4; ++j)
        m(i, j) = static_cast<std::uint8_t>((m(i, j) + 3 * 3 - f * m(r, j)) % 3);
    }
    ++r;
  }
  return r;
}

inline int det(const Mat4& m) {
  // Laplace expansion through 2x2 minors of the first two rows.
  auto minor2 = [&](int r0, int r1, int c0, int c1) {
    return m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
  };
  const int d = minor2(0, 1, 0, 1) * minor2(2, 3, 2, 3) - minor2(0, 1, 0, 2) * minor2(2, 3, 1, 3) +
                minor2(0, 1, 0, 3) * minor2(2, 3, 1, 2) + minor2(0, 1, 1, 2) * minor2(2, 3, 0, 3) -
                minor2(0, 1, 1, 3) * minor2(2, 3, 0, 2) + minor2(0, 1, 2, 3) * minor2(2, 3, 0, 1);
  return ((d % 3) + 3) % 3;
}

/// Inverse over F_3; throws on a singular matrix.
inline Mat4 inverse(const Mat4& m) {
  std::array<std::array<int, 8>, 4> a{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a[i][j] = m(i, j);
    a[i][4 + i] = 1;
  }
  for (int c = 0; c < 4; ++c) {
    int piv = -1;
    for (int i = c; i < 4; ++i)
      if (a[i][c] % 3 != 0) {
        piv = i;
        break;
      }
    if (piv < 0) throw std::domain_error("singular GF3 matrix");
    std::swap(a[c], a[piv]);
    const int inv = a[c][c] % 3;  // self-inverse
    for (int j = 0; j < 8; ++j) a[c][j] = (a[c][j] * inv) % 3;
    for (int i = 0; i < 4; ++i) {
      if (i == c || a[i][c] == 0) continue;
      const int f = a[i][c];
      for (int j = 0; j < 8; ++j) a[i][j] = ((a[i][j] - f * a[c][j]) % 3 + 3) % 3;
    }
  }
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = static_cast<std::uint8_t>(a[i][4 + j]);
  return r;
}

/// Similitude factor lambda with M^T J M = lambda J, or nullopt when M is not in GSp(4,F_3).
inline std::optional<int> similitude(const Mat4& m) {
  static constexpr Mat4 J = symplectic_form();
  const Mat4 t = transpose(m) * J * m;
  if (t == J) return 1;
  if (t == scale(J, 2)) return 2;
  return std::nullopt;
}

inline bool in_gsp(const Mat4& m) { return similitude(m).has_value(); }

/// Coefficients (c0..c4) of det(I - M t) over F_3; c0 = 1.
inline std::array<std::uint8_t, 5> charpoly_rev(const Mat4& m) {
  // c1 = -trace, c2 = sum of principal 2-minors, c3 = -(sum of principal 3-minors), c4 = det.
  int tr = 0;
  for (int i = 0; i < 4; ++i) tr += m(i, i);
  int e2 = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) e2 += m(i, i) * m(j, j) - m(i, j) * m(j, i);
  int e3 = 0;
  for (int skip = 0; skip < 4; ++skip) {
    int idx[3], n = 0;
    for (int i = 0; i < 4; ++i)
      if (i != skip) idx[n++] = i;
    auto a = [&](int r, int c) { return static_cast<int>(m(idx[r], idx[c])); };
    e3 += a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
          a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
          a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  }
  auto md = [](int x) { return static_cast<std::uint8_t>(((x % 3) + 3) % 3); };
  return {1, md(-tr), md(e2), md(-e3), md(det(m))};
}

/// dim_{F_3} ker(M - I).
inline int fixed_dim(const Mat4& m) { return 4 - rank(m - Mat4::identity()); }

/// dim_{F_3} of the common fixed space of a set of matrices.
inline int fixed_space_dim(std::span<const Mat4> ms) {
  std::vector<std::array<int, 4>> rows;
  for (const auto& m : ms) {
    const Mat4 d = m - Mat4::identity();
    for (int i = 0; i < 4; ++i) rows.push_back({d(i, 0), d(i, 1), d(i, 2), d(i, 3)});
  }
  int r = 0;
  for (int c = 0; c < 4; ++c) {
    std::size_t piv = rows.size();
    for (std::size_t i = r; i < rows.size(); ++i)
      if (rows[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const int inv = rows[r][c];
    for (int j = 0; j < 4; ++j) rows[r][j] = rows[r][j] * inv % 3;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) == r || rows[i][c] == 0) continue;
      const int f = rows[i][c];
      for (int j = 0; j < 4; ++j) rows[i][j] = ((rows[i][j] - f * rows[r][j]) % 3 + 3) % 3;
    }
    ++r;
  }
  return 4 - r;
}

/// Multiplicity of t = 1 as a root of a polynomial over F_3 (coefficients low to high).
inline int root_one_multiplicity(std::vector<int> c) {
  for (auto& x : c) x = ((x % 3) + 3) % 3;
  while (!c.empty() && c.back() == 0) c.pop_back();
  int mult = 0;
  while (c.size() > 1) {
    int s = 0;
    for (int x : c) s += x;
    if (s % 3 != 0) break;
    // synthetic division by (t - 1)
    std::vector<int> q(c.size() - 1);
    int carry = 0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 1; --i) {
      carry = (c[i] + carry) % 3;
      q[i - 1] = carry;
    }
    c = std::move(q);
    ++mult;
  }
  return mult;
}

/// Frobenius signature of a group element: (det(I - M t) mod 3, dim ker(M - I)).
struct Signature {
  std::array<std::uint8_t, 5> cpoly{1, 0, 0, 0, 0};
  std::uint8_t fixdim = 0;

  friend constexpr bool operator==(const Signature&, const Signature&) = default;
  friend constexpr auto operator<=>(const Signature&, const Signature&) = default;

  /// Packs into an integer in [0, 3^4 * 5).
  constexpr int code() const {
    return ((((cpoly[1] * 3 + cpoly[2]) * 3 + cpoly[3]) * 3 + cpoly[4]) * 5) + fixdim;
  }

  std::string to_string() const {
    std::string s = "(";
    for (int i = 0; i < 5; ++i) {
      if (i) s += ",";
      s += std::to_string(cpoly[i]);
    }
    s += ";" + std::to_string(fixdim) + ")";
    return s;
  }
};

inline Signature signature_of(const Mat4& m) {
  return Signature{charpoly_rev(m), static_cast<std::uint8_t>(fixed_dim(m))};
}

inline std::ostream& operator<<(std::ostream& os, const Mat4& m) {
  os << "[";
  for (int i = 0; i < 16; ++i) os << (i ? "," : "") << int(m.e[i]);
  return os << "]";
}

}  // namespace mod3gal

template <>
struct std::hash<mod3gal::Mat4> {
  std::size_t operator()(const mod3gal::Mat4& m) const noexcept { return mod3gal::encode(m); }
};
