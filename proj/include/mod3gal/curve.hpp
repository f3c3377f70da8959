/**
 * @file curve.hpp
 * @brief Genus-2 curves y^2 + h(x) y = f(x) over Q, point counts and Euler factors.
 *
 * The curve is handled through the model y^2 = F(x) with F = 4f + h^2, which
 * is isomorphic away from 2. Coefficient lists are low degree first.
 */
#pragma once

#include <array>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mod3gal/finite_field.hpp"
#include "mod3gal/gf3_matrix.hpp"

namespace mod3gal {

using ZPoly = std::vector<BigInt>;

namespace detail {

inline void trim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
inline BigInt bareiss_det(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace detail

/// Res(a, b) as the Sylvester determinant.
inline BigInt resultant(const ZPoly& a, const ZPoly& b) {
  const int m = static_cast<int>(a.size()) - 1, n = static_cast<int>(b.size()) - 1;
  if (m < 0 || n < 0) return 0;
  const int sz = m + n;
  if (sz == 0) return 1;
  std::vector<std::vector<BigInt>> s(sz, std::vector<BigInt>(sz, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s[i][i + j] = a[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s[n + i][i + j] = b[n - j];
  return detail::bareiss_det(std::move(s));
}

inline BigInt discriminant(const ZPoly& a) {
  const int n = static_cast<int>(a.size()) - 1;
  ZPoly d;
  for (int i = 1; i <= n; ++i) d.push_back(a[i] * i);
  const BigInt r = resultant(a, d);
  const BigInt s = (n * (n - 1) / 2) % 2 ? -1 : 1;
  return s * r / a.back();
}

namespace detail {

inline std::string poly_string(const ZPoly& p) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = p.size(); k-- > 0;) {
    if (p[k] == 0) continue;
    os << (first ? "" : (p[k] < 0 ? " - " : " + "));
    const BigInt a = first ? p[k] : abs(p[k]);
    first = false;
    if (a == -1 && k > 0) os << "-";
    else if (a != 1 || k == 0) os << a;
    if (k >= 1) os << "x";
    if (k >= 2) os << "^" << k;
  }
  return first ? "0" : os.str();
}

}  // namespace detail

struct Genus2Curve {
  ZPoly f, h, F;  // F = 4f + h^2
  BigInt disc;    // disc(F)

  int degree() const { return static_cast<int>(F.size()) - 1; }
  const BigInt& lc() const { return F.back(); }

  /// p is excluded when p is 2 or 3 or divides lc(F) * disc(F).
  bool is_bad(std::uint64_t p) const {
    if (p == 2 || p == 3) return true;
    return (lc() * disc) % p == 0;
  }

  /// F mod p, low degree first.
  fp::Poly reduce(std::uint32_t p) const {
    fp::Poly r;
    for (const auto& c : F) r.push_back(mod_p(c, p));
    fp::trim(r);
    return r;
  }

  std::string to_string() const {
    std::string s = "y^2";
    if (!h.empty()) s += " + (" + detail::poly_string(h) + ")*y";
    return s + " = " + detail::poly_string(f);
  }
};

/// Builds y^2 + h y = f as y^2 = 4f + h^2 and checks it is a genus-2 curve.
inline Genus2Curve curve_validate(ZPoly f, ZPoly h = {}) {
  detail::trim(f);
  detail::trim(h);
  if (h.size() > 4) throw std::invalid_argument("h must have degree <= 3");
  Genus2Curve c;
  c.f = f;
  c.h = h;
  ZPoly F(std::max<std::size_t>(f.size(), h.empty() ? 0 : 2 * h.size() - 1), 0);
  for (std::size_t i = 0; i < f.size(); ++i) F[i] += 4 * f[i];
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) F[i + j] += h[i] * h[j];
  detail::trim(F);
  c.F = F;
  const int d = c.degree();
  if (d != 5 && d != 6) throw std::invalid_argument("4f + h^2 must have degree 5 or 6, got " + std::to_string(d));
  c.disc = discriminant(F);
  if (c.disc == 0) throw std::invalid_argument("singular model: discriminant of 4f + h^2 is zero");
  return c;
}

/// Parses "a0,a1,..." into integer coefficients.
inline ZPoly parse_coefficients(const std::string& s) {
  ZPoly out;
  std::string tok;
  std::istringstream is(s);
  while (std::getline(is, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t[]");
    const auto e = tok.find_last_not_of(" \t[]");
    if (b == std::string::npos) throw std::invalid_argument("empty coefficient in '" + s + "'");
    tok = tok.substr(b, e - b + 1);
    std::size_t i = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
    if (i == tok.size()) throw std::invalid_argument("bad coefficient '" + tok + "'");
    for (; i < tok.size(); ++i)
      if (tok[i] < '0' || tok[i] > '9') throw std::invalid_argument("bad coefficient '" + tok + "'");
    out.emplace_back(tok[0] == '+' ? tok.substr(1) : tok);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Point counting

/// #C(F_q) by a loop over all x in F_q; intended for small fields.
inline BigInt count_points(const Genus2Curve& c, const GFq& F) {
  if (c.is_bad(F.p())) throw std::invalid_argument("bad characteristic " + std::to_string(F.p()));
  std::vector<Fe> coeffs;
  for (const auto& a : c.F) coeffs.push_back(F.from_big(a));
  const std::uint64_t q = F.q().convert_to<std::uint64_t>();
  BigInt n = 0;
  Fe x = F.zero();
  for (std::uint64_t i = 0; i < q; ++i) {
    std::uint64_t v = i;
    for (int j = 0; j < F.k(); ++j) {
      x[j] = static_cast<std::uint32_t>(v % F.p());
      v /= F.p();
    }
    Fe y = F.zero();
    for (std::size_t j = coeffs.size(); j-- > 0;) y = F.add(F.mul(y, x), coeffs[j]);
    n += F.is_zero(y) ? 1 : (F.is_square(y) ? 2 : 0);
  }
  if (c.degree() == 5) return n + 1;
  return n + 1 + (F.is_square(F.from_big(c.lc())) ? 1 : -1);
}

namespace detail {

inline std::vector<std::int8_t> chi_table(std::uint32_t p) {
  std::vector<std::int8_t> chi(p, -1);
  chi[0] = 0;
  for (std::uint64_t x = 1; x < p; ++x) chi[x * x % p] = 1;
  return chi;
}

}  // namespace detail

/// (#C(F_p), #C(F_{p^2})) for a good odd prime p, using F_{p^2} = F_p(sqrt d)
/// and the fact that z in F_{p^2} is a square iff its norm is a square in F_p.
inline std::pair<std::uint64_t, std::uint64_t> count_points_p_p2(const Genus2Curve& c, std::uint32_t p) {
  if (c.is_bad(p)) throw std::invalid_argument("bad prime " + std::to_string(p));
  const fp::Poly Fp = c.reduce(p);
  const auto chi = detail::chi_table(p);
  const int n = static_cast<int>(Fp.size()) - 1;
  const std::uint64_t P = p;

  // Over F_p every nonzero F(x) becomes a square in F_{p^2}.
  std::int64_t s1 = 0, nonzero = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    std::uint64_t y = 0;
    for (int j = n; j >= 0; --j) y = (y * x + Fp[j]) % P;
    s1 += chi[y];
    nonzero += y != 0;
  }
  std::uint64_t d = 2;
  while (chi[d % p] != -1) ++d;

  // x = a + b s with s^2 = d; b and -b give conjugate values of equal norm.
  std::int64_t s2 = nonzero;
  for (std::uint64_t b = 1; b <= (P - 1) / 2; ++b) {
    for (std::uint64_t a = 0; a < P; ++a) {
      std::uint64_t A = 0, B = 0;
      for (int j = n; j >= 0; --j) {
        const std::uint64_t nA = (A * a + (B * b % P) * d + Fp[j]) % P;
        const std::uint64_t nB = (A * b + B * a) % P;
        A = nA;
        B = nB;
      }
      const std::uint64_t norm = (A * A + P * P - (B * B % P) * d % P) % P;
      s2 += 2 * chi[norm];
    }
  }
  const std::int64_t inf1 = n == 5 ? 1 : 1 + chi[Fp.back()];
  const std::int64_t inf2 = n == 5 ? 1 : 2;
  const std::uint64_t N1 = static_cast<std::uint64_t>(std::int64_t(p) + s1 + inf1);
  const std::uint64_t N2 = static_cast<std::uint64_t>(std::int64_t(P * P) + s2 + inf2);
  return {N1, N2};
}

/// L_p(t) = 1 - e1 t + e2 t^2 - p e1 t^3 + p^2 t^4.
struct EulerFactor {
  std::uint32_t p = 0;
  std::int64_t e1 = 0, e2 = 0;

  std::array<BigInt, 5> coefficients() const {
    const BigInt P = p;
    return {1, -BigInt(e1), BigInt(e2), -P * e1, P * P};
  }
  /// L_p(1) = #J(F_p).
  BigInt value_at_one() const {
    BigInt s = 0;
    for (const auto& c : coefficients()) s += c;
    return s;
  }
  /// det(I - M t) mod 3 for the Frobenius matrix M, as F_3 coefficients.
  std::array<std::uint8_t, 5> mod3() const {
    std::array<std::uint8_t, 5> r{};
    const auto c = coefficients();
    for (int i = 0; i < 5; ++i) r[i] = static_cast<std::uint8_t>(mod_p(c[i], 3));
    return r;
  }
  std::string to_string() const {
    std::ostringstream os;
    const auto c = coefficients();
    os << "1";
    for (int i = 1; i < 5; ++i)
      if (c[i] != 0) os << (c[i] < 0 ? " - " : " + ") << abs(c[i]) << "t" << (i > 1 ? "^" + std::to_string(i) : "");
    return os.str();
  }
  friend bool operator==(const EulerFactor&, const EulerFactor&) = default;
};

inline EulerFactor euler_factor_from_counts(std::uint32_t p, std::uint64_t n1, std::uint64_t n2) {
  const std::int64_t P = p;
  const std::int64_t e1 = P + 1 - static_cast<std::int64_t>(n1);
  const std::int64_t s2 = P * P + 1 - static_cast<std::int64_t>(n2);
  if ((e1 * e1 - s2) % 2 != 0) throw std::logic_error("non-integral e2: point counts are inconsistent");
  return {p, e1, (e1 * e1 - s2) / 2};
}

inline EulerFactor euler_factor(const Genus2Curve& c, std::uint32_t p) {
  const auto [n1, n2] = count_points_p_p2(c, p);
  return euler_factor_from_counts(p, n1, n2);
}

// ---------------------------------------------------------------------------
// Frobenius characteristic polynomial t^4 - e1 t^3 + e2 t^2 - p e1 t + p^2

using Mat4Z = std::array<std::array<BigInt, 4>, 4>;

inline Mat4Z companion(const EulerFactor& L) {
  const auto c = L.coefficients();  // reversed characteristic polynomial
  Mat4Z a{};
  for (int i = 1; i < 4; ++i) a[i][i - 1] = 1;
  // t^4 + c1 t^3 + c2 t^2 + c3 t + c4: last column -c4, -c3, -c2, -c1
  for (int i = 0; i < 4; ++i) a[i][3] = -c[4 - i];
  return a;
}

inline Mat4Z zmat_mul(const Mat4Z& a, const Mat4Z& b) {
  Mat4Z r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      BigInt s = 0;
      for (int k = 0; k < 4; ++k) s += a[i][k] * b[k][j];
      r[i][j] = s;
    }
  return r;
}

inline Mat4Z zmat_pow(Mat4Z a, std::uint64_t k) {
  Mat4Z r{};
  for (int i = 0; i < 4; ++i) r[i][i] = 1;
  while (k) {
    if (k & 1) r = zmat_mul(r, a);
    a = zmat_mul(a, a);
    k >>= 1;
  }
  return r;
}

/// #J(F_{p^k}) = det(I - A^k).
inline BigInt group_order_ext(const EulerFactor& L, std::uint64_t k) {
  Mat4Z m = zmat_pow(companion(L), k);
  std::vector<std::vector<BigInt>> d(4, std::vector<BigInt>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d[i][j] = (i == j ? 1 : 0) - m[i][j];
  return detail::bareiss_det(std::move(d));
}

/// The companion matrix of Frobenius raised to k, reduced mod 3.
inline Mat4 frobenius_power_mod3(const EulerFactor& L, std::uint64_t k) {
  const Mat4Z m = zmat_pow(companion(L), k);
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = static_cast<std::uint8_t>(mod_p(m[i][j], 3));
  return r;
}

/// Upper bound for dim J[3](F_{p^k}): multiplicity of t = 1 in det(I - A^k t) mod 3.
inline int three_rank_bound(const EulerFactor& L, std::uint64_t k) {
  const auto c = charpoly_rev(frobenius_power_mod3(L, k));
  return root_one_multiplicity({c[0], c[1], c[2], c[3], c[4]});
}

}  // namespace mod3gal
