/**
 * @file fq_poly.hpp
 * @brief Univariate polynomials over F_q, low degree first, no trailing zeros.
 */
#pragma once

#include <optional>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "mod3gal/finite_field.hpp"

namespace mod3gal {

using FqPoly = std::vector<Fe>;

namespace fq {

inline void trim(const GFq& F, FqPoly& a) {
  while (!a.empty() && F.is_zero(a.back())) a.pop_back();
}

inline FqPoly trim_copy(const GFq& F, FqPoly a) {
  trim(F, a);
  return a;
}

inline int deg(const FqPoly& a) { return static_cast<int>(a.size()) - 1; }

inline FqPoly constant(const GFq& F, const Fe& c) {
  if (F.is_zero(c)) return {};
  return {c};
}

inline FqPoly add(const GFq& F, const FqPoly& a, const FqPoly& b) {
  FqPoly r(std::max(a.size(), b.size()), F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
  trim(F, r);
  return r;
}

inline FqPoly sub(const GFq& F, const FqPoly& a, const FqPoly& b) {
  FqPoly r(std::max(a.size(), b.size()), F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
  trim(F, r);
  return r;
}

inline FqPoly neg(const GFq& F, const FqPoly& a) {
  FqPoly r;
  for (const auto& c : a) r.push_back(F.neg(c));
  return r;
}

inline FqPoly scale(const GFq& F, const FqPoly& a, const Fe& s) {
  FqPoly r;
  for (const auto& c : a) r.push_back(F.mul(c, s));
  trim(F, r);
  return r;
}

inline FqPoly mul(const GFq& F, const FqPoly& a, const FqPoly& b) {
  if (a.empty() || b.empty()) return {};
  FqPoly r(a.size() + b.size() - 1, F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (F.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  trim(F, r);
  return r;
}

inline std::pair<FqPoly, FqPoly> divmod(const GFq& F, FqPoly a, const FqPoly& b) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  const int db = deg(b);
  if (deg(a) < db) return {{}, a};
  FqPoly q(a.size() - db, F.zero());
  const Fe inv_lead = F.inv(b.back());
  while (deg(a) >= db) {
    const int shift = deg(a) - db;
    const Fe c = F.mul(a.back(), inv_lead);
    q[shift] = c;
    for (int j = 0; j <= db; ++j) a[shift + j] = F.sub(a[shift + j], F.mul(c, b[j]));
    trim(F, a);
  }
  trim(F, q);
  return {q, a};
}

inline FqPoly mod(const GFq& F, const FqPoly& a, const FqPoly& b) { return divmod(F, a, b).second; }

/// Exact quotient a / b; throws when the division leaves a remainder.
inline FqPoly exact_div(const GFq& F, const FqPoly& a, const FqPoly& b) {
  auto [q, r] = divmod(F, a, b);
  if (!r.empty()) throw std::logic_error("inexact polynomial division");
  return q;
}

inline FqPoly monic(const GFq& F, const FqPoly& a) {
  if (a.empty()) return a;
  return scale(F, a, F.inv(a.back()));
}

/// Monic gcd g with s*a + t*b = g.
inline std::tuple<FqPoly, FqPoly, FqPoly> xgcd(const GFq& F, FqPoly a, FqPoly b) {
  FqPoly s0{F.one()}, s1{}, t0{}, t1{F.one()};
  while (!b.empty()) {
    auto [q, r] = divmod(F, a, b);
    FqPoly s2 = sub(F, s0, mul(F, q, s1));
    FqPoly t2 = sub(F, t0, mul(F, q, t1));
    a = std::move(b);
    b = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (a.empty()) return {a, s0, t0};
  const Fe c = F.inv(a.back());
  return {scale(F, a, c), scale(F, s0, c), scale(F, t0, c)};
}

inline FqPoly gcd(const GFq& F, const FqPoly& a, const FqPoly& b) { return std::get<0>(xgcd(F, a, b)); }

inline Fe eval(const GFq& F, const FqPoly& a, const Fe& x) {
  Fe r = F.zero();
  for (std::size_t i = a.size(); i-- > 0;) r = F.add(F.mul(r, x), a[i]);
  return r;
}

inline FqPoly powmod(const GFq& F, FqPoly base, BigInt e, const FqPoly& m) {
  FqPoly r{F.one()};
  r = mod(F, r, m);
  base = mod(F, base, m);
  while (e > 0) {
    if (bit_test(e, 0)) r = mod(F, mul(F, r, base), m);
    base = mod(F, mul(F, base, base), m);
    e >>= 1;
  }
  return r;
}

/// Coefficientwise p-power (the Frobenius on coefficients).
inline FqPoly frobenius(const GFq& F, const FqPoly& a) {
  FqPoly r;
  for (const auto& c : a) r.push_back(F.frobenius(c));
  return r;
}

/// Embeds a polynomial over F_p.
inline FqPoly embed(const GFq& F, const fp::Poly& a) {
  FqPoly r;
  for (auto c : a) r.push_back(F.from_int(c));
  trim(F, r);
  return r;
}

/// Coefficients of a(alpha + z) as a polynomial in z.
inline FqPoly taylor_shift(const GFq& F, const FqPoly& a, const Fe& alpha) {
  FqPoly r;
  const FqPoly lin{alpha, F.one()};
  for (std::size_t i = a.size(); i-- > 0;) r = add(F, mul(F, r, lin), constant(F, a[i]));
  return r;
}

/// The roots in F_q of a squarefree polynomial, by equal-degree splitting.
template <class Rng>
std::vector<Fe> roots(const GFq& F, const FqPoly& a, Rng& rng) {
  std::vector<Fe> out;
  if (deg(a) < 1) return out;
  // g = gcd(a, x^q - x) collects the linear factors.
  FqPoly xq = powmod(F, FqPoly{F.zero(), F.one()}, F.q(), a);
  FqPoly g = gcd(F, a, sub(F, xq, FqPoly{F.zero(), F.one()}));
  std::vector<FqPoly> work{g};
  const BigInt half = (F.q() - 1) / 2;
  while (!work.empty()) {
    FqPoly h = std::move(work.back());
    work.pop_back();
    if (deg(h) < 1) continue;
    if (deg(h) == 1) {
      out.push_back(F.neg(monic(F, h)[0]));
      continue;
    }
    for (;;) {
      const FqPoly lin{F.random(rng), F.one()};
      FqPoly w = sub(F, powmod(F, lin, half, h), FqPoly{F.one()});
      FqPoly d = gcd(F, h, w);
      if (deg(d) >= 1 && deg(d) < deg(h)) {
        work.push_back(exact_div(F, h, d));
        work.push_back(d);
        break;
      }
    }
  }
  return out;
}

}  // namespace fq
}  // namespace mod3gal
