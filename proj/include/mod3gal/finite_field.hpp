/**
 * @file finite_field.hpp
 * @brief Prime fields and extension fields F_{p^k} = F_p[x]/(m(x)).
 *
 * Elements are coefficient vectors of length k, low degree first. The
 * modulus is a seeded random monic irreducible polynomial, found by Rabin's
 * irreducibility test.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mod3gal {

using BigInt = boost::multiprecision::cpp_int;

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull})
    if (n % d == 0) return n == d;
  for (std::uint64_t d = 17; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint32_t> primes_up_to(std::uint32_t n) {
  std::vector<std::uint8_t> comp(n + 1, 0);
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = std::uint64_t(i) * i; j <= n; j += i) comp[j] = 1;
  }
  return out;
}

inline std::uint32_t powmod_u32(std::uint64_t b, std::uint64_t e, std::uint32_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

/// Legendre symbol (a|p) in {-1,0,1} for an odd prime p.
inline int legendre(std::uint64_t a, std::uint32_t p) {
  a %= p;
  if (a == 0) return 0;
  return powmod_u32(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

inline std::uint32_t mod_p(const BigInt& x, std::uint32_t p) {
  BigInt r = x % p;
  if (r < 0) r += p;
  return r.convert_to<std::uint32_t>();
}

/// Dense polynomials over F_p, low degree first, no trailing zeros.
namespace fp {

using Poly = std::vector<std::uint32_t>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint64_t> t(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) t[i + j] += std::uint64_t(a[i]) * b[j] % p;
  }
  Poly r(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = static_cast<std::uint32_t>(t[i] % p);
  trim(r);
  return r;
}

inline Poly sub(Poly a, const Poly& b, std::uint32_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

/// Remainder of a modulo b (b nonzero).
inline Poly mod(Poly a, const Poly& b, std::uint32_t p) {
  const std::size_t db = b.size() - 1;
  const std::uint32_t inv_lead = powmod_u32(b.back(), p - 2, p);
  while (a.size() > db && !a.empty()) {
    const std::size_t shift = a.size() - 1 - db;
    const std::uint64_t c = std::uint64_t(a.back()) * inv_lead % p;
    for (std::size_t j = 0; j <= db; ++j) a[shift + j] = static_cast<std::uint32_t>((a[shift + j] + p - c * b[j] % p) % p);
    trim(a);
  }
  return a;
}

inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b, std::uint32_t p) {
  const std::size_t db = b.size() - 1;
  if (a.size() <= db) return {{}, a};
  Poly q(a.size() - db, 0);
  const std::uint32_t inv_lead = powmod_u32(b.back(), p - 2, p);
  while (a.size() > db && !a.empty()) {
    const std::size_t shift = a.size() - 1 - db;
    const std::uint64_t c = std::uint64_t(a.back()) * inv_lead % p;
    q[shift] = static_cast<std::uint32_t>(c);
    for (std::size_t j = 0; j <= db; ++j) a[shift + j] = static_cast<std::uint32_t>((a[shift + j] + p - c * b[j] % p) % p);
    trim(a);
  }
  trim(q);
  return {q, a};
}

inline Poly monic(Poly a, std::uint32_t p) {
  if (a.empty()) return a;
  const std::uint64_t inv = powmod_u32(a.back(), p - 2, p);
  for (auto& c : a) c = static_cast<std::uint32_t>(c * inv % p);
  return a;
}

inline Poly gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}

/// base^e mod m.
inline Poly powmod(Poly base, std::uint64_t e, const Poly& m, std::uint32_t p) {
  Poly r{1};
  base = mod(base, m, p);
  while (e) {
    if (e & 1) r = mod(mul(r, base, p), m, p);
    base = mod(mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

/// Rabin's test: m monic of degree k is irreducible iff x^{p^k} = x mod m and
/// gcd(x^{p^{k/r}} - x, m) = 1 for every prime r dividing k.
inline bool is_irreducible(const Poly& m, std::uint32_t p) {
  const int k = static_cast<int>(m.size()) - 1;
  if (k <= 0) return false;
  if (k == 1) return true;
  std::vector<Poly> xpow(k + 1);  // xpow[i] = x^{p^i} mod m
  xpow[0] = mod(Poly{0, 1}, m, p);
  for (int i = 1; i <= k; ++i) xpow[i] = powmod(xpow[i - 1], p, m, p);
  if (xpow[k] != xpow[0]) return false;
  for (int r = 2; r <= k; ++r) {
    if (k % r != 0 || !is_prime_u64(r)) continue;
    if (gcd(sub(xpow[k / r], Poly{0, 1}, p), m, p).size() != 1) return false;
  }
  return true;
}

}  // namespace fp

/// Description of F_{p^k}: p, k and the monic irreducible modulus (low degree first).
struct FieldDesc {
  std::uint32_t p = 0;
  int k = 1;
  fp::Poly modulus;
};

/// Arithmetic in F_{p^k}. Immutable after construction.
class GFq {
 public:
  using Fe = std::vector<std::uint32_t>;  // length k

  GFq() = default;

  /// Field with a deterministic (p, k, seed)-dependent modulus. For k = 1 the
  /// modulus is x.
  static GFq make(std::uint32_t p, int k, std::uint64_t seed = 0) {
    if (!is_prime_u64(p) || p >= (1u << 31)) throw std::invalid_argument("field characteristic must be a prime < 2^31");
    if (k < 1) throw std::invalid_argument("extension degree must be >= 1");
    FieldDesc d{p, k, {}};
    if (k == 1) {
      d.modulus = {0, 1};
    } else {
      std::mt19937_64 rng(seed ^ (std::uint64_t(p) << 20) ^ std::uint64_t(k));
      for (;;) {
        fp::Poly m(k + 1);
        for (int i = 0; i < k; ++i) m[i] = static_cast<std::uint32_t>(rng() % p);
        m[k] = 1;
        if (m[0] != 0 && fp::is_irreducible(m, p)) {
          d.modulus = std::move(m);
          break;
        }
      }
    }
    return GFq(std::move(d));
  }

  explicit GFq(FieldDesc d) : d_(std::move(d)) {
    if (static_cast<int>(d_.modulus.size()) != d_.k + 1 || d_.modulus.back() != 1)
      throw std::invalid_argument("modulus must be monic of degree k");
    q_ = 1;
    for (int i = 0; i < d_.k; ++i) q_ *= d_.p;
    // Each coefficient receives at most 2k products below p^2 before reduction.
    const long double bound = 2.0L * d_.k * static_cast<long double>(d_.p) * d_.p;
    lazy_ = bound < 1.8e19L;
    modulus64_.assign(d_.modulus.begin(), d_.modulus.end());
    // Frobenius: rows x^{i p} mod m.
    const fp::Poly xp = fp::powmod(fp::Poly{0, 1}, d_.p, d_.modulus, d_.p);
    fp::Poly cur{1};
    frob_.resize(d_.k);
    for (int i = 0; i < d_.k; ++i) {
      frob_[i] = pad(cur);
      cur = fp::mod(fp::mul(cur, xp, d_.p), d_.modulus, d_.p);
    }
  }

  const FieldDesc& desc() const { return d_; }
  std::uint32_t p() const { return d_.p; }
  int k() const { return d_.k; }
  const BigInt& q() const { return q_; }

  Fe zero() const { return Fe(d_.k, 0); }
  Fe one() const { return from_int(1); }
  Fe from_int(std::int64_t v) const {
    Fe r = zero();
    const std::int64_t p = d_.p;
    r[0] = static_cast<std::uint32_t>(((v % p) + p) % p);
    return r;
  }
  Fe from_big(const BigInt& v) const {
    Fe r = zero();
    r[0] = mod_p(v, d_.p);
    return r;
  }
  /// The class of x (the generator of the extension); requires k >= 2.
  Fe gen() const {
    Fe r = zero();
    if (d_.k >= 2) r[1] = 1;
    else r[0] = static_cast<std::uint32_t>((d_.p - d_.modulus[0]) % d_.p);
    return r;
  }
  bool is_zero(const Fe& a) const {
    return std::all_of(a.begin(), a.end(), [](std::uint32_t c) { return c == 0; });
  }
  bool is_one(const Fe& a) const { return a == one(); }

  Fe add(const Fe& a, const Fe& b) const {
    Fe r(d_.k);
    for (int i = 0; i < d_.k; ++i) {
      const std::uint32_t s = a[i] + b[i];
      r[i] = s >= d_.p ? s - d_.p : s;
    }
    return r;
  }
  Fe sub(const Fe& a, const Fe& b) const {
    Fe r(d_.k);
    for (int i = 0; i < d_.k; ++i) r[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + d_.p - b[i];
    return r;
  }
  Fe neg(const Fe& a) const {
    Fe r(d_.k);
    for (int i = 0; i < d_.k; ++i) r[i] = a[i] ? d_.p - a[i] : 0;
    return r;
  }
  Fe scale(const Fe& a, std::uint32_t s) const {
    Fe r(d_.k);
    for (int i = 0; i < d_.k; ++i) r[i] = static_cast<std::uint32_t>(std::uint64_t(a[i]) * s % d_.p);
    return r;
  }

  Fe mul(const Fe& a, const Fe& b) const {
    const int k = d_.k;
    const std::uint64_t p = d_.p;
    if (k == 1) return Fe{static_cast<std::uint32_t>(std::uint64_t(a[0]) * b[0] % p)};
    // Products are summed unreduced while 2k of them fit in 64 bits.
    if (!lazy_) return mul_reduced(a, b);
    thread_local std::vector<std::uint64_t> t;
    t.assign(2 * k - 1, 0);
    for (int i = 0; i < k; ++i) {
      const std::uint64_t ai = a[i];
      if (!ai) continue;
      std::uint64_t* ti = t.data() + i;
      for (int j = 0; j < k; ++j) ti[j] += ai * b[j];
    }
    for (int i = 2 * k - 2; i >= k; --i) {
      const std::uint64_t c = t[i] % p;
      if (!c) continue;
      std::uint64_t* ti = t.data() + i - k;
      const std::uint64_t nc = p - c;
      for (int j = 0; j < k; ++j) ti[j] += nc * modulus64_[j];
    }
    Fe r(k);
    for (int i = 0; i < k; ++i) r[i] = static_cast<std::uint32_t>(t[i] % p);
    return r;
  }
  Fe sqr(const Fe& a) const { return mul(a, a); }

  Fe pow(Fe b, BigInt e) const {
    if (e < 0) {
      b = inv(b);
      e = -e;
    }
    Fe r = one();
    const std::size_t bits = e == 0 ? 0 : msb(e) + 1;
    for (std::size_t i = bits; i-- > 0;) {
      r = sqr(r);
      if (bit_test(e, static_cast<unsigned>(i))) r = mul(r, b);
    }
    return r;
  }

  /// Multiplicative inverse; throws std::domain_error for 0.
  Fe inv(const Fe& a) const {
    if (is_zero(a)) throw std::domain_error("inverse of zero in finite field");
    const std::uint32_t p = d_.p;
    if (d_.k == 1) return Fe{powmod_u32(a[0], p - 2, p)};
    // Extended Euclid: s*a + t*m = g.
    fp::Poly r0 = d_.modulus, r1 = a;
    fp::trim(r1);
    fp::Poly s0{}, s1{1};
    while (r1.size() > 1) {
      auto [q, r] = fp::divmod(r0, r1, p);
      fp::Poly s = fp::sub(s0, fp::mul(q, s1, p), p);
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s);
    }
    const std::uint64_t c = powmod_u32(r1[0], p - 2, p);
    for (auto& x : s1) x = static_cast<std::uint32_t>(x * c % p);
    return pad(s1);
  }
  Fe div(const Fe& a, const Fe& b) const { return mul(a, inv(b)); }

  /// a^p.
  Fe frobenius(const Fe& a) const {
    if (d_.k == 1) return a;
    std::vector<std::uint64_t> t(d_.k, 0);
    for (int i = 0; i < d_.k; ++i) {
      if (!a[i]) continue;
      for (int j = 0; j < d_.k; ++j) t[j] += std::uint64_t(a[i]) * frob_[i][j] % d_.p;
    }
    Fe r(d_.k);
    for (int j = 0; j < d_.k; ++j) r[j] = static_cast<std::uint32_t>(t[j] % d_.p);
    return r;
  }

  /// N_{F_q/F_p}(a) as an integer in [0, p).
  std::uint32_t norm(const Fe& a) const {
    Fe r = a, c = a;
    for (int i = 1; i < d_.k; ++i) {
      c = frobenius(c);
      r = mul(r, c);
    }
    return r[0];
  }

  /// a is a square iff its norm is a square in F_p (q odd).
  bool is_square(const Fe& a) const {
    if (is_zero(a)) return true;
    return legendre(norm(a), d_.p) == 1;
  }

  /// Square root by Tonelli-Shanks, or nullopt for a nonsquare.
  std::optional<Fe> sqrt(const Fe& a) const {
    if (is_zero(a)) return a;
    if (!is_square(a)) return std::nullopt;
    BigInt t = q_ - 1;
    unsigned s = 0;
    while ((t & 1) == 0) {
      t >>= 1;
      ++s;
    }
    Fe z = nonresidue();
    Fe c = pow(z, t);
    Fe x = pow(a, (t + 1) / 2);
    Fe b = pow(a, t);
    unsigned m = s;
    while (!is_one(b)) {
      unsigned i = 0;
      Fe bb = b;
      while (!is_one(bb)) {
        bb = sqr(bb);
        ++i;
      }
      Fe w = c;
      for (unsigned j = 0; j + 1 < m - i; ++j) w = sqr(w);
      x = mul(x, w);
      c = sqr(w);
      b = mul(b, c);
      m = i;
    }
    return x;
  }

  template <class Rng>
  Fe random(Rng& rng) const {
    Fe r(d_.k);
    for (auto& c : r) c = static_cast<std::uint32_t>(rng() % d_.p);
    return r;
  }

  std::string to_string(const Fe& a) const {
    std::string s = "[";
    for (int i = 0; i < d_.k; ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + "]";
  }

 private:
  Fe pad(fp::Poly v) const {
    v.resize(d_.k, 0);
    return v;
  }

  /// Deterministic nonresidue: the first nonsquare in a fixed enumeration.
  Fe nonresidue() const {
    Fe z = zero();
    for (std::uint64_t n = 1;; ++n) {
      std::uint64_t v = n;
      for (int i = 0; i < d_.k; ++i) {
        z[i] = static_cast<std::uint32_t>(v % d_.p);
        v /= d_.p;
      }
      if (!is_square(z)) return z;
    }
  }

  Fe mul_reduced(const Fe& a, const Fe& b) const {
    const int k = d_.k;
    const std::uint64_t p = d_.p;
    std::vector<std::uint64_t> t(2 * k - 1, 0);
    for (int i = 0; i < k; ++i) {
      if (!a[i]) continue;
      for (int j = 0; j < k; ++j) t[i + j] = (t[i + j] + std::uint64_t(a[i]) * b[j]) % p;
    }
    for (int i = 2 * k - 2; i >= k; --i) {
      const std::uint64_t c = t[i] % p;
      if (!c) continue;
      for (int j = 0; j < k; ++j) t[i - k + j] = (t[i - k + j] + (p - c) * d_.modulus[j]) % p;
    }
    Fe r(k);
    for (int i = 0; i < k; ++i) r[i] = static_cast<std::uint32_t>(t[i] % p);
    return r;
  }

  FieldDesc d_;
  BigInt q_;
  bool lazy_ = false;
  std::vector<std::uint64_t> modulus64_;
  std::vector<Fe> frob_;
};

using Fe = GFq::Fe;

}  // namespace mod3gal
