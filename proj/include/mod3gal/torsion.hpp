/**
 * @file torsion.hpp
 * @brief 3-torsion of genus-2 Jacobians over finite fields: 3-Sylow bases,
 * three-ranks, the Weil pairing and the Frobenius matrix in GSp(4,F_3).
 *
 * Arithmetic runs on a degree-5 model y^2 = G(X) over F_{p^K}. For a sextic F
 * with a root alpha in F_{p^K}, the substitution x = alpha + 1/X, y = Y/X^3
 * gives G(X) = sum_j c_j X^(6-j) with c_j the Taylor coefficients of F at
 * alpha. The p-power Frobenius of C then acts on the model through
 * X -> X^p / (1 + beta X^p), Y -> Y^p / (1 + beta X^p)^3, beta = alpha^p - alpha.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "mod3gal/curve.hpp"
#include "mod3gal/group_table.hpp"
#include "mod3gal/jacobian.hpp"

namespace mod3gal {

/// Degrees of the irreducible factors of a squarefree f over F_p, ascending and distinct.
inline std::vector<int> factor_degrees(fp::Poly f, std::uint32_t p) {
  std::vector<int> out;
  f = fp::monic(f, p);
  const fp::Poly x{0, 1};
  fp::Poly h = x;
  for (int i = 1; 2 * i <= static_cast<int>(f.size()) - 1; ++i) {
    h = fp::powmod(h, p, f, p);
    fp::Poly g = fp::gcd(f, fp::sub(h, x, p), p);
    if (g.size() > 1) {
      out.push_back(i);
      f = fp::divmod(f, g, p).first;
      h = fp::mod(h, f, p);
    }
  }
  if (f.size() > 1) out.push_back(static_cast<int>(f.size()) - 1);
  return out;
}

/// Degree-5 model of C over F_{p^K} together with the action of the p-power Frobenius.
class CurveModel {
 public:
  CurveModel(Jacobian jac, Fe beta, bool twisted) : jac_(std::move(jac)), beta_(std::move(beta)), twisted_(twisted) {}

  const Jacobian& jacobian() const { return jac_; }
  const GFq& field() const { return jac_.field(); }
  bool twisted() const { return twisted_; }

  MumfordDivisor frobenius(const MumfordDivisor& d) const {
    const GFq& F = field();
    FqPoly u = fq::frobenius(F, d.u), v = fq::frobenius(F, d.v);
    if (!twisted_) return {std::move(u), std::move(v)};
    const int n = fq::deg(u);
    const FqPoly w{F.one(), F.neg(beta_)};  // 1 - beta t
    std::vector<FqPoly> wpow{FqPoly{F.one()}};
    for (int i = 0; i < 3; ++i) wpow.push_back(fq::mul(F, wpow.back(), w));
    FqPoly un;
    for (int j = 0; j <= n; ++j) {
      FqPoly term = fq::mul(F, wpow[n - j], fq::constant(F, u[j]));
      term.insert(term.begin(), j, F.zero());
      un = fq::add(F, un, term);
    }
    un = fq::monic(F, un);
    if (fq::deg(un) == 0) return jac_.identity();
    const Fe c0 = v.size() > 0 ? v[0] : F.zero(), c1 = v.size() > 1 ? v[1] : F.zero();
    const FqPoly lin = fq::add(F, FqPoly{F.zero(), c1}, fq::scale(F, w, c0));
    MumfordDivisor out{un, fq::mod(F, fq::mul(F, lin, wpow[2]), un)};
    if (!jac_.is_valid(out)) throw std::logic_error("twisted Frobenius left the Jacobian");
    return out;
  }

  MumfordDivisor frobenius_power(MumfordDivisor d, int k) const {
    for (int i = 0; i < k; ++i) d = frobenius(d);
    return d;
  }

 private:
  Jacobian jac_;
  Fe beta_;
  bool twisted_;
};

/// Smallest multiple of k over which the model exists: k for quintics, else lcm(k, m)
/// minimized over the degrees m of irreducible factors of F mod p.
inline int model_degree(const Genus2Curve& c, std::uint32_t p, int k) {
  if (c.degree() == 5) return k;
  int best = 0;
  for (int m : factor_degrees(c.reduce(p), p)) {
    const int K = std::lcm(k, m);
    if (best == 0 || K < best) best = K;
  }
  return best;
}

inline CurveModel make_model(const Genus2Curve& c, std::uint32_t p, int K, std::uint64_t seed) {
  GFq F = GFq::make(p, K);
  const FqPoly Fx = fq::embed(F, c.reduce(p));
  if (c.degree() == 5) return CurveModel(Jacobian(F, Fx), F.zero(), false);
  std::mt19937_64 rng(seed);
  std::vector<Fe> roots = fq::roots(F, Fx, rng);
  if (roots.empty()) throw std::invalid_argument("sextic has no root over F_{p^" + std::to_string(K) + "}");
  std::sort(roots.begin(), roots.end());
  const Fe& alpha = roots.front();
  const FqPoly t = fq::taylor_shift(F, Fx, alpha);
  FqPoly G(6, F.zero());
  for (int i = 0; i < 6; ++i) G[i] = 6 - i < static_cast<int>(t.size()) ? t[6 - i] : F.zero();
  Fe beta = F.sub(F.frobenius(alpha), alpha);
  const bool twisted = !F.is_zero(beta);
  return CurveModel(Jacobian(F, G), std::move(beta), twisted);
}

// ---------------------------------------------------------------------------
// 3-Sylow subgroup

/// Span of up to four independent 3-torsion classes, indexed by Mumford key.
class TorsionSpan {
 public:
  TorsionSpan() = default;
  TorsionSpan(const Jacobian& J, std::vector<MumfordDivisor> basis) : basis_(std::move(basis)) {
    const int s = static_cast<int>(basis_.size());
    int total = 1;
    for (int i = 0; i < s; ++i) total *= 3;
    elements_.reserve(total);
    std::vector<std::uint8_t> c(s, 0);
    for (int idx = 0; idx < total; ++idx) {
      int r = idx;
      MumfordDivisor d = J.identity();
      for (int i = 0; i < s; ++i) {
        c[i] = static_cast<std::uint8_t>(r % 3);
        r /= 3;
        if (c[i]) d = J.add(d, c[i] == 1 ? basis_[i] : J.negate(basis_[i]));
      }
      if (!index_.emplace(J.key(d), c).second) throw std::logic_error("torsion basis is dependent");
      elements_.push_back(std::move(d));
    }
  }

  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<MumfordDivisor>& basis() const { return basis_; }
  std::optional<std::vector<std::uint8_t>> coordinates(const Jacobian& J, const MumfordDivisor& d) const {
    auto it = index_.find(J.key(d));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<MumfordDivisor> basis_;
  std::vector<MumfordDivisor> elements_;
  std::map<Jacobian::Key, std::vector<std::uint8_t>> index_;
};

/// Generators x_i of orders 3^a_i spanning a direct sum inside the 3-Sylow subgroup;
/// their layers 3^(a_i - 1) x_i form a basis of its 3-torsion.
struct SylowBasis {
  std::vector<MumfordDivisor> gens;
  std::vector<int> exps;
  std::vector<MumfordDivisor> tops;
  int full_exponent = 0;  // v_3(#J)
  std::size_t samples = 0;

  int rank() const { return static_cast<int>(gens.size()); }
  int log3_order() const { return std::accumulate(exps.begin(), exps.end(), 0); }
  bool complete() const { return log3_order() == full_exponent; }
};

namespace detail {

inline MumfordDivisor times_pow3(const Jacobian& J, MumfordDivisor d, int e) {
  for (int i = 0; i < e; ++i) d = J.add(J.dbl(d), d);
  return d;
}

/// Inserts x (of 3-power order) into the basis, keeping the layers independent.
/// Returns true when the generated subgroup grew.
inline bool sylow_insert(const Jacobian& J, SylowBasis& S, TorsionSpan& span, MumfordDivisor x) {
  const int before = S.log3_order();
  for (;;) {
    if (x.is_identity()) break;
    int a = 0;
    MumfordDivisor top = x, y = x;
    while (!y.is_identity()) {
      top = y;
      y = J.add(J.dbl(y), y);
      ++a;
    }
    const auto c = span.coordinates(J, top);
    if (!c) {
      S.gens.push_back(x);
      S.exps.push_back(a);
      S.tops.push_back(top);
      span = TorsionSpan(J, S.tops);
      break;
    }
    int swap = -1;
    for (int i = 0; i < S.rank(); ++i) {
      if ((*c)[i] == 0) continue;
      if (S.exps[i] >= a) {
        const MumfordDivisor m = times_pow3(J, S.gens[i], S.exps[i] - a);
        x = J.add(x, (*c)[i] == 1 ? J.negate(m) : m);
      } else if (swap < 0 || S.exps[i] > S.exps[swap]) {
        swap = i;
      }
    }
    if (swap < 0) continue;  // x now has smaller order
    // x keeps order 3^a and its layer involves tops[swap]: exchange and reinsert the old generator.
    MumfordDivisor t = x;
    for (int i = 0; i + 1 < a; ++i) t = J.add(J.dbl(t), t);
    std::swap(S.gens[swap], x);
    S.exps[swap] = a;
    S.tops[swap] = t;
    span = TorsionSpan(J, S.tops);
  }
  return S.log3_order() > before;
}

}  // namespace detail

inline constexpr int kSylowPatience = 30;

/// Basis of the 3-Sylow subgroup of J(F_q) with #J(F_q) = order. Stops once the
/// whole subgroup is generated or the rank reaches stop_rank; throws
/// std::runtime_error after kSylowPatience consecutive samples that add nothing.
template <class Rng>
SylowBasis sylow3(const Jacobian& J, const BigInt& order, Rng& rng, int stop_rank = 4) {
  SylowBasis S;
  BigInt m = order;
  while (m % 3 == 0) {
    m /= 3;
    ++S.full_exponent;
  }
  TorsionSpan span(J, {});
  int idle = 0;
  while (!S.complete() && S.rank() < stop_rank) {
    ++S.samples;
    const MumfordDivisor x = J.scalar_mul(m, J.random(rng));
    if (detail::sylow_insert(J, S, span, x)) {
      idle = 0;
    } else if (++idle >= kSylowPatience) {
      throw std::runtime_error("3-Sylow sampling did not stabilize; retry with another seed");
    }
  }
  return S;
}

/// Fixed space dimension of the s x s matrix with the given columns (s <= 4).
inline int fixed_dim_small(const std::vector<std::vector<std::uint8_t>>& cols) {
  Mat4 m = scale(Mat4::identity(), 2);
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols.size(); ++i) m(static_cast<int>(i), static_cast<int>(j)) = cols[j][i];
  return fixed_dim(m);
}

/// dim_{F_3} J[3](F_{p^k}).
inline int three_rank(const Genus2Curve& c, std::uint32_t p, int k, std::uint64_t seed = 0) {
  if (c.is_bad(p)) throw std::invalid_argument("bad prime " + std::to_string(p));
  const EulerFactor L = euler_factor(c, p);
  const int bound = three_rank_bound(L, static_cast<std::uint64_t>(k));
  if (bound <= 1) return bound;
  const int K = model_degree(c, p, k);
  const CurveModel model = make_model(c, p, K, seed);
  const Jacobian& J = model.jacobian();
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  if (K == k && !model.twisted()) return sylow3(J, group_order_ext(L, K), rng, bound).rank();
  const SylowBasis S = sylow3(J, group_order_ext(L, K), rng, 4);
  const TorsionSpan span(J, S.tops);
  std::vector<std::vector<std::uint8_t>> cols;
  for (const auto& t : S.tops) {
    auto co = span.coordinates(J, model.frobenius_power(t, k));
    if (!co) throw std::logic_error("Frobenius does not preserve the 3-torsion");
    cols.push_back(*co);
  }
  return fixed_dim_small(cols);
}

inline Signature signature_at(const Genus2Curve& c, std::uint32_t p, std::uint64_t seed = 0) {
  const EulerFactor L = euler_factor(c, p);
  return Signature{L.mod3(), static_cast<std::uint8_t>(three_rank(c, p, 1, seed))};
}

// ---------------------------------------------------------------------------
// Weil pairing

/// A primitive cube root of unity in F_q; requires q = 1 mod 3.
template <class Rng>
Fe primitive_cube_root(const GFq& F, Rng& rng) {
  if (F.q() % 3 != 1) throw std::invalid_argument("field has no primitive cube root of unity");
  for (;;) {
    const Fe g = F.random(rng);
    if (F.is_zero(g)) continue;
    Fe z = F.pow(g, (F.q() - 1) / 3);
    if (!F.is_one(z)) return z;
  }
}

namespace detail {

/// Factors of g with 3X = reduce(3X) + div(g).
inline FunctionTrace triple_trace(const Jacobian& J, const MumfordDivisor& x) {
  FunctionTrace t;
  const MumfordDivisor x2 = J.add(x, x, &t);
  J.add(x2, x, &t);
  return t;
}

/// Value of prod f_i^e_i on E1 - E2, or nullopt when a factor vanishes.
inline std::optional<Fe> evaluate_ratio(const Jacobian& J, const FunctionTrace& num, const FunctionTrace& den,
                                        const MumfordDivisor& e1, const MumfordDivisor& e2) {
  const GFq& F = J.field();
  Fe top = F.one(), bottom = F.one();
  auto fold = [&](const FunctionTrace& tr, bool invert) {
    for (const auto& f : tr) {
      const Fe a = J.evaluate(f, e1), b = J.evaluate(f, e2);
      if (F.is_zero(a) || F.is_zero(b)) return false;
      const bool up = (f.exponent > 0) != invert;
      top = F.mul(top, up ? a : b);
      bottom = F.mul(bottom, up ? b : a);
    }
    return true;
  };
  if (!fold(num, false) || !fold(den, true)) return std::nullopt;
  return F.div(top, bottom);
}

}  // namespace detail

inline constexpr int kPairingRetries = 64;

/// e_3(A, B) = zeta^r; returns r. Uses f_A(D_B) / f_B(D_A) with D_A = (A+R) - R and
/// D_B = (B+S) - S for random R, S.
template <class Rng>
int weil_pairing(const Jacobian& J, const MumfordDivisor& A, const MumfordDivisor& B, const Fe& zeta, Rng& rng) {
  const GFq& F = J.field();
  if (A.is_identity() || B.is_identity() || A == B) return 0;
  for (int attempt = 0; attempt < kPairingRetries; ++attempt) {
    const MumfordDivisor R = J.random(rng), S = J.random(rng);
    const MumfordDivisor AR = J.add(A, R), BS = J.add(B, S);
    if (R.degree() != 2 || S.degree() != 2 || AR.degree() != 2 || BS.degree() != 2) continue;
    const FunctionTrace fa_num = detail::triple_trace(J, AR), fa_den = detail::triple_trace(J, R);
    const FunctionTrace fb_num = detail::triple_trace(J, BS), fb_den = detail::triple_trace(J, S);
    const auto x = detail::evaluate_ratio(J, fa_num, fa_den, BS, S);
    if (!x) continue;
    const auto y = detail::evaluate_ratio(J, fb_num, fb_den, AR, R);
    if (!y) continue;
    const Fe e = F.div(*x, *y);
    if (F.is_one(e)) return 0;
    if (e == zeta) return 1;
    if (e == F.sqr(zeta)) return 2;
    throw std::logic_error("Weil pairing value is not a cube root of unity");
  }
  throw std::runtime_error("Weil pairing evaluation kept degenerating");
}

// ---------------------------------------------------------------------------
// Symplectic basis and Frobenius matrix

struct TorsionBasis {
  FieldDesc field;
  std::array<MumfordDivisor, 4> basis;
  Mat4 gram;  // gram(i, j) = r with e_3(b_i, b_j) = zeta^r
  Fe zeta;
};

namespace detail {

inline int form(const Mat4& g, const std::array<int, 4>& x, const std::array<int, 4>& y) {
  int s = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s += x[i] * g(i, j) * y[j];
  return ((s % 3) + 3) % 3;
}

/// Change of basis (columns) taking a nondegenerate alternating Gram matrix to J'.
inline std::array<std::array<int, 4>, 4> symplectic_gram_schmidt(const Mat4& g) {
  std::vector<std::array<int, 4>> rest;
  for (int i = 0; i < 4; ++i) {
    std::array<int, 4> v{};
    v[i] = 1;
    rest.push_back(v);
  }
  std::vector<std::pair<std::array<int, 4>, std::array<int, 4>>> pairs;
  while (!rest.empty()) {
    const auto e = rest.front();
    rest.erase(rest.begin());
    auto it = std::find_if(rest.begin(), rest.end(), [&](const auto& y) { return form(g, e, y) != 0; });
    if (it == rest.end()) throw std::logic_error("degenerate Weil pairing on 3-torsion basis");
    auto f = *it;
    rest.erase(it);
    const int s = form(g, e, f);  // self-inverse in F_3
    for (auto& c : f) c = c * s % 3;
    for (auto& x : rest) {
      const int a = form(g, x, f), b = form(g, x, e);
      for (int i = 0; i < 4; ++i) x[i] = ((x[i] - a * e[i] + b * f[i]) % 3 + 9) % 3;
    }
    pairs.emplace_back(e, f);
  }
  return {pairs[0].first, pairs[1].first, pairs[1].second, pairs[0].second};
}

}  // namespace detail

/// Symplectic basis of J[3] from a rank-4 3-torsion basis.
template <class Rng>
TorsionBasis make_torsion_basis(const Jacobian& J, const std::vector<MumfordDivisor>& tops, Rng& rng) {
  if (tops.size() != 4) throw std::invalid_argument("need four independent 3-torsion classes");
  const GFq& F = J.field();
  TorsionBasis tb;
  tb.field = F.desc();
  tb.zeta = primitive_cube_root(F, rng);
  Mat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const int r = weil_pairing(J, tops[i], tops[j], tb.zeta, rng);
      g(i, j) = static_cast<std::uint8_t>(r);
      g(j, i) = static_cast<std::uint8_t>((3 - r) % 3);
    }
  if (det(g) == 0) throw std::logic_error("Weil pairing Gram matrix is singular");
  const auto cols = detail::symplectic_gram_schmidt(g);
  for (int j = 0; j < 4; ++j) {
    MumfordDivisor d = J.identity();
    for (int i = 0; i < 4; ++i)
      if (cols[j][i]) d = J.add(d, cols[j][i] == 1 ? tops[i] : J.negate(tops[i]));
    tb.basis[j] = d;
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) tb.gram(i, j) = static_cast<std::uint8_t>(detail::form(g, cols[i], cols[j]));
  return tb;
}

struct FrobeniusClass {
  Mat4 matrix;
  std::uint16_t class_id = 0;
  int d = 0;  // smallest scanned k with J[3] defined over F_{p^k}
  int K = 0;  // degree of the working field
};

inline constexpr std::array<int, 24> kDivisors360 = {1,  2,  3,  4,  5,  6,  8,  9,  10,  12,  15,  18,
                                                     20, 24, 30, 36, 40, 45, 60, 72, 90, 120, 180, 360};

/// Matrix of the p-power Frobenius on J[3] in a symplectic basis, and its GSp(4,F_3) class.
inline FrobeniusClass frobenius_class(const Genus2Curve& c, std::uint32_t p, std::uint64_t seed = 0) {
  if (c.is_bad(p)) throw std::invalid_argument("bad prime " + std::to_string(p));
  const EulerFactor L = euler_factor(c, p);
  const std::array<std::uint8_t, 5> unipotent{1, 2, 0, 2, 1};  // (1 - t)^4 mod 3
  std::mt19937_64 rng(seed ^ (std::uint64_t(p) << 32) ^ 0x51ed2701ull);
  for (int d : kDivisors360) {
    if (charpoly_rev(frobenius_power_mod3(L, d)) != unipotent) continue;
    const int K = model_degree(c, p, d);
    const CurveModel model = make_model(c, p, K, seed);
    const Jacobian& J = model.jacobian();
    const SylowBasis S = sylow3(J, group_order_ext(L, K), rng, 4);
    if (S.rank() < 4) continue;
    const TorsionBasis tb = make_torsion_basis(J, S.tops, rng);
    const TorsionSpan span(J, {tb.basis.begin(), tb.basis.end()});
    FrobeniusClass out;
    out.d = d;
    out.K = K;
    for (int j = 0; j < 4; ++j) {
      const auto co = span.coordinates(J, model.frobenius(tb.basis[j]));
      if (!co) throw std::logic_error("Frobenius does not preserve the 3-torsion");
      for (int i = 0; i < 4; ++i) out.matrix(i, j) = (*co)[i];
    }
    if (charpoly_rev(out.matrix) != L.mod3())
      throw std::logic_error("Frobenius matrix disagrees with L_p mod 3 at p = " + std::to_string(p));
    const auto sim = similitude(out.matrix);
    if (!sim || *sim != static_cast<int>(p % 3))
      throw std::logic_error("Frobenius matrix has the wrong similitude at p = " + std::to_string(p));
    const GroupTable& g = GroupTable::instance();
    out.class_id = g.class_of(g.index_of(out.matrix));
    return out;
  }
  throw std::logic_error("3-torsion never became rational at p = " + std::to_string(p));
}

}  // namespace mod3gal
