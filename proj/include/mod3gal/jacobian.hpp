/**
 * @file jacobian.hpp
 * @brief Mumford-representation arithmetic on the Jacobian of y^2 = G(x), deg G = 5, over F_q.
 *
 * A divisor class is stored as its reduced representative (u, v): u monic of
 * degree <= 2, deg v < deg u, u | v^2 - G. The identity is (1, 0).
 */
#pragma once

#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "mod3gal/fq_poly.hpp"

namespace mod3gal {

struct MumfordDivisor {
  FqPoly u, v;

  int degree() const { return fq::deg(u); }
  bool is_identity() const { return u.size() == 1 && v.empty(); }
  friend bool operator==(const MumfordDivisor&, const MumfordDivisor&) = default;
};

/// One factor of a rational function: x-polynomial a(x), or y - a(x) when has_y.
struct FunctionFactor {
  FqPoly a;
  bool has_y = false;
  int exponent = 1;
};

/// Factors of the function relating the inputs and output of a group operation:
/// D1 + D2 = D3 + div(prod a_i^e_i).
using FunctionTrace = std::vector<FunctionFactor>;

class Jacobian {
 public:
  using Key = std::vector<std::uint32_t>;

  Jacobian(GFq field, FqPoly G) : F_(std::move(field)), G_(std::move(G)) {
    fq::trim(F_, G_);
    if (fq::deg(G_) != 5) throw std::invalid_argument("Jacobian model must have degree 5");
  }

  const GFq& field() const { return F_; }
  const FqPoly& model() const { return G_; }

  MumfordDivisor identity() const { return {FqPoly{F_.one()}, {}}; }

  bool is_valid(const MumfordDivisor& d) const {
    if (d.u.empty() || fq::deg(d.u) > 2 || !F_.is_one(d.u.back())) return false;
    if (fq::deg(d.v) >= fq::deg(d.u)) return false;
    return fq::mod(F_, fq::sub(F_, fq::mul(F_, d.v, d.v), G_), d.u).empty();
  }

  MumfordDivisor negate(const MumfordDivisor& d) const { return {d.u, fq::neg(F_, d.v)}; }

  MumfordDivisor add(const MumfordDivisor& a, const MumfordDivisor& b, FunctionTrace* trace = nullptr) const {
    // Composition.
    auto [d1, e1, e2] = fq::xgcd(F_, a.u, b.u);
    auto [d, c1, c2] = fq::xgcd(F_, d1, fq::add(F_, a.v, b.v));
    const FqPoly s1 = fq::mul(F_, c1, e1), s2 = fq::mul(F_, c1, e2), &s3 = c2;
    FqPoly u = fq::exact_div(F_, fq::mul(F_, a.u, b.u), fq::mul(F_, d, d));
    FqPoly v = fq::add(F_, fq::mul(F_, fq::mul(F_, s1, a.u), b.v), fq::mul(F_, fq::mul(F_, s2, b.u), a.v));
    v = fq::add(F_, v, fq::mul(F_, s3, fq::add(F_, fq::mul(F_, a.v, b.v), G_)));
    v = fq::mod(F_, fq::exact_div(F_, v, d), u);
    if (trace && fq::deg(d) > 0) trace->push_back({d, false, 1});
    // Reduction.
    while (fq::deg(u) > 2) {
      FqPoly un = fq::exact_div(F_, fq::sub(F_, G_, fq::mul(F_, v, v)), u);
      if (trace) {
        trace->push_back({v, true, 1});
        trace->push_back({un, false, -1});
      }
      un = fq::monic(F_, un);
      v = fq::mod(F_, fq::neg(F_, v), un);
      u = std::move(un);
    }
    return {std::move(u), std::move(v)};
  }

  MumfordDivisor sub(const MumfordDivisor& a, const MumfordDivisor& b) const { return add(a, negate(b)); }
  MumfordDivisor dbl(const MumfordDivisor& a) const { return add(a, a); }

  MumfordDivisor scalar_mul(const BigInt& n, const MumfordDivisor& d) const {
    if (n < 0) return scalar_mul(-n, negate(d));
    MumfordDivisor r = identity();
    for (std::size_t i = n == 0 ? 0 : msb(n) + 1; i-- > 0;) {
      r = dbl(r);
      if (bit_test(n, static_cast<unsigned>(i))) r = add(r, d);
    }
    return r;
  }
  MumfordDivisor scalar_mul(std::int64_t n, const MumfordDivisor& d) const { return scalar_mul(BigInt(n), d); }

  /// Degree-one divisor P - oo for the point P = (x0, y0); requires y0^2 = G(x0).
  MumfordDivisor from_point(const Fe& x0, const Fe& y0) const {
    MumfordDivisor d{FqPoly{F_.neg(x0), F_.one()}, fq::constant(F_, y0)};
    if (!is_valid(d)) throw std::invalid_argument("point not on curve");
    return d;
  }

  /// Random divisor class: a random monic u of degree 2 with a compatible v,
  /// or occasionally a single point.
  template <class Rng>
  MumfordDivisor random(Rng& rng) const {
    for (;;) {
      if (rng() % 8 == 0) {
        const Fe x0 = F_.random(rng);
        const auto y = F_.sqrt(fq::eval(F_, G_, x0));
        if (!y) continue;
        return from_point(x0, rng() % 2 ? *y : F_.neg(*y));
      }
      const Fe a = F_.random(rng), b = F_.random(rng);
      const FqPoly u{b, a, F_.one()};
      const Fe two = F_.from_int(2), half = F_.inv(two);
      const Fe disc = F_.sub(F_.sqr(a), F_.scale(b, 4));
      if (F_.is_zero(disc)) continue;
      std::optional<MumfordDivisor> d;
      if (auto sd = F_.sqrt(disc)) {
        const Fe x1 = F_.mul(F_.sub(*sd, a), half), x2 = F_.mul(F_.sub(F_.neg(*sd), a), half);
        auto y1 = F_.sqrt(fq::eval(F_, G_, x1)), y2 = F_.sqrt(fq::eval(F_, G_, x2));
        if (!y1 || !y2) continue;
        if (rng() % 2) *y1 = F_.neg(*y1);
        if (rng() % 2) *y2 = F_.neg(*y2);
        const Fe c1 = F_.div(F_.sub(*y1, *y2), F_.sub(x1, x2));
        const Fe c0 = F_.sub(*y1, F_.mul(c1, x1));
        d = MumfordDivisor{u, fq::trim_copy(F_, FqPoly{c0, c1})};
      } else {
        // F_q[x]/(u) = F_q(sqrt disc) with root theta = (-a + sqrt disc) / 2.
        const FqPoly r = fq::mod(F_, G_, u);
        const Fe r0 = r.size() > 0 ? r[0] : F_.zero(), r1 = r.size() > 1 ? r[1] : F_.zero();
        const Fe A = F_.sub(r0, F_.mul(F_.mul(r1, a), half)), B = F_.mul(r1, half);
        Fe X, Y;
        if (F_.is_zero(B)) {
          if (auto s = F_.sqrt(A)) {
            X = *s;
            Y = F_.zero();
          } else {
            X = F_.zero();
            Y = *F_.sqrt(F_.div(A, disc));
          }
        } else {
          const auto n = F_.sqrt(F_.sub(F_.sqr(A), F_.mul(disc, F_.sqr(B))));
          if (!n) continue;
          auto s = F_.sqrt(F_.mul(F_.add(A, *n), half));
          if (!s) s = F_.sqrt(F_.mul(F_.sub(A, *n), half));
          X = *s;
          Y = F_.div(B, F_.mul(two, X));
        }
        if (rng() % 2) {
          X = F_.neg(X);
          Y = F_.neg(Y);
        }
        d = MumfordDivisor{u, fq::trim_copy(F_, FqPoly{F_.add(X, F_.mul(Y, a)), F_.mul(two, Y)})};
      }
      if (!is_valid(*d)) throw std::logic_error("random divisor construction failed");
      return *d;
    }
  }

  Key key(const MumfordDivisor& d) const {
    Key k;
    k.push_back(static_cast<std::uint32_t>(d.u.size()));
    for (const auto& c : d.u) k.insert(k.end(), c.begin(), c.end());
    for (std::size_t i = 0; i + 1 < d.u.size(); ++i) {
      const Fe c = i < d.v.size() ? d.v[i] : F_.zero();
      k.insert(k.end(), c.begin(), c.end());
    }
    return k;
  }

  /// Value at the effective divisor of e (deg e = 2) of one traced factor.
  Fe evaluate(const FunctionFactor& f, const MumfordDivisor& e) const {
    const FqPoly poly = f.has_y ? fq::sub(F_, e.v, f.a) : f.a;
    const FqPoly r = fq::mod(F_, poly, e.u);
    const Fe c0 = r.size() > 0 ? r[0] : F_.zero(), c1 = r.size() > 1 ? r[1] : F_.zero();
    // Resultant of x^2 + a x + b with c1 x + c0.
    const Fe& a = e.u[1];
    const Fe& b = e.u[0];
    return F_.add(F_.sub(F_.mul(F_.sqr(c1), b), F_.mul(F_.mul(c0, c1), a)), F_.sqr(c0));
  }

 private:
  GFq F_;
  FqPoly G_;
};

}  // namespace mod3gal
