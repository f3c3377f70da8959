// Brute-force oracles shared by the tests and the acceptance binary.
#pragma once

#include <cstdint>
#include <vector>

#include "mod3gal/curve.hpp"
#include "mod3gal/jacobian.hpp"

namespace mod3gal::oracle {

/// #C(F_p) by enumerating every affine pair (x, y).
inline std::uint64_t naive_count(const Genus2Curve& c, std::uint32_t p) {
  const fp::Poly F = c.reduce(p);
  std::uint64_t n = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    std::uint64_t v = 0;
    for (std::size_t j = F.size(); j-- > 0;) v = (v * x + F[j]) % p;
    for (std::uint64_t y = 0; y < p; ++y) n += y * y % p == v;
  }
  if (c.degree() == 5) return n + 1;
  std::uint64_t lc_square = 0;
  for (std::uint64_t y = 1; y < p; ++y) lc_square |= y * y % p == F.back();
  return n + (lc_square ? 2 : 0);
}

/// Every reduced Mumford pair (u, v) over a prime field, by exhaustive search.
inline std::vector<MumfordDivisor> enumerate_classes(const Jacobian& J) {
  const GFq& F = J.field();
  const std::uint32_t p = F.p();
  std::vector<MumfordDivisor> out{J.identity()};
  for (std::uint32_t a = 0; a < p; ++a)
    for (std::uint32_t b = 0; b < p; ++b) {
      MumfordDivisor d{FqPoly{F.from_int(a), F.one()}, fq::trim_copy(F, FqPoly{F.from_int(b)})};
      if (J.is_valid(d)) out.push_back(d);
    }
  for (std::uint32_t a = 0; a < p; ++a)
    for (std::uint32_t b = 0; b < p; ++b)
      for (std::uint32_t c0 = 0; c0 < p; ++c0)
        for (std::uint32_t c1 = 0; c1 < p; ++c1) {
          MumfordDivisor d{FqPoly{F.from_int(b), F.from_int(a), F.one()},
                           fq::trim_copy(F, FqPoly{F.from_int(c0), F.from_int(c1)})};
          if (J.is_valid(d)) out.push_back(d);
        }
  return out;
}

}  // namespace mod3gal::oracle
