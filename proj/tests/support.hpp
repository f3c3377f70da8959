// Shared fixtures for the test binaries.
#pragma once

#include <random>
#include <string>

#include "mod3gal/atlas.hpp"
#include "mod3gal/curve.hpp"

namespace mod3gal::test {

inline std::string data_file(const std::string& name) { return std::string(MOD3GAL_DATA_DIR) + "/" + name; }

inline const SubgroupAtlas& shipped_atlas() {
  static const SubgroupAtlas atlas = read_atlas(GroupTable::instance(), data_file("atlas.jsonl"));
  return atlas;
}

/// Random y^2 = f(x) with small coefficients, deg f in {5, 6}, nonzero discriminant.
template <class Rng>
Genus2Curve random_curve(Rng& rng, int degree, int bound = 5) {
  std::uniform_int_distribution<int> coef(-bound, bound);
  for (;;) {
    ZPoly f(degree + 1);
    for (auto& a : f) a = coef(rng);
    if (f.back() == 0) f.back() = 1;
    try {
      return curve_validate(f);
    } catch (const std::invalid_argument&) {
    }
  }
}

template <class Rng>
Mat4 random_element(const GroupTable& g, Rng& rng) {
  return g.mat(static_cast<Elem>(rng() % g.size()));
}

}  // namespace mod3gal::test
