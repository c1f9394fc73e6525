#pragma once

#include <array>
#include <cmath>
#include <vector>
#include <cstdint>
#include <random>

#include "dampns/spectral_core.hpp"

namespace testing {

// Real random field; its spectrum is conjugate symmetric by construction.
inline dampns::SpectralVectorField random_field(const dampns::GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  dampns::PhysicalVectorField p(g);
  for (int c = 0; c < p.components(); ++c)
    for (auto& x : p.component(c)) x = d(rng);
  return dampns::to_spectral(p);
}

inline double max_diff(const dampns::SpectralVectorField& a, const dampns::SpectralVectorField& b) {
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c)
    for (std::size_t i = 0; i < a.modes(); ++i) m = std::max(m, std::abs(a.component(c)[i] - b.component(c)[i]));
  return m;
}

// Physical field from a function of position, component by component.
template <class F>
dampns::SpectralVectorField sample(const dampns::GridSpec& g, F&& f) {
  dampns::PhysicalVectorField p(g);
  for (std::size_t i = 0; i < p.points(); ++i) {
    const auto x = p.position(i);
    const auto v = f(x);
    for (int c = 0; c < p.components(); ++c) p.component(c)[i] = v[c];
  }
  return dampns::to_spectral(p);
}

}  // namespace testing
