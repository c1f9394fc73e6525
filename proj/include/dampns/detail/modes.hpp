#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "dampns/spectral_core.hpp"

namespace dampns::detail {

struct Mode {
  std::size_t index;
  std::array<int, 3> j;     // signed mode indices, unused axes 0
  std::array<double, 3> k;  // wavenumbers, unused axes 0
  double k2;
};

// Visits every mode in storage (lexicographic) order.
template <class Fn>
void for_each_mode(const GridSpec& grid, Fn&& fn) {
  const std::vector<double> kk = wavenumbers(grid);
  const int n = grid.n;
  Mode m{0, {0, 0, 0}, {0.0, 0.0, 0.0}, 0.0};
  if (grid.dim == 3) {
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy)
        for (int iz = 0; iz < n; ++iz) {
          m.j = {grid.mode_index(ix), grid.mode_index(iy), grid.mode_index(iz)};
          m.k = {kk[ix], kk[iy], kk[iz]};
          m.k2 = m.k[0] * m.k[0] + m.k[1] * m.k[1] + m.k[2] * m.k[2];
          fn(m);
          ++m.index;
        }
  } else {
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy) {
        m.j = {grid.mode_index(ix), grid.mode_index(iy), 0};
        m.k = {kk[ix], kk[iy], 0.0};
        m.k2 = m.k[0] * m.k[0] + m.k[1] * m.k[1];
        fn(m);
        ++m.index;
      }
  }
}

// Storage index of the mode -k.
inline std::size_t conjugate_index(const GridSpec& grid, std::size_t index) {
  const std::size_t n = static_cast<std::size_t>(grid.n);
  std::size_t out = 0;
  std::size_t stride = 1;
  for (int d = 0; d < grid.dim; ++d) {
    const std::size_t i = index % n;
    index /= n;
    out += ((n - i) % n) * stride;
    stride *= n;
  }
  return out;
}

}  // namespace dampns::detail
