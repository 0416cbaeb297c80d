#pragma once

#include <span>

#include "diffent/grid.hpp"

namespace diffent {

// Centered 2D transforms with continuous-transform scaling.
//
// forward:  F(f) = sum_x g(x) exp(-i x.f) dx dy, sampled at grid.fx/fy
// inverse:  g(x) = sum_f F(f) exp(+i x.f) dfx dfy / (2 pi)^2
//
// Both arrays use the DC-centered layout of Grid2D; the shifts are applied
// internally, so inverse(forward(g)) == g up to rounding.
ComplexVector fft2_centered(const Grid2D& grid, std::span<const cd> samples);
ComplexVector ifft2_centered(const Grid2D& grid, std::span<const cd> spectrum);

// Discrete Parseval weight: sum |F|^2 * spectral_cell_area(grid) equals
// sum |g|^2 dx dy.
inline double spectral_cell_area(const Grid2D& grid) {
  return grid.dfx() * grid.dfy() / (4.0 * kPi * kPi);
}

}  // namespace diffent
