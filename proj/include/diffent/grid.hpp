#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "diffent/types.hpp"

namespace diffent {

// Uniform sampling of the z = 0 plane, centered on the origin. Sample (i, j)
// sits at x = (i - nx/2) dx, y = (j - ny/2) dy, so index nx/2 is the origin.
class Grid2D {
 public:
  Grid2D(int nx, int ny, double dx, double dy);
  static Grid2D square(int n, double spacing) { return Grid2D(n, n, spacing, spacing); }

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double dx() const noexcept { return dx_; }
  double dy() const noexcept { return dy_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }
  double cell_area() const noexcept { return dx_ * dy_; }

  double x(int i) const noexcept { return (i - nx_ / 2) * dx_; }
  double y(int j) const noexcept { return (j - ny_ / 2) * dy_; }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * nx_ + i;
  }

  // Angular spatial-frequency spacing of the matching DFT (rad / length).
  double dfx() const noexcept { return 2.0 * kPi / (nx_ * dx_); }
  double dfy() const noexcept { return 2.0 * kPi / (ny_ * dy_); }
  double fx(int p) const noexcept { return (p - nx_ / 2) * dfx(); }
  double fy(int q) const noexcept { return (q - ny_ / 2) * dfy(); }

  bool operator==(const Grid2D&) const = default;

 private:
  int nx_;
  int ny_;
  double dx_;
  double dy_;
};

// Complex scalar field sampled on a Grid2D, row-major (y outer, x inner).
class SampledField {
 public:
  SampledField(Grid2D grid, ComplexVector values, double wavenumber = 1.0);

  const Grid2D& grid() const noexcept { return grid_; }
  std::span<const cd> values() const noexcept { return values_; }
  double wavenumber() const noexcept { return wavenumber_; }
  cd at(int i, int j) const { return values_[grid_.index(i, j)]; }

  // Discrete squared norm: sum |value|^2 dx dy.
  double squared_norm() const;

  SampledField scaled(cd factor) const;

 private:
  Grid2D grid_;
  ComplexVector values_;
  double wavenumber_;
};

}  // namespace diffent
