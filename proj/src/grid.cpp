#include "diffent/grid.hpp"

#include <cmath>

#include "diffent/error.hpp"

namespace diffent {

Grid2D::Grid2D(int nx, int ny, double dx, double dy) : nx_(nx), ny_(ny), dx_(dx), dy_(dy) {
  auto pow2 = [](int n) { return n >= 2 && (n & (n - 1)) == 0; };
  if (!pow2(nx) || !pow2(ny)) {
    throw Error(ErrorCode::InvalidArgument, "grid sizes must be powers of two >= 2");
  }
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy)) {
    throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive");
  }
}

SampledField::SampledField(Grid2D grid, ComplexVector values, double wavenumber)
    : grid_(grid), values_(std::move(values)), wavenumber_(wavenumber) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorCode::GridMismatch, "field values do not match grid shape");
  }
}

double SampledField::squared_norm() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return s * grid_.cell_area();
}

SampledField SampledField::scaled(cd factor) const {
  ComplexVector v = values_;
  for (auto& x : v) x *= factor;
  return SampledField(grid_, std::move(v), wavenumber_);
}

}  // namespace diffent
