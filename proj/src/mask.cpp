#include "diffent/mask.hpp"

#include <cmath>

#include "diffent/error.hpp"

namespace diffent {

MaskFunction::MaskFunction(Kind kind) : kind_(std::move(kind)) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CosineGrating>) {
          const double n2 = m.u[0] * m.u[0] + m.u[1] * m.u[1] + m.u[2] * m.u[2];
          if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) {
            throw Error(ErrorCode::InvalidArgument, "grating vector must be a unit vector");
          }
          if (!(m.wavenumber > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "grating wavenumber must be positive");
          }
        } else if constexpr (std::is_same_v<T, CustomMask>) {
          if (m.values.size() != m.grid.size()) {
            throw Error(ErrorCode::GridMismatch, "custom mask values do not match grid");
          }
          for (const auto& v : m.values) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
              throw Error(ErrorCode::InvalidArgument, "custom mask contains non-finite values");
            }
          }
        } else {
          if (!(m.radius > 0.0) || !std::isfinite(m.radius)) {
            throw Error(ErrorCode::InvalidArgument, "aperture radius must be positive");
          }
        }
      },
      kind_);
}

MaskFunction MaskFunction::cosine_grating(double ux, double uy, double wavenumber,
                                          double amplitude) {
  const double t2 = ux * ux + uy * uy;
  if (t2 > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "transverse grating vector exceeds unit length");
  }
  return MaskFunction(CosineGrating{{ux, uy, std::sqrt(1.0 - t2)}, wavenumber, amplitude});
}

MaskFunction MaskFunction::circular_aperture(double radius) {
  return MaskFunction(CircularAperture{radius});
}

MaskFunction MaskFunction::pinhole(double radius) { return MaskFunction(Pinhole{radius}); }

MaskFunction MaskFunction::custom(Grid2D grid, ComplexVector values) {
  return MaskFunction(CustomMask{grid, std::move(values)});
}

MaskFunction MaskFunction::unit(const Grid2D& grid) {
  return custom(grid, ComplexVector(grid.size(), cd{1.0, 0.0}));
}

std::string MaskFunction::kind_name() const {
  switch (kind_.index()) {
    case 0: return "cosine";
    case 1: return "aperture";
    case 2: return "pinhole";
    default: return "custom";
  }
}

cd MaskFunction::evaluate(double x, double y) const {
  return std::visit(
      [x, y](const auto& m) -> cd {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CosineGrating>) {
          return m.amplitude * std::cos(m.wavenumber * (m.u[0] * x + m.u[1] * y));
        } else if constexpr (std::is_same_v<T, CustomMask>) {
          const auto& g = m.grid;
          const double fi = x / g.dx() + g.nx() / 2;
          const double fj = y / g.dy() + g.ny() / 2;
          const long i = std::lround(fi);
          const long j = std::lround(fj);
          if (std::abs(fi - i) > 1e-9 || std::abs(fj - j) > 1e-9 || i < 0 || j < 0 ||
              i >= g.nx() || j >= g.ny()) {
            throw Error(ErrorCode::GridMismatch, "custom mask evaluated off its sample grid");
          }
          return m.values[g.index(static_cast<int>(i), static_cast<int>(j))];
        } else {
          return (x * x + y * y <= m.radius * m.radius) ? cd{1.0, 0.0} : cd{0.0, 0.0};
        }
      },
      kind_);
}

ComplexVector MaskFunction::sample(const Grid2D& grid) const {
  if (const auto* custom = std::get_if<CustomMask>(&kind_)) {
    if (!(custom->grid == grid)) {
      throw Error(ErrorCode::GridMismatch, "custom mask sampled on a different grid");
    }
    return custom->values;
  }
  ComplexVector out(grid.size());
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      out[grid.index(i, j)] = evaluate(grid.x(i), grid.y(j));
    }
  }
  return out;
}

}  // namespace diffent
