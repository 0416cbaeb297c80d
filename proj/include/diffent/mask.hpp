#pragma once

#include <array>
#include <string>
#include <variant>

#include "diffent/grid.hpp"

namespace diffent {

// M(x, y) = amplitude * cos(k (u_x x + u_y y)). The grating vector u is a unit
// 3-vector; its transverse part sets the diffraction angle.
struct CosineGrating {
  std::array<double, 3> u;
  double wavenumber;
  double amplitude = 1.0;
};

// Transmissive disc of radius R: M = 1 for x^2 + y^2 <= R^2, else 0.
struct CircularAperture {
  double radius;
};

// Same transmission as CircularAperture; flagged absorptive so compiled
// networks default to the loss-preserving dilation.
struct Pinhole {
  double radius;
};

struct CustomMask {
  Grid2D grid;
  ComplexVector values;
};

class MaskFunction {
 public:
  using Kind = std::variant<CosineGrating, CircularAperture, Pinhole, CustomMask>;

  static MaskFunction cosine_grating(double ux, double uy, double wavenumber,
                                     double amplitude = 1.0);
  static MaskFunction circular_aperture(double radius);
  static MaskFunction pinhole(double radius);
  static MaskFunction custom(Grid2D grid, ComplexVector values);
  static MaskFunction unit(const Grid2D& grid);

  explicit MaskFunction(Kind kind);

  const Kind& kind() const noexcept { return kind_; }
  std::string kind_name() const;
  bool absorptive() const noexcept { return std::holds_alternative<Pinhole>(kind_); }

  // Analytic masks evaluate anywhere; custom masks only at their own samples.
  cd evaluate(double x, double y) const;
  ComplexVector sample(const Grid2D& grid) const;

 private:
  Kind kind_;
};

}  // namespace diffent
