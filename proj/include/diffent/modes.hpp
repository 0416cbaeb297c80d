#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "diffent/grid.hpp"
#include "diffent/mask.hpp"

namespace diffent {

// Direction cosines of a propagating plane wave, n_z > 0.
struct Direction {
  double nx;
  double ny;
  double nz;
};

// Discrete set of propagating plane-wave directions with an amplitude and a
// solid-angle weight per direction. Evanescent samples (n_x^2 + n_y^2 >= 1)
// are dropped at construction and counted in evanescent_fraction().
class PlaneWaveGrid {
 public:
  // Square lattice of transverse direction cosines centered on (cx, cy):
  // (cx + i*spacing, cy + j*spacing) for |i|, |j| <= half_width, each with
  // dOmega = spacing^2 / n_z. Amplitudes default to zero.
  static PlaneWaveGrid lattice(double cx, double cy, double spacing, int half_width);

  // Lattice points (spacing as above) within `radius` of (cx, cy).
  static PlaneWaveGrid disc(double cx, double cy, double spacing, double radius);

  // Explicit transverse directions with unit solid-angle weight; the form used
  // for delta-function (single plane wave) inputs and outputs.
  static PlaneWaveGrid discrete(const std::vector<std::array<double, 2>>& transverse);

  std::size_t size() const noexcept { return directions_.size(); }
  const std::vector<Direction>& directions() const noexcept { return directions_; }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  const std::vector<double>& solid_angles() const noexcept { return solid_angles_; }
  double evanescent_fraction() const noexcept { return evanescent_fraction_; }
  // Lattice spacing in direction-cosine units; 0 for discrete grids.
  double spacing() const noexcept { return spacing_; }

  // Unit-norm amplitude vector (sum |phi|^2 = 1).
  PlaneWaveGrid with_amplitudes(ComplexVector amplitudes) const;

 private:
  PlaneWaveGrid() = default;
  std::vector<Direction> directions_;
  ComplexVector amplitudes_;
  std::vector<double> solid_angles_;
  double evanescent_fraction_ = 0.0;
  double spacing_ = 0.0;
};

enum class BasisKind { HermiteGaussian, LaguerreGaussian };

// (m, n) for Hermite-Gaussian modes, (p, l) for Laguerre-Gaussian modes.
struct ModeLabel {
  int first = 0;
  int second = 0;
  auto operator<=>(const ModeLabel&) const = default;
};

std::string to_string(BasisKind kind, const ModeLabel& label);

class ModeBasis {
 public:
  ModeBasis(BasisKind kind, std::vector<ModeLabel> labels, double waist);

  // All HG(m, n) with m + n <= max_order.
  static ModeBasis hermite_gaussian(int max_order, double waist);
  // All LG(p, l) with p <= max_radial and |l| <= max_azimuthal.
  static ModeBasis laguerre_gaussian(int max_radial, int max_azimuthal, double waist);

  BasisKind kind() const noexcept { return kind_; }
  double waist() const noexcept { return waist_; }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<ModeLabel>& labels() const noexcept { return labels_; }
  bool contains(const ModeLabel& label) const;
  std::string description() const;

  // Analytic, continuum-normalized mode function at (x, y).
  cd evaluate(const ModeLabel& label, double x, double y) const;

 private:
  BasisKind kind_;
  std::vector<ModeLabel> labels_;
  double waist_;
};

// Mode energy allowed to fall outside the grid before sampling fails.
inline constexpr double kBoundaryEnergyTolerance = 1e-10;

// Samples one basis mode and normalizes it to unit discrete norm. Throws
// UnknownLabel or GridTooSmall.
SampledField sample_field(const ModeLabel& label, const ModeBasis& basis, const Grid2D& grid,
                          double wavenumber = 1.0);

// Fraction of a mode's energy lying outside the grid, estimated on a grid of
// the same spacing and three times the extent.
double boundary_energy_fraction(const ModeLabel& label, const ModeBasis& basis,
                                const Grid2D& grid);

// Pointwise product with the mask (thin-screen transmission). Throws
// GridMismatch for custom masks sampled on another grid.
SampledField apply_mask_to_field(const SampledField& field, const MaskFunction& mask);

// sum conj(a) b dx dy. Throws GridMismatch.
cd field_overlap(const SampledField& a, const SampledField& b);

// |<a|b>|^2 / (<a|a><b|b>).
double overlap_fidelity(const SampledField& a, const SampledField& b);

MatrixXcd gram_matrix(const ModeBasis& basis, const Grid2D& grid);

struct BasisProjection {
  ComplexVector coefficients;
  double captured_norm = 0.0;       // sum |c|^2 / |field|^2
  double truncation_energy = 0.0;   // 1 - captured_norm
};

BasisProjection project_onto_basis(const SampledField& field, const ModeBasis& basis);

}  // namespace diffent
