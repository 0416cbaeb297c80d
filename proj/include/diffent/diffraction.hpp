#pragma once

#include <string>
#include <variant>
#include <vector>

#include "diffent/grid.hpp"
#include "diffent/mask.hpp"
#include "diffent/modes.hpp"

namespace diffent {

// Where a compiled matrix came from.
struct Provenance {
  std::string element;      // mask kind, "impulse-response" or "free-space"
  std::string grid;         // grid header or direction-grid summary
  std::string basis;        // basis description or "plane-wave"
  int truncation = 0;       // retained mode count M
  double scale = 1.0;       // pre-normalization scale divided out of the entries
};

// Mode-coupling matrix, rows = output modes, columns = input modes.
// Entries are bounded by 1 and column norms by 1 (within 1e-9).
class CouplingMatrix {
 public:
  explicit CouplingMatrix(MatrixXcd values, Provenance provenance = {});

  const MatrixXcd& values() const noexcept { return values_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  Eigen::Index outputs() const noexcept { return values_.rows(); }
  Eigen::Index inputs() const noexcept { return values_.cols(); }

  // Squared norm of each column (flux of each transformed input mode).
  std::vector<double> captured_norms() const { return captured_norms_; }
  // Inputs whose captured norm fell below 1 - truncation threshold.
  const std::vector<int>& truncation_loss() const noexcept { return truncation_loss_; }
  void flag_truncation(double threshold);

 private:
  MatrixXcd values_;
  Provenance provenance_;
  std::vector<double> captured_norms_;
  std::vector<int> truncation_loss_;
};

// Unitary network in the creation-operator convention
//   a_j^dagger -> sum_k U(j, k) a_k^dagger,
// i.e. row j lists where input mode j goes. This is the transpose of the
// CouplingMatrix layout.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(MatrixXcd u, double tolerance = 1e-10);

  const MatrixXcd& matrix() const noexcept { return u_; }
  int dimension() const noexcept { return static_cast<int>(u_.rows()); }
  cd operator()(int j, int k) const { return u_(j, k); }

  // ||U^dagger U - I||_F
  double unitarity_residual() const noexcept { return residual_; }
  // ||C - W||_F when produced by unitarize(); 0 otherwise.
  double unitarization_distance() const noexcept { return distance_; }
  int ancilla_modes() const noexcept { return ancillas_; }

  // True when the network does not split into independent sub-networks, with
  // |U(j,k)| <= tol_couple treated as zero.
  bool connected(double tol_couple = 1e-12) const;

  static UnitaryMatrix identity(int n) { return UnitaryMatrix(MatrixXcd::Identity(n, n)); }

 private:
  friend UnitaryMatrix with_unitarization_record(UnitaryMatrix, double, int);
  MatrixXcd u_;
  double residual_;
  double distance_ = 0.0;
  int ancillas_ = 0;
};

UnitaryMatrix with_unitarization_record(UnitaryMatrix u, double distance, int ancillas);

// Centered mask spectrum M~(f_x, f_y) = sum M(x,y) e^{-i(x f_x + y f_y)} dx dy.
struct MaskSpectrum {
  Grid2D grid;              // spatial grid; frequencies via grid.fx / grid.fy
  ComplexVector values;
  double edge_ratio = 0.0;  // max |M~| on the outermost frequency ring / max |M~|
};

inline constexpr double kDefaultAliasThreshold = 1e-2;

// Throws AliasingDetected when edge_ratio exceeds alias_threshold.
MaskSpectrum mask_spectrum(const MaskFunction& mask, const Grid2D& grid,
                           double alias_threshold = kDefaultAliasThreshold);
ComplexVector inverse_mask_spectrum(const MaskSpectrum& spectrum);

// J1(x)/x with the limit value 1/2 at x = 0.
double jinc(double x);

// Continuous transform of an analytic mask at one angular spatial frequency.
// Apertures integrate 2 pi int_0^R J0(rho r) r dr by Gauss-Legendre quadrature;
// custom masks use a direct DFT sum. Cosine gratings have a purely singular
// spectrum and are rejected here (plane_wave_coupling handles them).
cd mask_transform_at(const MaskFunction& mask, double fx, double fy);

// Plane-wave coupling: entry (n', n) = |k n_z'| M~[k(n'-n)] dOmega_n, then all
// columns divided by one common factor so the largest column norm is 1.
CouplingMatrix plane_wave_coupling(const MaskFunction& mask, const PlaneWaveGrid& input,
                                   const PlaneWaveGrid& output, double wavenumber);

// Output directions for a plane wave through a circular aperture, truncated
// where the jinc envelope drops below `envelope_cutoff` of its peak.
struct ApertureDirections {
  PlaneWaveGrid grid;
  double cutoff_argument = 0.0;   // x where sqrt(2/pi) x^{-3/2} = cutoff * jinc(0)
  double truncated_weight = 0.0;  // J0(x)^2 + J1(x)^2: energy beyond the cutoff
};

ApertureDirections aperture_output_directions(const Direction& input, double radius,
                                              double wavenumber, double spacing,
                                              double envelope_cutoff = 1e-4);

// Translation-invariant response h(r - r0), stored both as the centered
// transfer function H and as the spatial kernel.
struct ImpulseResponse {
  Grid2D grid;
  ComplexVector transfer;     // H(f), multiplies the field spectrum
  ComplexVector kernel;       // h(x) = inverse transform of H
  double regularization = 0.0;
  double spectral_cap = 0.0;  // max |H|
  double lost_fraction = 0.0; // output energy where |F(E_in)| < eps
};

// Free-space identity element h = delta.
struct FreeSpace {};

using OpticalElement = std::variant<MaskFunction, ImpulseResponse, FreeSpace>;

SampledField apply_element(const OpticalElement& element, const SampledField& field);
SampledField apply_impulse_response(const ImpulseResponse& h, const SampledField& field);

inline constexpr double kDefaultTruncationThreshold = 0.05;

// Entry (n, m) = field_overlap(out mode n, element(in mode m)). Inputs whose
// captured norm drops below 1 - truncation_threshold are flagged, not fatal.
CouplingMatrix overlap_unitary(const OpticalElement& element, const ModeBasis& in_basis,
                               const ModeBasis& out_basis, const Grid2D& grid,
                               double truncation_threshold = kDefaultTruncationThreshold);

enum class UnitarizeMode {
  // Appends one ancilla loss mode per singular value below 1 and returns the
  // unitary dilation whose system block is the original matrix.
  FluxFaithful,
  // Closest unitary in Frobenius norm (polar factor). Requires a square
  // matrix with smallest singular value above 1e-6.
  Polar,
};

inline constexpr double kSingularThreshold = 1e-6;

UnitaryMatrix unitarize(const CouplingMatrix& c, UnitarizeMode mode = UnitarizeMode::FluxFaithful);

// CouplingMatrix view (rows = outputs) of a unitary network.
CouplingMatrix to_coupling(const UnitaryMatrix& u);

// Completes a matrix with orthonormal columns (an isometry) to a square
// unitary by appending orthonormal columns, each gauge-fixed so its first
// nonzero entry is real positive.
UnitaryMatrix complete_isometry(const CouplingMatrix& c, double tolerance = 1e-9);

// Two-port block of a cosine grating at normal incidence: the input plane
// wave couples to transverse directions +u and -u; the second input port is
// the orthogonal completion. Result ~ [[1, 1], [1, -1]] / sqrt(2).
struct GratingBlock {
  CouplingMatrix coupling;  // 2 x 1 plane-wave coupling
  UnitaryMatrix unitary;    // completed 2 x 2 network
};

GratingBlock compile_grating_block(const MaskFunction& grating);

// Removes the diagonal phase freedom D1 A D2: rows are rephased so the first
// column's first nonzero entries are real positive, then columns so the first
// row's are. Canonical for matrices with no zero entries.
MatrixXcd gauge_fixed(const MatrixXcd& a, double tolerance = 1e-12);

// Default regularization: 1e-6 * max |F(E_in)|.
inline constexpr double kDefaultRegularizationFactor = 1e-6;
inline constexpr double kDefaultMismatchThreshold = 1e-3;

// Tikhonov-regularized spectral division H = F(out) conj(F(in)) / (|F(in)|^2 + eps^2).
// eps <= 0 selects the default. Throws SpectralMismatch (value = lost fraction)
// when more than mismatch_threshold of the output energy sits where
// |F(in)| < eps.
ImpulseResponse inverse_design_response(const SampledField& e_in, const SampledField& e_out,
                                        double eps = 0.0,
                                        double mismatch_threshold = kDefaultMismatchThreshold);

}  // namespace diffent
