#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diffent/diffraction.hpp"
#include "diffent/entanglement.hpp"
#include "diffent/fock.hpp"

namespace diffent {

inline constexpr int kDefaultBargmannOrder = 4;
inline constexpr double kCouplingTolerance = 1e-12;
inline constexpr double kCoefficientTolerance = 1e-12;

// Maclaurin coefficients of log G_j(z) for one input mode, d = 0..order.
struct BargmannMode {
  std::vector<cd> coefficients;
  // Set for Fock(n >= 1): the Bargmann function vanishes at the origin, so
  // no log-expansion exists and the mode counts as non-Gaussian.
  bool non_gaussian = false;
  std::string label;

  cd at(int d) const;
  static BargmannMode from_descriptor(const ModeDescriptor& d, int order = kDefaultBargmannOrder);
};

struct BargmannInput {
  std::vector<BargmannMode> modes;

  int mode_count() const noexcept { return static_cast<int>(modes.size()); }
  static BargmannInput from_descriptors(const std::vector<ModeDescriptor>& descriptors,
                                        int order = kDefaultBargmannOrder);
};

// The d = 2 coefficient of S(lambda)|0>: tanh(lambda) / 2.
double squeezing_to_bargmann(double lambda);
// Inverse map, for |c| < 1/2.
double bargmann_to_squeezing(double c);

// { j : |U(j,k)| > tol for some k in out_subset }, sorted.
std::vector<int> coupled_input_modes(const UnitaryMatrix& u, const std::vector<int>& out_subset,
                                     double tol_couple = kCouplingTolerance);

struct Witness {
  int order = 0;       // violated Maclaurin order
  int input_mode = -1; // j, or -1 for the cross-term condition
  int output_mode = -1;
  int other_output_mode = -1;  // k' of the cross term
  double residual = 0.0;
  std::string description;
};

struct SeparabilityVerdict {
  bool separable = true;
  std::optional<Witness> witness;
  std::vector<int> coupled_modes;
};

struct CheckerTolerances {
  double couple = kCouplingTolerance;
  double coefficient = kCoefficientTolerance;
};

// Decides whether every output mode in out_subset is left in a product with
// all remaining output modes. Throws DimensionMismatch, EmptyPartition,
// InvalidArgument (index out of range), NonAnalyticInput.
SeparabilityVerdict check_no_entanglement(const BargmannInput& input, const UnitaryMatrix& u,
                                          const std::vector<int>& out_subset,
                                          const CheckerTolerances& tol = {});

// Largest |sum_j lambda_j^(2) U(j,k) U(j,k')| over k in out_subset, k' != k.
double max_cross_term(const BargmannInput& input, const UnitaryMatrix& u,
                      const std::vector<int>& out_subset);

struct GaussianModeSpec {
  cd alpha;
  double lambda = 0.0;
};

// Quadratures ordered (x_1..x_N, p_1..p_N), x = a + a^dagger, vacuum = I.
struct GaussianState {
  VectorXd mean;
  MatrixXd covariance;
  int mode_count() const noexcept { return static_cast<int>(mean.size() / 2); }
};

GaussianState gaussian_input(const std::vector<GaussianModeSpec>& spec);
// Throws InvalidArgument for descriptors outside the Gaussian class.
std::vector<GaussianModeSpec> gaussian_spec(const std::vector<ModeDescriptor>& descriptors);
// Passive symplectic of the network, acting on the output amplitudes U^T alpha.
MatrixXd passive_symplectic(const UnitaryMatrix& u);
GaussianState gaussian_covariance_propagate(const std::vector<GaussianModeSpec>& spec,
                                            const UnitaryMatrix& u);

inline constexpr double kPurityTolerance = 1e-8;

// ||sigma Omega sigma - Omega||_F
double purity_residual(const MatrixXd& sigma);

// True iff every covariance entry linking A to its complement is <= tol.
// Throws NotPure, DimensionMismatch.
bool covariance_separable(const MatrixXd& sigma, const Bipartition& part, double tol = 1e-9);

}  // namespace diffent
