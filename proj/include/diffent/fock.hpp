#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "diffent/diffraction.hpp"
#include "diffent/types.hpp"

namespace diffent {

using Occupation = std::vector<int>;

inline constexpr double kDefaultPruneThreshold = 1e-14;

// Sparse pure state over multimode occupation tuples. The map keeps tuples in
// lexicographic order, which is also the serialization order.
class MultimodeFockState {
 public:
  using AmplitudeMap = std::map<Occupation, cd>;

  explicit MultimodeFockState(int mode_count, double prune_threshold = kDefaultPruneThreshold);
  static MultimodeFockState basis(const Occupation& occupation);

  int mode_count() const noexcept { return mode_count_; }
  double prune_threshold() const noexcept { return prune_threshold_; }
  const AmplitudeMap& amplitudes() const noexcept { return amplitudes_; }
  std::size_t support_size() const noexcept { return amplitudes_.size(); }

  cd amplitude(const Occupation& occupation) const;
  void add(const Occupation& occupation, cd amplitude);
  void set(const Occupation& occupation, cd amplitude);

  double squared_norm() const;
  void normalize();
  // Drops amplitudes with magnitude below the prune threshold.
  void prune();

  std::set<int> photon_sectors() const;
  int max_photons() const;

  // Squared norm discarded by Fock-space truncation when the state was built.
  double truncation_error() const noexcept { return truncation_error_; }
  void set_truncation_error(double e) noexcept { truncation_error_ = e; }

 private:
  void check(const Occupation& occupation) const;

  int mode_count_;
  double prune_threshold_;
  double truncation_error_ = 0.0;
  AmplitudeMap amplitudes_;
};

struct FockInput {
  int n = 0;
};
struct CoherentInput {
  cd alpha;
};
// S(lambda) = exp[lambda (a^dagger^2 - a^2) / 2] acting on vacuum.
struct SqueezedVacuumInput {
  double lambda = 0.0;
};
struct VacuumInput {};

using ModeDescriptor = std::variant<FockInput, CoherentInput, SqueezedVacuumInput, VacuumInput>;

std::string to_string(const ModeDescriptor& d);
bool is_gaussian(const ModeDescriptor& d);

inline constexpr double kDefaultTruncationTolerance = 1e-10;

struct InputStateSpec {
  std::vector<ModeDescriptor> modes;
  // Per-mode Fock cutoff for coherent and squeezed descriptors; 0 picks the
  // smallest cutoff meeting the tolerance.
  int cutoff = 0;
  // Drop product terms with more photons than this; 0 means no cap, -1 picks
  // the smallest cap meeting the tolerance.
  int photon_cap = 0;
  double truncation_tolerance = kDefaultTruncationTolerance;
};

// Single-mode amplitudes <n|psi> for n = 0..cutoff.
ComplexVector single_mode_amplitudes(const ModeDescriptor& d, int cutoff);
// Exact squared norm beyond the cutoff; 0 for Fock and vacuum, which are
// never truncated.
double single_mode_tail(const ModeDescriptor& d, int cutoff);
// Smallest cutoff whose tail is <= tolerance.
int minimal_cutoff(const ModeDescriptor& d, double tolerance);

// Product state with renormalization after truncation. Throws NonPhysical
// (negative Fock number, |lambda| too large) or CutoffTooSmall whose value is
// the smallest cutoff that satisfies the tolerance.
MultimodeFockState build_input_state(const InputStateSpec& spec);

struct ApplyOptions {
  bool renormalize = true;
  double prune_threshold = kDefaultPruneThreshold;
};

// Substitutes a_j^dagger -> sum_k U(j,k) a_k^dagger in every basis monomial
// and collects the expanded terms. Single-threaded and deterministic.
// Cost grows like prod_j C(n_j + M - 1, M - 1) per input tuple; intended for
// up to about six photons in six modes. Throws DimensionMismatch.
MultimodeFockState apply_unitary(const MultimodeFockState& state, const UnitaryMatrix& u,
                                 const ApplyOptions& options = {});

// Same map computed through a two-mode rotation factorization of U; each
// rotation acts densely within fixed-photon-number blocks. Suited to large
// truncated Gaussian inputs.
MultimodeFockState apply_unitary_factored(const MultimodeFockState& state, const UnitaryMatrix& u,
                                          const ApplyOptions& options = {});

// Two-mode rotation acting on modes (a, b): z_a -> g(0,0) z_a + g(0,1) z_b,
// z_b -> g(1,0) z_a + g(1,1) z_b.
struct ModeRotation {
  int a;
  int b;
  Eigen::Matrix2cd g;
};

struct RotationFactorization {
  std::vector<ModeRotation> rotations;  // applied first to last
  VectorXcd phases;                     // final diagonal z_j -> phases(j) z_j
};

// U = R_1 R_2 ... R_r diag(phases), each R_t an embedded two-mode unitary.
RotationFactorization factorize_unitary(const UnitaryMatrix& u);

// [[cos(theta/2), e^{i phi} sin(theta/2)], [-e^{-i phi} sin(theta/2), cos(theta/2)]]
UnitaryMatrix su2_splitter(double theta, double phi);

// Normalized output for |m>|n> through su2_splitter(theta, phi), from the
// closed-form double sum over (k, l).
MultimodeFockState two_mode_closed_form(int m, int n, double theta, double phi);

// |<a|b>|^2. Throws DimensionMismatch.
double state_fidelity(const MultimodeFockState& a, const MultimodeFockState& b);
cd inner_product(const MultimodeFockState& a, const MultimodeFockState& b);

// sqrt(n!) for n up to 300.
double sqrt_factorial(int n);
double binomial(int n, int k);

}  // namespace diffent
