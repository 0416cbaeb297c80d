#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "diffent/fock.hpp"
#include "diffent/separability.hpp"

namespace diffent {

// Counter-based seed for trial `index` under `root` (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

enum class NetworkKind { Haar, RealOrthogonal, BlockDiagonal, RephasedOrthogonal };
enum class InputScenario { Coherent, EqualSqueezing, UnequalSqueezing, Mixed };

std::string to_string(NetworkKind k);
std::string to_string(InputScenario s);

// Polar factor of a complex Ginibre matrix.
UnitaryMatrix random_unitary(int n, std::mt19937_64& rng);
UnitaryMatrix random_network(NetworkKind kind, int n, std::mt19937_64& rng);

struct TrialOutcome {
  int index = 0;
  std::uint64_t seed = 0;
  int attempts = 1;  // draws needed to leave the ambiguous bands
  int modes = 0;
  NetworkKind network = NetworkKind::Haar;
  InputScenario scenario = InputScenario::Coherent;
  std::vector<ModeDescriptor> inputs;
  std::vector<int> subset;
  MatrixXcd unitary;

  SeparabilityVerdict checker;
  double max_entropy_bits = 0.0;  // over {k} | rest, k in subset
  bool fock_separable = false;
  bool gaussian_checked = false;
  bool gaussian_separable = false;
  bool agree = false;
};

struct AgreementSummary {
  std::uint64_t root_seed = 0;
  std::vector<TrialOutcome> trials;
  int agreements = 0;
  int gaussian_trials = 0;
  bool all_agree() const { return agreements == static_cast<int>(trials.size()); }
};

// Entries of |U(j,k)| in (1e-12, kWeakCoupling) or checker cross terms in
// (1e-12, kWeakCrossTerm) are redrawn: both verdict sides are then clear of
// their thresholds.
inline constexpr double kWeakCoupling = 0.02;
inline constexpr double kWeakCrossTerm = 1e-3;

TrialOutcome run_agreement_trial(int index, std::uint64_t root_seed);
AgreementSummary run_agreement_suite(int trials, std::uint64_t root_seed);

}  // namespace diffent
