#pragma once

#include <array>
#include <vector>

#include "diffent/diffraction.hpp"
#include "diffent/fock.hpp"

namespace diffent {

// Two atoms, amplitudes over {gg, ge, eg, ee}; the first letter is the atom
// on output path 0.
struct AtomPair {
  enum Index { gg = 0, ge = 1, eg = 2, ee = 3 };
  std::array<cd, 4> amplitudes{};
  double efficiency = 1.0;

  double squared_norm() const;
  // |<bell|this>|^2 against (|eg> + |ge>)/sqrt(2).
  double bell_fidelity() const;
  double fidelity(const std::array<cd, 4>& target) const;
};

struct IfmResult {
  AtomPair atoms;             // normalized post-selected state on a null outcome
  double null_probability = 0.0;
  double detected_probability = 0.0;
};

// One photon enters input 0 of the two-port block. Each output path passes an
// atom that absorbs with amplitude sqrt(eta) and transmits with sqrt(1-eta);
// a bucket detector sees both paths. Throws InvalidEfficiency unless
// 0 < eta <= 1, DimensionMismatch unless the block is 2 x 2.
IfmResult ifm_project(double eta, const UnitaryMatrix& block);

// P(1,1) after sending |1,1> through a two-mode network.
double hom_coincidence(const UnitaryMatrix& u);

// Fidelity with (|N,0> + e^{i chi}|0,N>)/sqrt(2), maximized over chi.
double noon_fidelity(const MultimodeFockState& state, int n);

struct ScanPoint {
  double theta;
  double phi;
  double fidelity;  // best over the input splits m + n = N
};

struct ScanResult {
  int photons = 0;
  double best_fidelity = 0.0;
  double grid_best_fidelity = 0.0;  // before local refinement
  int best_m = 0;                   // input |m, N - m>
  double best_theta = 0.0;
  double best_phi = 0.0;
  int theta_steps = 0;
  int phi_steps = 0;
  bool refined = false;
  std::vector<ScanPoint> surface;   // filled when requested
};

struct ScanOptions {
  int theta_steps = 256;
  int phi_steps = 256;
  bool refine = true;
  bool keep_surface = false;
};

// Grid theta_i = pi i / theta_steps (i = 0..theta_steps), phi_j = 2 pi j /
// phi_steps, over every split m + n = N of two_mode_closed_form outputs.
// Ties keep the first point in (m, i, j) order. Refinement runs a
// golden-section search in theta around the best grid point of each split.
ScanResult noon_fidelity_scan(int photons, const ScanOptions& options = {});

}  // namespace diffent
