#pragma once

#include <string>
#include <utility>
#include <vector>

#include "diffent/fock.hpp"

namespace diffent {

// Subset A of the modes (0-based, sorted); B is the complement.
class Bipartition {
 public:
  // Throws EmptyPartition when A or its complement is empty, InvalidArgument
  // for indices out of range.
  Bipartition(std::vector<int> subset, int mode_count);
  // "1,0,1" style membership mask.
  static Bipartition from_mask(const std::vector<bool>& mask);

  const std::vector<int>& subset() const noexcept { return a_; }
  const std::vector<int>& complement() const noexcept { return b_; }
  int mode_count() const noexcept { return mode_count_; }
  bool contains(int mode) const;
  // e.g. "110" for A = {0, 1} of three modes.
  std::string mask_string() const;

 private:
  std::vector<int> a_;
  std::vector<int> b_;
  int mode_count_;
};

struct ReducedDensity {
  std::vector<Occupation> basis;  // A tuples present in the support, lexicographic
  MatrixXcd rho;
};

// Partial trace over B. Throws EmptyPartition, DimensionMismatch.
ReducedDensity reduced_density(const MultimodeFockState& state, const Bipartition& part);

inline constexpr double kEntropyToleranceTruncated = 1e-6;
inline constexpr double kEntropyToleranceExact = 1e-9;

struct EntanglementReport {
  std::vector<double> schmidt_coefficients;  // descending
  double entropy_bits = 0.0;
  bool separable = true;
  double tolerance = 0.0;
};

EntanglementReport entanglement_report(const MultimodeFockState& state, const Bipartition& part,
                                       double tol = kEntropyToleranceTruncated);

// Entropy (bits) of the reduced state on A.
double entanglement_entropy(const MultimodeFockState& state, const Bipartition& part);

inline constexpr int kMaxScanModes = 12;

struct ScanEntry {
  Bipartition part;
  EntanglementReport report;
};

// One report per bipartition, enumerated as the subsets containing mode 0.
// Throws TooManyModes above twelve modes.
std::vector<ScanEntry> full_separability_scan(const MultimodeFockState& state,
                                              double tol = kEntropyToleranceTruncated);
bool fully_separable(const std::vector<ScanEntry>& scan);

struct SchmidtDecomposition {
  std::vector<Occupation> a_basis;
  std::vector<Occupation> b_basis;
  VectorXd coefficients;  // descending
  MatrixXcd a_vectors;    // columns over a_basis
  MatrixXcd b_vectors;    // columns over b_basis
};

SchmidtDecomposition schmidt_decomposition(const MultimodeFockState& state,
                                           const Bipartition& part);
MultimodeFockState reconstruct(const SchmidtDecomposition& s, const Bipartition& part);

}  // namespace diffent
