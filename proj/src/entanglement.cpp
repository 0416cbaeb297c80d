#include "diffent/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "diffent/error.hpp"

namespace diffent {
namespace {

Occupation restrict(const Occupation& occ, const std::vector<int>& modes) {
  Occupation out;
  out.reserve(modes.size());
  for (int m : modes) out.push_back(occ[m]);
  return out;
}

void require_modes(const MultimodeFockState& state, const Bipartition& part) {
  if (state.mode_count() != part.mode_count()) {
    throw Error(ErrorCode::DimensionMismatch, "bipartition and state mode counts differ");
  }
}

// Amplitude matrix Psi(a, b) on the tuples present in the support.
struct Split {
  std::vector<Occupation> a_basis;
  std::vector<Occupation> b_basis;
  std::map<Occupation, int> a_index;
  std::map<Occupation, int> b_index;
};

Split split_support(const MultimodeFockState& state, const Bipartition& part) {
  Split s;
  for (const auto& [occ, amp] : state.amplitudes()) {
    s.a_index.emplace(restrict(occ, part.subset()), 0);
    s.b_index.emplace(restrict(occ, part.complement()), 0);
  }
  for (auto& [occ, i] : s.a_index) {
    i = static_cast<int>(s.a_basis.size());
    s.a_basis.push_back(occ);
  }
  for (auto& [occ, i] : s.b_index) {
    i = static_cast<int>(s.b_basis.size());
    s.b_basis.push_back(occ);
  }
  return s;
}

// rho_A built from the groups sharing a B tuple.
MatrixXcd reduced_on(const MultimodeFockState& state, const std::vector<int>& keep,
                     const std::vector<int>& trace, const std::map<Occupation, int>& index) {
  std::map<Occupation, std::vector<std::pair<int, cd>>> groups;
  for (const auto& [occ, amp] : state.amplitudes()) {
    groups[restrict(occ, trace)].push_back({index.at(restrict(occ, keep)), amp});
  }
  const auto n = static_cast<Eigen::Index>(index.size());
  MatrixXcd rho = MatrixXcd::Zero(n, n);
  for (const auto& [b, entries] : groups) {
    for (const auto& [i, ai] : entries) {
      for (const auto& [j, aj] : entries) rho(i, j) += ai * std::conj(aj);
    }
  }
  return rho;
}

std::vector<double> spectrum(const MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  std::vector<double> p(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  for (double& x : p) x = std::max(x, 0.0);
  std::sort(p.begin(), p.end(), std::greater<>());
  return p;
}

double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return std::max(h, 0.0);
}

}  // namespace

Bipartition::Bipartition(std::vector<int> subset, int mode_count) : mode_count_(mode_count) {
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  for (int m : subset) {
    if (m < 0 || m >= mode_count) {
      std::ostringstream os;
      os << "mode index " << m << " outside 0.." << mode_count - 1;
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
  }
  if (subset.empty()) throw Error(ErrorCode::EmptyPartition, "subset A is empty");
  if (static_cast<int>(subset.size()) == mode_count) {
    throw Error(ErrorCode::EmptyPartition, "complement of A is empty");
  }
  a_ = std::move(subset);
  for (int m = 0; m < mode_count; ++m) {
    if (!std::binary_search(a_.begin(), a_.end(), m)) b_.push_back(m);
  }
}

Bipartition Bipartition::from_mask(const std::vector<bool>& mask) {
  std::vector<int> a;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) a.push_back(static_cast<int>(i));
  }
  return Bipartition(std::move(a), static_cast<int>(mask.size()));
}

bool Bipartition::contains(int mode) const { return std::binary_search(a_.begin(), a_.end(), mode); }

std::string Bipartition::mask_string() const {
  std::string s(mode_count_, '0');
  for (int m : a_) s[m] = '1';
  return s;
}

ReducedDensity reduced_density(const MultimodeFockState& state, const Bipartition& part) {
  require_modes(state, part);
  Split s = split_support(state, part);
  ReducedDensity out;
  out.rho = reduced_on(state, part.subset(), part.complement(), s.a_index);
  out.basis = std::move(s.a_basis);
  return out;
}

double entanglement_entropy(const MultimodeFockState& state, const Bipartition& part) {
  return entanglement_report(state, part, kEntropyToleranceTruncated).entropy_bits;
}

EntanglementReport entanglement_report(const MultimodeFockState& state, const Bipartition& part,
                                       double tol) {
  require_modes(state, part);
  const Split s = split_support(state, part);
  // The nonzero spectrum is shared by both sides; diagonalize the smaller.
  const bool use_a = s.a_basis.size() <= s.b_basis.size();
  const MatrixXcd rho = use_a ? reduced_on(state, part.subset(), part.complement(), s.a_index)
                              : reduced_on(state, part.complement(), part.subset(), s.b_index);
  const std::vector<double> p = spectrum(rho);
  EntanglementReport r;
  r.tolerance = tol;
  r.entropy_bits = entropy_bits(p);
  r.separable = r.entropy_bits < tol;
  r.schmidt_coefficients.reserve(p.size());
  for (double x : p) r.schmidt_coefficients.push_back(std::sqrt(x));
  return r;
}

std::vector<ScanEntry> full_separability_scan(const MultimodeFockState& state, double tol) {
  const int n = state.mode_count();
  if (n > kMaxScanModes) {
    std::ostringstream os;
    os << n << " modes exceeds the scan limit of " << kMaxScanModes;
    throw Error(ErrorCode::TooManyModes, os.str());
  }
  std::vector<ScanEntry> out;
  const unsigned count = 1u << (n - 1);
  for (unsigned bits = 0; bits + 1 < count; ++bits) {
    // Mode 0 always in A; bits choose among modes 1..n-1, never all of them.
    std::vector<int> a{0};
    for (int m = 1; m < n; ++m) {
      if (bits & (1u << (m - 1))) a.push_back(m);
    }
    Bipartition part(std::move(a), n);
    out.push_back({part, entanglement_report(state, part, tol)});
  }
  return out;
}

bool fully_separable(const std::vector<ScanEntry>& scan) {
  return std::all_of(scan.begin(), scan.end(), [](const ScanEntry& e) { return e.report.separable; });
}

SchmidtDecomposition schmidt_decomposition(const MultimodeFockState& state,
                                           const Bipartition& part) {
  require_modes(state, part);
  Split s = split_support(state, part);
  MatrixXcd psi = MatrixXcd::Zero(static_cast<Eigen::Index>(s.a_basis.size()),
                                  static_cast<Eigen::Index>(s.b_basis.size()));
  for (const auto& [occ, amp] : state.amplitudes()) {
    psi(s.a_index.at(restrict(occ, part.subset())), s.b_index.at(restrict(occ, part.complement()))) =
        amp;
  }
  Eigen::BDCSVD<MatrixXcd> svd(psi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition out;
  out.a_basis = std::move(s.a_basis);
  out.b_basis = std::move(s.b_basis);
  out.coefficients = svd.singularValues();
  out.a_vectors = svd.matrixU();
  out.b_vectors = svd.matrixV().conjugate();
  return out;
}

MultimodeFockState reconstruct(const SchmidtDecomposition& s, const Bipartition& part) {
  MultimodeFockState out(part.mode_count());
  Occupation occ(part.mode_count(), 0);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(s.a_basis.size()); ++i) {
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(s.b_basis.size()); ++j) {
      cd amp{};
      for (Eigen::Index r = 0; r < s.coefficients.size(); ++r) {
        amp += s.coefficients(r) * s.a_vectors(i, r) * s.b_vectors(j, r);
      }
      if (std::abs(amp) < out.prune_threshold()) continue;
      for (std::size_t q = 0; q < part.subset().size(); ++q) occ[part.subset()[q]] = s.a_basis[i][q];
      for (std::size_t q = 0; q < part.complement().size(); ++q) {
        occ[part.complement()[q]] = s.b_basis[j][q];
      }
      out.set(occ, amp);
    }
  }
  return out;
}

}  // namespace diffent
