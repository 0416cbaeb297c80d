#include "diffent/agreement.hpp"

#include <algorithm>
#include <cmath>

#include "diffent/entanglement.hpp"
#include "diffent/error.hpp"

namespace diffent {
namespace {

constexpr double kOracleEntropyTolerance = 1e-6;
constexpr double kCovarianceTolerance = 1e-9;
constexpr int kMaxAttempts = 1000;

MatrixXd polar_real(const MatrixXd& a) {
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  MatrixXd a(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) a(i, j) = normal(rng);
  }
  return polar_real(a);
}

bool weak_entry(const MatrixXcd& u) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double m = std::abs(u(i));
    if (m > kCouplingTolerance && m < kWeakCoupling) return true;
  }
  return false;
}

ModeDescriptor random_coherent(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> radius(0.0, 1.5);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  return CoherentInput{std::polar(radius(rng), angle(rng))};
}

std::vector<ModeDescriptor> random_inputs(InputScenario s, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> strength(0.1, 0.4);
  std::uniform_real_distribution<double> signed_strength(-0.4, 0.4);
  std::vector<ModeDescriptor> out;
  switch (s) {
    case InputScenario::Coherent:
      for (int j = 0; j < n; ++j) out.push_back(random_coherent(rng));
      break;
    case InputScenario::EqualSqueezing: {
      const double lambda = strength(rng);
      for (int j = 0; j < n; ++j) out.push_back(SqueezedVacuumInput{lambda});
      break;
    }
    case InputScenario::UnequalSqueezing: {
      std::vector<double> l(n);
      do {
        for (double& x : l) x = signed_strength(rng);
      } while (*std::max_element(l.begin(), l.end()) - *std::min_element(l.begin(), l.end()) < 0.1);
      for (double x : l) out.push_back(SqueezedVacuumInput{x});
      break;
    }
    case InputScenario::Mixed: {
      std::uniform_int_distribution<int> pick(0, 3);
      std::uniform_int_distribution<int> photons(1, 2);
      for (int j = 0; j < n; ++j) {
        switch (pick(rng)) {
          case 0: out.push_back(random_coherent(rng)); break;
          case 1: out.push_back(SqueezedVacuumInput{signed_strength(rng)}); break;
          case 2: out.push_back(FockInput{photons(rng)}); break;
          default: out.push_back(VacuumInput{}); break;
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string to_string(NetworkKind k) {
  switch (k) {
    case NetworkKind::Haar: return "haar";
    case NetworkKind::RealOrthogonal: return "real-orthogonal";
    case NetworkKind::BlockDiagonal: return "block-diagonal";
    case NetworkKind::RephasedOrthogonal: return "rephased-orthogonal";
  }
  return "unknown";
}

std::string to_string(InputScenario s) {
  switch (s) {
    case InputScenario::Coherent: return "coherent";
    case InputScenario::EqualSqueezing: return "equal-squeezing";
    case InputScenario::UnequalSqueezing: return "unequal-squeezing";
    case InputScenario::Mixed: return "mixed";
  }
  return "unknown";
}

UnitaryMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  MatrixXcd a(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) a(i, j) = cd(normal(rng), normal(rng));
  }
  // Scale into the contractive range CouplingMatrix accepts; the polar
  // factor is unchanged.
  double worst = 0.0;
  for (int j = 0; j < n; ++j) worst = std::max(worst, a.col(j).norm());
  return unitarize(CouplingMatrix(a / worst), UnitarizeMode::Polar);
}

UnitaryMatrix random_network(NetworkKind kind, int n, std::mt19937_64& rng) {
  switch (kind) {
    case NetworkKind::Haar:
      return random_unitary(n, rng);
    case NetworkKind::RealOrthogonal:
      return UnitaryMatrix(random_orthogonal(n, rng).cast<cd>());
    case NetworkKind::BlockDiagonal: {
      std::uniform_int_distribution<int> cut(1, n - 1);
      const int a = cut(rng);
      MatrixXcd u = MatrixXcd::Zero(n, n);
      u.topLeftCorner(a, a) = random_unitary(a, rng).matrix();
      u.bottomRightCorner(n - a, n - a) = random_unitary(n - a, rng).matrix();
      return UnitaryMatrix(u);
    }
    case NetworkKind::RephasedOrthogonal: {
      std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
      MatrixXcd u = random_orthogonal(n, rng).cast<cd>();
      for (int k = 0; k < n; ++k) u.col(k) *= std::polar(1.0, angle(rng));
      return UnitaryMatrix(u);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown network kind");
}

TrialOutcome run_agreement_trial(int index, std::uint64_t root_seed) {
  TrialOutcome t;
  t.index = index;
  t.seed = derive_seed(root_seed, static_cast<std::uint64_t>(index));
  t.scenario = static_cast<InputScenario>(index % 4);
  t.network = static_cast<NetworkKind>((index / 4) % 4);

  std::mt19937_64 rng(t.seed);
  std::uniform_int_distribution<int> mode_count(2, 4);
  std::optional<UnitaryMatrix> u;
  BargmannInput bargmann;
  for (t.attempts = 1; t.attempts <= kMaxAttempts; ++t.attempts) {
    t.modes = mode_count(rng);
    u = random_network(t.network, t.modes, rng);
    t.inputs = random_inputs(t.scenario, t.modes, rng);
    std::uniform_int_distribution<int> mask(1, (1 << t.modes) - 1);
    const int bits = mask(rng);
    t.subset.clear();
    for (int k = 0; k < t.modes; ++k) {
      if (bits & (1 << k)) t.subset.push_back(k);
    }
    if (weak_entry(u->matrix())) continue;
    bargmann = BargmannInput::from_descriptors(t.inputs);
    const double cross = max_cross_term(bargmann, *u, t.subset);
    if (cross > kCoefficientTolerance && cross < kWeakCrossTerm) continue;
    break;
  }
  if (t.attempts > kMaxAttempts) {
    throw Error(ErrorCode::InvalidArgument, "could not draw an unambiguous agreement trial");
  }
  t.unitary = u->matrix();

  t.checker = check_no_entanglement(bargmann, *u, t.subset);

  InputStateSpec spec;
  spec.modes = t.inputs;
  spec.photon_cap = -1;
  const MultimodeFockState out = apply_unitary_factored(build_input_state(spec), *u);
  for (int k : t.subset) {
    std::vector<int> rest;
    for (int m = 0; m < t.modes; ++m) {
      if (m != k) rest.push_back(m);
    }
    const Bipartition part(rest, t.modes);
    t.max_entropy_bits = std::max(t.max_entropy_bits, entanglement_entropy(out, part));
  }
  t.fock_separable = t.max_entropy_bits < kOracleEntropyTolerance;
  t.agree = t.fock_separable == t.checker.separable;

  if (std::all_of(t.inputs.begin(), t.inputs.end(), is_gaussian)) {
    t.gaussian_checked = true;
    const GaussianState g = gaussian_covariance_propagate(gaussian_spec(t.inputs), *u);
    t.gaussian_separable = true;
    for (int k : t.subset) {
      if (!covariance_separable(g.covariance, Bipartition({k}, t.modes), kCovarianceTolerance)) {
        t.gaussian_separable = false;
      }
    }
    t.agree = t.agree && t.gaussian_separable == t.checker.separable;
  }
  return t;
}

AgreementSummary run_agreement_suite(int trials, std::uint64_t root_seed) {
  AgreementSummary s;
  s.root_seed = root_seed;
  for (int i = 0; i < trials; ++i) {
    s.trials.push_back(run_agreement_trial(i, root_seed));
    if (s.trials.back().agree) ++s.agreements;
    if (s.trials.back().gaussian_checked) ++s.gaussian_trials;
  }
  return s;
}

}  // namespace diffent
