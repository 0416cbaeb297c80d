#include "diffent/separability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "diffent/error.hpp"

namespace diffent {
namespace {

void validate_subset(const std::vector<int>& subset, int n) {
  if (subset.empty()) throw Error(ErrorCode::EmptyPartition, "output subset is empty");
  for (int k : subset) {
    if (k < 0 || k >= n) {
      std::ostringstream os;
      os << "output mode " << k << " outside 0.." << n - 1;
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
  }
}

int output_support(const UnitaryMatrix& u, int j, double tol) {
  int count = 0;
  for (int k = 0; k < u.dimension(); ++k) {
    if (std::abs(u(j, k)) > tol) ++count;
  }
  return count;
}

}  // namespace

cd BargmannMode::at(int d) const {
  return d >= 0 && d < static_cast<int>(coefficients.size()) ? coefficients[d] : cd{};
}

BargmannMode BargmannMode::from_descriptor(const ModeDescriptor& d, int order) {
  BargmannMode m;
  m.coefficients.assign(std::max(order, 2) + 1, cd{});
  m.label = to_string(d);
  if (const auto* f = std::get_if<FockInput>(&d)) {
    if (f->n < 0) throw Error(ErrorCode::NonPhysical, "negative Fock number");
    m.non_gaussian = f->n > 0;
  } else if (const auto* c = std::get_if<CoherentInput>(&d)) {
    m.coefficients[0] = -0.5 * std::norm(c->alpha);
    m.coefficients[1] = c->alpha;
  } else if (const auto* s = std::get_if<SqueezedVacuumInput>(&d)) {
    m.coefficients[0] = -0.5 * std::log(std::cosh(s->lambda));
    m.coefficients[2] = squeezing_to_bargmann(s->lambda);
  }
  return m;
}

BargmannInput BargmannInput::from_descriptors(const std::vector<ModeDescriptor>& descriptors,
                                              int order) {
  BargmannInput in;
  for (const auto& d : descriptors) in.modes.push_back(BargmannMode::from_descriptor(d, order));
  return in;
}

double squeezing_to_bargmann(double lambda) { return 0.5 * std::tanh(lambda); }

double bargmann_to_squeezing(double c) {
  if (!(std::abs(c) < 0.5)) throw Error(ErrorCode::NonPhysical, "|lambda^(2)| must be below 1/2");
  return std::atanh(2.0 * c);
}

std::vector<int> coupled_input_modes(const UnitaryMatrix& u, const std::vector<int>& out_subset,
                                     double tol_couple) {
  std::vector<int> out;
  for (int j = 0; j < u.dimension(); ++j) {
    for (int k : out_subset) {
      if (std::abs(u(j, k)) > tol_couple) {
        out.push_back(j);
        break;
      }
    }
  }
  return out;
}

double max_cross_term(const BargmannInput& input, const UnitaryMatrix& u,
                      const std::vector<int>& out_subset) {
  double worst = 0.0;
  for (int k : out_subset) {
    for (int k2 = 0; k2 < u.dimension(); ++k2) {
      if (k2 == k) continue;
      cd c{};
      for (int j = 0; j < u.dimension(); ++j) c += input.modes[j].at(2) * u(j, k) * u(j, k2);
      worst = std::max(worst, std::abs(c));
    }
  }
  return worst;
}

SeparabilityVerdict check_no_entanglement(const BargmannInput& input, const UnitaryMatrix& u,
                                          const std::vector<int>& out_subset,
                                          const CheckerTolerances& tol) {
  const int n = u.dimension();
  if (input.mode_count() != n) {
    std::ostringstream os;
    os << input.mode_count() << " input modes for a " << n << "-mode network";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  validate_subset(out_subset, n);
  for (int j = 0; j < n; ++j) {
    for (const cd& c : input.modes[j].coefficients) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw Error(ErrorCode::NonAnalyticInput,
                    "input mode " + std::to_string(j) + " has a non-finite Maclaurin coefficient");
      }
    }
  }

  SeparabilityVerdict v;
  v.coupled_modes = coupled_input_modes(u, out_subset, tol.couple);
  auto fail = [&v](Witness w) {
    v.separable = false;
    v.witness = std::move(w);
    return v;
  };

  // Orders above two on a coupled mode that spreads over several outputs.
  for (int j : v.coupled_modes) {
    if (output_support(u, j, tol.couple) < 2) continue;
    const BargmannMode& m = input.modes[j];
    if (m.non_gaussian) {
      return fail({3, j, -1, -1, 1.0, "non-Gaussian input " + m.label + " on a coupled mode"});
    }
    for (int d = 3; d < static_cast<int>(m.coefficients.size()); ++d) {
      const double r = std::abs(m.coefficients[d]);
      if (r > tol.coefficient) {
        return fail({d, j, -1, -1, r, "order " + std::to_string(d) + " coefficient on a coupled mode"});
      }
    }
  }

  // Order two, cross terms: sum_j lambda_j U(j,k) U(j,k') must vanish.
  for (int k : out_subset) {
    for (int k2 = 0; k2 < n; ++k2) {
      if (k2 == k) continue;
      cd c{};
      for (int j = 0; j < n; ++j) c += input.modes[j].at(2) * u(j, k) * u(j, k2);
      if (std::abs(c) > tol.coefficient) {
        std::ostringstream os;
        os << "order-2 cross term between outputs " << k << " and " << k2;
        return fail({2, -1, k, k2, std::abs(c), os.str()});
      }
    }
  }

  // Order two, diagonal: lambda_j U(j,k) = xi_k conj(U(j,k)) for every coupled j.
  for (int k : out_subset) {
    cd xi{};
    for (int j = 0; j < n; ++j) xi += input.modes[j].at(2) * u(j, k) * u(j, k);
    for (int j : v.coupled_modes) {
      if (std::abs(u(j, k)) <= tol.couple) continue;
      const double r = std::abs(input.modes[j].at(2) * u(j, k) - xi * std::conj(u(j, k)));
      if (r > tol.coefficient) {
        std::ostringstream os;
        os << "squeezing of input " << j << " inconsistent with output " << k;
        return fail({2, j, k, -1, r, os.str()});
      }
    }
  }
  return v;
}

GaussianState gaussian_input(const std::vector<GaussianModeSpec>& spec) {
  const int n = static_cast<int>(spec.size());
  GaussianState g;
  g.mean = VectorXd::Zero(2 * n);
  g.covariance = MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    g.mean(j) = 2.0 * spec[j].alpha.real();
    g.mean(n + j) = 2.0 * spec[j].alpha.imag();
    g.covariance(j, j) = std::exp(2.0 * spec[j].lambda);
    g.covariance(n + j, n + j) = std::exp(-2.0 * spec[j].lambda);
  }
  return g;
}

std::vector<GaussianModeSpec> gaussian_spec(const std::vector<ModeDescriptor>& descriptors) {
  std::vector<GaussianModeSpec> out;
  for (const auto& d : descriptors) {
    if (!is_gaussian(d)) {
      throw Error(ErrorCode::InvalidArgument, "descriptor " + to_string(d) + " is not Gaussian");
    }
    GaussianModeSpec s;
    if (const auto* c = std::get_if<CoherentInput>(&d)) s.alpha = c->alpha;
    if (const auto* q = std::get_if<SqueezedVacuumInput>(&d)) s.lambda = q->lambda;
    out.push_back(s);
  }
  return out;
}

MatrixXd passive_symplectic(const UnitaryMatrix& u) {
  const int n = u.dimension();
  const MatrixXcd t = u.matrix().transpose();
  MatrixXd s(2 * n, 2 * n);
  s.topLeftCorner(n, n) = t.real();
  s.topRightCorner(n, n) = -t.imag();
  s.bottomLeftCorner(n, n) = t.imag();
  s.bottomRightCorner(n, n) = t.real();
  return s;
}

GaussianState gaussian_covariance_propagate(const std::vector<GaussianModeSpec>& spec,
                                            const UnitaryMatrix& u) {
  if (static_cast<int>(spec.size()) != u.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "Gaussian spec and network sizes differ");
  }
  const GaussianState in = gaussian_input(spec);
  const MatrixXd s = passive_symplectic(u);
  GaussianState out;
  out.mean = s * in.mean;
  out.covariance = s * in.covariance * s.transpose();
  return out;
}

double purity_residual(const MatrixXd& sigma) {
  const auto n = sigma.rows() / 2;
  MatrixXd omega = MatrixXd::Zero(2 * n, 2 * n);
  omega.topRightCorner(n, n).setIdentity();
  omega.bottomLeftCorner(n, n) = -MatrixXd::Identity(n, n);
  return (sigma * omega * sigma - omega).norm();
}

bool covariance_separable(const MatrixXd& sigma, const Bipartition& part, double tol) {
  const int n = part.mode_count();
  if (sigma.rows() != 2 * n || sigma.cols() != 2 * n) {
    throw Error(ErrorCode::DimensionMismatch, "covariance size does not match the bipartition");
  }
  const double residual = purity_residual(sigma);
  if (residual > kPurityTolerance * std::max(1.0, sigma.squaredNorm())) {
    std::ostringstream os;
    os << "purity residual " << residual;
    throw Error(ErrorCode::NotPure, os.str(), residual);
  }
  for (int a : part.subset()) {
    for (int b : part.complement()) {
      for (int qa : {a, n + a}) {
        for (int qb : {b, n + b}) {
          if (std::abs(sigma(qa, qb)) > tol || std::abs(sigma(qb, qa)) > tol) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace diffent
