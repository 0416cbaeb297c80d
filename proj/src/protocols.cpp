#include "diffent/protocols.hpp"

#include <cmath>
#include <sstream>

#include "diffent/error.hpp"

namespace diffent {

double AtomPair::squared_norm() const {
  double s = 0.0;
  for (const cd& a : amplitudes) s += std::norm(a);
  return s;
}

double AtomPair::fidelity(const std::array<cd, 4>& target) const {
  cd s{};
  for (int i = 0; i < 4; ++i) s += std::conj(target[i]) * amplitudes[i];
  return std::norm(s);
}

double AtomPair::bell_fidelity() const {
  const double h = 1.0 / std::sqrt(2.0);
  return fidelity({cd{}, cd{h}, cd{h}, cd{}});
}

IfmResult ifm_project(double eta, const UnitaryMatrix& block) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    std::ostringstream os;
    os << "efficiency " << eta << " outside (0, 1]";
    throw Error(ErrorCode::InvalidEfficiency, os.str(), eta);
  }
  if (block.dimension() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "interaction-free projection needs a 2-port block");
  }
  const double absorb = std::sqrt(eta);
  const double pass = std::sqrt(1.0 - eta);
  // Branches after the block: path k carries amplitude block(0, k).
  IfmResult r;
  r.atoms.efficiency = eta;
  r.atoms.amplitudes[AtomPair::eg] = absorb * block(0, 0);
  r.atoms.amplitudes[AtomPair::ge] = absorb * block(0, 1);
  r.null_probability = r.atoms.squared_norm();
  r.detected_probability = std::norm(pass * block(0, 0)) + std::norm(pass * block(0, 1));
  const double norm = std::sqrt(r.null_probability);
  for (cd& a : r.atoms.amplitudes) a /= norm;
  return r;
}

double hom_coincidence(const UnitaryMatrix& u) {
  if (u.dimension() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "coincidence probability needs a 2-mode network");
  }
  const auto out = apply_unitary(MultimodeFockState::basis({1, 1}), u, {.renormalize = false});
  return std::norm(out.amplitude({1, 1}));
}

double noon_fidelity(const MultimodeFockState& state, int n) {
  if (state.mode_count() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "NOON fidelity needs a 2-mode state");
  }
  const double s = std::abs(state.amplitude({n, 0})) + std::abs(state.amplitude({0, n}));
  return 0.5 * s * s;
}

ScanResult noon_fidelity_scan(int photons, const ScanOptions& options) {
  if (photons < 1) throw Error(ErrorCode::InvalidArgument, "photon number must be at least 1");
  if (options.theta_steps < 1 || options.phi_steps < 1) {
    throw Error(ErrorCode::InvalidArgument, "scan needs at least one step per axis");
  }
  ScanResult r;
  r.photons = photons;
  r.theta_steps = options.theta_steps;
  r.phi_steps = options.phi_steps;
  r.best_fidelity = -1.0;

  auto eval = [photons](int m, double theta, double phi) {
    return noon_fidelity(two_mode_closed_form(m, photons - m, theta, phi), photons);
  };

  std::vector<int> best_i(photons + 1, 0);
  std::vector<int> best_j(photons + 1, 0);
  std::vector<double> best_f(photons + 1, -1.0);
  if (options.keep_surface) {
    r.surface.reserve(static_cast<std::size_t>(options.theta_steps + 1) * options.phi_steps);
  }
  for (int i = 0; i <= options.theta_steps; ++i) {
    const double theta = kPi * i / options.theta_steps;
    for (int j = 0; j < options.phi_steps; ++j) {
      const double phi = 2.0 * kPi * j / options.phi_steps;
      double point = -1.0;
      for (int m = 0; m <= photons; ++m) {
        const double f = eval(m, theta, phi);
        point = std::max(point, f);
        if (f > best_f[m]) {
          best_f[m] = f;
          best_i[m] = i;
          best_j[m] = j;
        }
      }
      if (options.keep_surface) r.surface.push_back({theta, phi, point});
    }
  }
  for (int m = 0; m <= photons; ++m) {
    if (best_f[m] > r.best_fidelity) {
      r.best_fidelity = best_f[m];
      r.best_m = m;
      r.best_theta = kPi * best_i[m] / options.theta_steps;
      r.best_phi = 2.0 * kPi * best_j[m] / options.phi_steps;
    }
  }
  r.grid_best_fidelity = r.best_fidelity;
  if (!options.refine) return r;

  r.refined = true;
  const double step = kPi / options.theta_steps;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int m = 0; m <= photons; ++m) {
    const double phi = 2.0 * kPi * best_j[m] / options.phi_steps;
    const double centre = kPi * best_i[m] / options.theta_steps;
    double lo = std::max(0.0, centre - step);
    double hi = std::min(kPi, centre + step);
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = eval(m, x1, phi);
    double f2 = eval(m, x2, phi);
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = eval(m, x2, phi);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = eval(m, x1, phi);
      }
    }
    const double theta = 0.5 * (lo + hi);
    const double f = eval(m, theta, phi);
    if (f > r.best_fidelity) {
      r.best_fidelity = f;
      r.best_m = m;
      r.best_theta = theta;
      r.best_phi = phi;
    }
  }
  return r;
}

}  // namespace diffent
