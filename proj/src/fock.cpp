#include "diffent/fock.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "diffent/error.hpp"

namespace diffent {
namespace {

constexpr int kMaxFactorial = 300;

const std::array<double, kMaxFactorial + 1>& sqrt_factorial_table() {
  static const auto table = [] {
    std::array<double, kMaxFactorial + 1> t{};
    t[0] = 1.0;
    for (int n = 1; n <= kMaxFactorial; ++n) t[n] = t[n - 1] * std::sqrt(double(n));
    return t;
  }();
  return table;
}

double sqrt_factorial_product(const Occupation& occ) {
  double p = 1.0;
  for (int n : occ) p *= sqrt_factorial(n);
  return p;
}

using Polynomial = std::map<Occupation, cd>;

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  Occupation key;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      key = ma;
      for (std::size_t i = 0; i < key.size(); ++i) key[i] += mb[i];
      out[key] += ca * cb;
    }
  }
  return out;
}

void require_dimension(const MultimodeFockState& state, const UnitaryMatrix& u) {
  if (u.dimension() != state.mode_count()) {
    std::ostringstream os;
    os << "unitary dimension " << u.dimension() << " != mode count " << state.mode_count();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

MultimodeFockState finish(MultimodeFockState out, const MultimodeFockState& in,
                          const ApplyOptions& options) {
  out.prune();
  if (options.renormalize && out.support_size() > 0) out.normalize();
  out.set_truncation_error(in.truncation_error());
  return out;
}

double squeezing_tanh(const ModeDescriptor& d) {
  return std::tanh(std::get<SqueezedVacuumInput>(d).lambda);
}

}  // namespace

double sqrt_factorial(int n) {
  if (n < 0 || n > kMaxFactorial) {
    throw Error(ErrorCode::InvalidArgument, "photon number outside the supported range");
  }
  return sqrt_factorial_table()[n];
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

MultimodeFockState::MultimodeFockState(int mode_count, double prune_threshold)
    : mode_count_(mode_count), prune_threshold_(prune_threshold) {
  if (mode_count < 1) throw Error(ErrorCode::InvalidArgument, "state needs at least one mode");
}

MultimodeFockState MultimodeFockState::basis(const Occupation& occupation) {
  MultimodeFockState s(static_cast<int>(occupation.size()));
  s.set(occupation, 1.0);
  return s;
}

void MultimodeFockState::check(const Occupation& occupation) const {
  if (static_cast<int>(occupation.size()) != mode_count_) {
    throw Error(ErrorCode::DimensionMismatch, "occupation tuple has the wrong length");
  }
  for (int n : occupation) {
    if (n < 0) throw Error(ErrorCode::NonPhysical, "negative occupation number");
  }
}

cd MultimodeFockState::amplitude(const Occupation& occupation) const {
  const auto it = amplitudes_.find(occupation);
  return it == amplitudes_.end() ? cd{} : it->second;
}

void MultimodeFockState::add(const Occupation& occupation, cd amplitude) {
  check(occupation);
  amplitudes_[occupation] += amplitude;
}

void MultimodeFockState::set(const Occupation& occupation, cd amplitude) {
  check(occupation);
  amplitudes_[occupation] = amplitude;
}

double MultimodeFockState::squared_norm() const {
  double s = 0.0;
  for (const auto& [occ, a] : amplitudes_) s += std::norm(a);
  return s;
}

void MultimodeFockState::normalize() {
  const double n = std::sqrt(squared_norm());
  if (!(n > 0.0)) throw Error(ErrorCode::InvalidArgument, "cannot normalize the zero state");
  for (auto& [occ, a] : amplitudes_) a /= n;
}

void MultimodeFockState::prune() {
  std::erase_if(amplitudes_, [this](const auto& kv) { return std::abs(kv.second) < prune_threshold_; });
}

std::set<int> MultimodeFockState::photon_sectors() const {
  std::set<int> s;
  for (const auto& [occ, a] : amplitudes_) s.insert(std::accumulate(occ.begin(), occ.end(), 0));
  return s;
}

int MultimodeFockState::max_photons() const {
  const auto s = photon_sectors();
  return s.empty() ? 0 : *s.rbegin();
}

std::string to_string(const ModeDescriptor& d) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FockInput>) {
          os << "fock:" << m.n;
        } else if constexpr (std::is_same_v<T, CoherentInput>) {
          os << "coh:" << m.alpha.real();
          if (m.alpha.imag() != 0.0) os << ":" << m.alpha.imag();
        } else if constexpr (std::is_same_v<T, SqueezedVacuumInput>) {
          os << "sq:" << m.lambda;
        } else {
          os << "vac";
        }
      },
      d);
  return os.str();
}

bool is_gaussian(const ModeDescriptor& d) {
  if (const auto* f = std::get_if<FockInput>(&d)) return f->n == 0;
  return true;
}

ComplexVector single_mode_amplitudes(const ModeDescriptor& d, int cutoff) {
  return std::visit(
      [cutoff](const auto& m) -> ComplexVector {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FockInput>) {
          if (m.n < 0) throw Error(ErrorCode::NonPhysical, "negative Fock number");
          ComplexVector v(m.n + 1, cd{});
          v[m.n] = 1.0;
          return v;
        } else if constexpr (std::is_same_v<T, VacuumInput>) {
          return {cd{1.0, 0.0}};
        } else if constexpr (std::is_same_v<T, CoherentInput>) {
          ComplexVector v(cutoff + 1);
          v[0] = std::exp(-0.5 * std::norm(m.alpha));
          for (int n = 1; n <= cutoff; ++n) v[n] = v[n - 1] * m.alpha / std::sqrt(double(n));
          return v;
        } else {
          // S(lambda)|0> = sech(lambda)^{1/2} exp(tanh(lambda) a^dagger^2 / 2)|0>
          ComplexVector v(cutoff + 1, cd{});
          const double t = std::tanh(m.lambda);
          v[0] = std::sqrt(1.0 / std::cosh(m.lambda));
          for (int n = 2; n <= cutoff; n += 2) {
            v[n] = v[n - 2] * t * std::sqrt((n - 1.0) / n);
          }
          return v;
        }
      },
      d);
}

double single_mode_tail(const ModeDescriptor& d, int cutoff) {
  if (std::holds_alternative<FockInput>(d) || std::holds_alternative<VacuumInput>(d)) return 0.0;
  double tail = 0.0;
  if (const auto* c = std::get_if<CoherentInput>(&d)) {
    // Poisson tail; terms decay super-exponentially past the mean.
    const double mean = std::norm(c->alpha);
    double log_p = -mean;  // log P(0)
    for (int n = 1; n <= cutoff + 2000; ++n) {
      log_p += std::log(mean) - std::log(double(n));
      if (mean == 0.0) break;
      if (n > cutoff) {
        const double p = std::exp(log_p);
        tail += p;
        if (n > mean && p < 1e-40 * std::max(tail, 1e-300)) break;
        if (n > mean && p == 0.0) break;
      }
    }
    return tail;
  }
  const double t2 = std::pow(squeezing_tanh(d), 2);
  double p = 1.0 / std::cosh(std::get<SqueezedVacuumInput>(d).lambda);  // P(0)
  for (int n = 2; n <= cutoff + 100000; n += 2) {
    p *= t2 * (n - 1.0) / n;
    if (n > cutoff) {
      tail += p;
      if (p < 1e-40 * std::max(tail, 1e-300) || p == 0.0) break;
    }
  }
  return tail;
}

int minimal_cutoff(const ModeDescriptor& d, double tolerance) {
  for (int c = 0; c <= kMaxFactorial; ++c) {
    if (single_mode_tail(d, c) <= tolerance) return c;
  }
  throw Error(ErrorCode::NonPhysical, "descriptor " + to_string(d) + " needs an excessive cutoff");
}

MultimodeFockState build_input_state(const InputStateSpec& spec) {
  const int modes = static_cast<int>(spec.modes.size());
  if (modes == 0) throw Error(ErrorCode::InvalidArgument, "input spec has no modes");
  for (const auto& d : spec.modes) {
    if (const auto* f = std::get_if<FockInput>(&d); f && f->n < 0) {
      throw Error(ErrorCode::NonPhysical, "negative Fock number");
    }
  }
  const double tol = spec.truncation_tolerance;
  const bool auto_cap = spec.photon_cap < 0;
  const double cutoff_budget = auto_cap ? 0.5 * tol : tol;

  auto total_tail = [&](int c) {
    double keep = 1.0;
    for (const auto& d : spec.modes) keep *= 1.0 - single_mode_tail(d, c);
    return 1.0 - keep;
  };
  auto required_cutoff = [&] {
    for (int c = 0; c <= kMaxFactorial; ++c) {
      if (total_tail(c) <= cutoff_budget) return c;
    }
    throw Error(ErrorCode::NonPhysical, "input needs an excessive Fock cutoff");
  };

  int cutoff = spec.cutoff;
  if (cutoff <= 0) {
    cutoff = required_cutoff();
  } else if (total_tail(cutoff) > cutoff_budget) {
    const int need = required_cutoff();
    std::ostringstream os;
    os << "cutoff " << cutoff << " loses " << total_tail(cutoff) << " > " << cutoff_budget
       << "; need at least " << need;
    throw Error(ErrorCode::CutoffTooSmall, os.str(), need);
  }
  double lost = total_tail(cutoff);

  std::vector<ComplexVector> factors;
  factors.reserve(modes);
  for (const auto& d : spec.modes) factors.push_back(single_mode_amplitudes(d, cutoff));

  int cap = spec.photon_cap;
  if (auto_cap) {
    // Photon-number distribution of the truncated product, by convolution.
    std::vector<double> dist{1.0};
    for (const auto& f : factors) {
      std::vector<double> next(dist.size() + f.size() - 1, 0.0);
      for (std::size_t a = 0; a < dist.size(); ++a) {
        for (std::size_t b = 0; b < f.size(); ++b) next[a + b] += dist[a] * std::norm(f[b]);
      }
      dist = std::move(next);
    }
    double beyond = 0.0;
    cap = static_cast<int>(dist.size()) - 1;
    for (int n = cap; n >= 0; --n) {
      if (beyond + dist[n] > 0.5 * tol) break;
      beyond += dist[n];
      cap = n - 1;
    }
    cap = std::max(cap, 0);
  }

  MultimodeFockState state(modes);
  double dropped = 0.0;
  Occupation occ(modes, 0);
  const double prune = state.prune_threshold();
  std::function<void(int, cd, int)> visit = [&](int mode, cd amp, int photons) {
    if (mode == modes) {
      state.set(occ, amp);
      return;
    }
    const auto& f = factors[mode];
    for (int n = 0; n < static_cast<int>(f.size()); ++n) {
      if (f[n] == cd{}) continue;
      const cd a = amp * f[n];
      // Remaining factors have magnitude <= 1, so everything below this node
      // is dropped as a block.
      double block = std::norm(a);
      for (int m = mode + 1; m < modes; ++m) {
        double s = 0.0;
        for (const auto& v : factors[m]) s += std::norm(v);
        block *= s;
      }
      if (std::abs(a) < prune || (cap > 0 && photons + n > cap)) {
        dropped += block;
        continue;
      }
      occ[mode] = n;
      visit(mode + 1, a, photons + n);
    }
    occ[mode] = 0;
  };
  visit(0, cd{1.0, 0.0}, 0);
  lost += dropped;
  if (cap > 0 && !auto_cap && lost > tol) {
    std::ostringstream os;
    os << "photon cap " << cap << " discards " << lost << " > " << tol;
    throw Error(ErrorCode::CutoffTooSmall, os.str(), cutoff);
  }
  state.normalize();
  state.set_truncation_error(lost);
  return state;
}

MultimodeFockState apply_unitary(const MultimodeFockState& state, const UnitaryMatrix& u,
                                 const ApplyOptions& options) {
  require_dimension(state, u);
  const int modes = state.mode_count();
  // powers[j][p] = (sum_k U(j,k) z_k)^p, built on demand.
  std::vector<std::vector<Polynomial>> powers(modes);
  auto power = [&](int j, int p) -> const Polynomial& {
    auto& list = powers[j];
    if (list.empty()) list.push_back({{Occupation(modes, 0), cd{1.0, 0.0}}});
    while (static_cast<int>(list.size()) <= p) {
      Polynomial linear;
      for (int k = 0; k < modes; ++k) {
        if (u(j, k) == cd{}) continue;
        Occupation e(modes, 0);
        e[k] = 1;
        linear[e] = u(j, k);
      }
      list.push_back(multiply(list.back(), linear));
    }
    return list[p];
  };

  MultimodeFockState out(modes, options.prune_threshold);
  for (const auto& [occ, amp] : state.amplitudes()) {
    // Bargmann coefficient of the monomial prod z_j^{n_j}.
    const cd b = amp / sqrt_factorial_product(occ);
    Polynomial poly{{Occupation(modes, 0), cd{1.0, 0.0}}};
    for (int j = 0; j < modes; ++j) {
      if (occ[j] > 0) poly = multiply(poly, power(j, occ[j]));
    }
    for (const auto& [mono, coef] : poly) out.add(mono, b * coef * sqrt_factorial_product(mono));
  }
  return finish(std::move(out), state, options);
}

RotationFactorization factorize_unitary(const UnitaryMatrix& u) {
  const int n = u.dimension();
  MatrixXcd w = u.matrix();
  RotationFactorization f;
  for (int j = 0; j < n - 1; ++j) {
    for (int i = j + 1; i < n; ++i) {
      const cd x = w(j, j);
      const cd y = w(i, j);
      if (std::abs(y) == 0.0) continue;
      const double r = std::hypot(std::abs(x), std::abs(y));
      Eigen::Matrix2cd rot;
      rot << std::conj(x) / r, std::conj(y) / r, -y / r, x / r;
      const Eigen::RowVectorXcd rj = w.row(j);
      const Eigen::RowVectorXcd ri = w.row(i);
      w.row(j) = rot(0, 0) * rj + rot(0, 1) * ri;
      w.row(i) = rot(1, 0) * rj + rot(1, 1) * ri;
      w(i, j) = 0.0;
      f.rotations.push_back({j, i, rot.adjoint()});
    }
  }
  f.phases = w.diagonal();
  return f;
}

namespace {

// Columns p of block s give the image of |p, s-p> under the two-mode
// substitution, indexed by the output occupation of mode a.
std::vector<MatrixXcd> rotation_blocks(const Eigen::Matrix2cd& g, int max_sector) {
  std::vector<MatrixXcd> blocks;
  blocks.reserve(max_sector + 1);
  blocks.push_back(MatrixXcd::Ones(1, 1));
  // Applies (ca a^dagger + cb b^dagger) to a vector over p' in sector s - 1.
  auto raise = [](const VectorXcd& v, cd ca, cd cb) {
    const auto s = v.size();  // = previous sector + 1
    VectorXcd out = VectorXcd::Zero(s + 1);
    for (Eigen::Index p = 0; p < s; ++p) {
      const double q = double(s - 1 - p);
      out(p + 1) += ca * std::sqrt(double(p + 1)) * v(p);
      out(p) += cb * std::sqrt(q + 1.0) * v(p);
    }
    return out;
  };
  for (int s = 1; s <= max_sector; ++s) {
    const MatrixXcd& prev = blocks.back();
    MatrixXcd next(s + 1, s + 1);
    next.col(0) = raise(prev.col(0), g(1, 0), g(1, 1)) / std::sqrt(double(s));
    for (int p = 1; p <= s; ++p) {
      next.col(p) = raise(prev.col(p - 1), g(0, 0), g(0, 1)) / std::sqrt(double(p));
    }
    blocks.push_back(std::move(next));
  }
  return blocks;
}

MultimodeFockState::AmplitudeMap apply_rotation(const MultimodeFockState::AmplitudeMap& in,
                                                const ModeRotation& r, double prune) {
  std::map<std::pair<Occupation, int>, std::vector<std::pair<int, cd>>> groups;
  int max_sector = 0;
  for (const auto& [occ, amp] : in) {
    const int s = occ[r.a] + occ[r.b];
    max_sector = std::max(max_sector, s);
    Occupation rest = occ;
    rest[r.a] = 0;
    rest[r.b] = 0;
    groups[{std::move(rest), s}].push_back({occ[r.a], amp});
  }
  const auto blocks = rotation_blocks(r.g, max_sector);
  MultimodeFockState::AmplitudeMap out;
  for (const auto& [key, entries] : groups) {
    const int s = key.second;
    VectorXcd x = VectorXcd::Zero(s + 1);
    for (const auto& [p, amp] : entries) x(p) = amp;
    const VectorXcd y = blocks[s] * x;
    Occupation occ = key.first;
    for (int p = 0; p <= s; ++p) {
      if (std::abs(y(p)) < prune) continue;
      occ[r.a] = p;
      occ[r.b] = s - p;
      out[occ] += y(p);
    }
  }
  return out;
}

}  // namespace

MultimodeFockState apply_unitary_factored(const MultimodeFockState& state, const UnitaryMatrix& u,
                                          const ApplyOptions& options) {
  require_dimension(state, u);
  const RotationFactorization f = factorize_unitary(u);
  // Rotations shed float dust far below the final prune level only.
  const double inner_prune = options.prune_threshold * 1e-3;
  MultimodeFockState::AmplitudeMap amps = state.amplitudes();
  for (const auto& r : f.rotations) amps = apply_rotation(amps, r, inner_prune);
  MultimodeFockState out(state.mode_count(), options.prune_threshold);
  for (const auto& [occ, amp] : amps) {
    cd phase{1.0, 0.0};
    for (int j = 0; j < state.mode_count(); ++j) {
      for (int p = 0; p < occ[j]; ++p) phase *= f.phases(j);
    }
    out.set(occ, amp * phase);
  }
  return finish(std::move(out), state, options);
}

UnitaryMatrix su2_splitter(double theta, double phi) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  MatrixXcd u(2, 2);
  u << c, std::polar(s, phi), -std::polar(s, -phi), c;
  return UnitaryMatrix(u);
}

MultimodeFockState two_mode_closed_form(int m, int n, double theta, double phi) {
  if (m < 0 || n < 0) throw Error(ErrorCode::NonPhysical, "negative photon number");
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  MultimodeFockState out(2);
  for (int k = 0; k <= m; ++k) {
    for (int l = 0; l <= n; ++l) {
      const int na = n + k - l;
      const int nb = m + l - k;
      const double mag = binomial(m, k) * binomial(n, l) * sqrt_factorial(na) *
                         sqrt_factorial(nb) * std::pow(c, k + l) * std::pow(s, m + n - k - l) *
                         (((n - l) % 2) ? -1.0 : 1.0);
      out.add({na, nb}, std::polar(mag, phi * (m - n + l - k)));
    }
  }
  out.prune();
  out.normalize();
  return out;
}

cd inner_product(const MultimodeFockState& a, const MultimodeFockState& b) {
  if (a.mode_count() != b.mode_count()) {
    throw Error(ErrorCode::DimensionMismatch, "states have different mode counts");
  }
  cd s{};
  for (const auto& [occ, amp] : a.amplitudes()) s += std::conj(amp) * b.amplitude(occ);
  return s;
}

double state_fidelity(const MultimodeFockState& a, const MultimodeFockState& b) {
  return std::norm(inner_product(a, b));
}

}  // namespace diffent
