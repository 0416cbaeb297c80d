#pragma once

// Reference computations that share no code path with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>

#include "diffent/fock.hpp"

namespace oracle {

using cd = std::complex<double>;
using Eigen::MatrixXcd;

inline double log_factorial(int n) { return std::lgamma(n + 1.0); }

// Ryser's formula.
inline cd permanent(const MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  cd total{};
  for (unsigned s = 1; s < (1u << n); ++s) {
    cd prod{1.0, 0.0};
    for (int i = 0; i < n; ++i) {
      cd row{};
      for (int j = 0; j < n; ++j) {
        if (s & (1u << j)) row += a(i, j);
      }
      prod *= row;
    }
    total += ((n - __builtin_popcount(s)) % 2 ? -1.0 : 1.0) * prod;
  }
  return total;
}

// <out| U |in> for a_j^dagger -> sum_k U(j,k) a_k^dagger.
inline cd transition_amplitude(const MatrixXcd& u, const std::vector<int>& in,
                               const std::vector<int>& out) {
  std::vector<int> rows;
  std::vector<int> cols;
  double norm = 0.0;
  for (std::size_t j = 0; j < in.size(); ++j) {
    for (int r = 0; r < in[j]; ++r) rows.push_back(static_cast<int>(j));
    norm += log_factorial(in[j]);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (int r = 0; r < out[k]; ++r) cols.push_back(static_cast<int>(k));
    norm += log_factorial(out[k]);
  }
  if (rows.size() != cols.size()) return 0.0;
  MatrixXcd sub(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) sub(a, b) = u(rows[a], cols[b]);
  }
  return permanent(sub) * std::exp(-0.5 * norm);
}

inline void compositions(int total, int modes, std::vector<int>& cur,
                         const std::function<void(const std::vector<int>&)>& f) {
  if (static_cast<int>(cur.size()) == modes - 1) {
    cur.push_back(total);
    f(cur);
    cur.pop_back();
    return;
  }
  for (int n = total; n >= 0; --n) {
    cur.push_back(n);
    compositions(total - n, modes, cur, f);
    cur.pop_back();
  }
}

inline std::map<std::vector<int>, cd> propagate(const diffent::MultimodeFockState& s,
                                                const MatrixXcd& u) {
  std::map<std::vector<int>, cd> out;
  for (const auto& [occ, amp] : s.amplitudes()) {
    int total = 0;
    for (int n : occ) total += n;
    std::vector<int> cur;
    compositions(total, s.mode_count(), cur, [&](const std::vector<int>& o) {
      out[o] += amp * transition_amplitude(u, occ, o);
    });
  }
  return out;
}

inline cd coherent_amplitude(cd alpha, int n) {
  if (n == 0) return std::exp(-0.5 * std::norm(alpha));
  return std::exp(-0.5 * std::norm(alpha) - 0.5 * log_factorial(n)) * std::pow(alpha, n);
}

// S(lambda)|0> with S = exp[lambda (a^dagger^2 - a^2) / 2].
inline double squeezed_amplitude(double lambda, int n) {
  if (n % 2) return 0.0;
  const int m = n / 2;
  const double t = std::tanh(lambda);
  const double mag = std::exp(-0.5 * std::log(std::cosh(lambda)) + 0.5 * log_factorial(n) -
                              log_factorial(m) - m * std::log(2.0));
  return mag * std::pow(t, m);
}

inline double jinc(double x) {
  if (x == 0.0) return 0.5;
  return boost::math::cyl_bessel_j(1, x) / x;
}

inline double binary_entropy(double p) {
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

// Haar unitary from QR of a complex Ginibre matrix with the R-diagonal phase fix.
inline MatrixXcd haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = cd(g(rng), g(rng)) / std::sqrt(2.0);
  }
  Eigen::HouseholderQR<MatrixXcd> qr(a);
  MatrixXcd q = qr.householderQ();
  const MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) q.col(j) *= std::polar(1.0, std::arg(r(j, j)));
  return q;
}

// Random normalized state on tuples with at most max_photons per tuple.
inline diffent::MultimodeFockState random_state(int modes, int max_photons, int terms,
                                                std::mt19937_64& rng) {
  std::uniform_int_distribution<int> photons(0, max_photons);
  std::normal_distribution<double> g;
  diffent::MultimodeFockState s(modes);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> occ(modes, 0);
    int left = photons(rng);
    std::uniform_int_distribution<int> pick(0, modes - 1);
    while (left-- > 0) ++occ[pick(rng)];
    s.add(occ, cd(g(rng), g(rng)));
  }
  s.normalize();
  return s;
}

// Phase that maps b onto a at the largest amplitude of a.
inline cd relative_phase(const std::map<std::vector<int>, cd>& a,
                         const std::map<std::vector<int>, cd>& b) {
  const auto it = std::max_element(a.begin(), a.end(), [](const auto& x, const auto& y) {
    return std::abs(x.second) < std::abs(y.second);
  });
  const auto jt = b.find(it->first);
  if (jt == b.end() || std::abs(jt->second) == 0.0) return 1.0;
  return (it->second / jt->second) / std::abs(it->second / jt->second);
}

inline double max_difference(const std::map<std::vector<int>, cd>& a,
                             const std::map<std::vector<int>, cd>& b, cd phase_b = 1.0) {
  double worst = 0.0;
  for (const auto& [k, v] : a) {
    const auto it = b.find(k);
    worst = std::max(worst, std::abs(v - (it == b.end() ? cd{} : phase_b * it->second)));
  }
  for (const auto& [k, v] : b) {
    if (!a.count(k)) worst = std::max(worst, std::abs(phase_b * v));
  }
  return worst;
}

}  // namespace oracle
