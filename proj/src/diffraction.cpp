#include "diffent/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "diffent/error.hpp"
#include "diffent/fft.hpp"

namespace diffent {
namespace {

double frobenius_defect(const MatrixXcd& u) {
  const auto n = u.cols();
  return (u.adjoint() * u - MatrixXcd::Identity(n, n)).norm();
}

std::string grid_header(const Grid2D& g) {
  std::ostringstream os;
  os << g.nx() << "x" << g.ny() << " dx=" << g.dx() << " dy=" << g.dy();
  return os.str();
}

// Disjoint-set forest over 2n nodes (inputs then outputs).
struct Components {
  std::vector<int> parent;
  explicit Components(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

CouplingMatrix::CouplingMatrix(MatrixXcd values, Provenance provenance)
    : values_(std::move(values)), provenance_(std::move(provenance)) {
  constexpr double slack = 1e-9;
  if (values_.size() > 0 && values_.cwiseAbs().maxCoeff() > 1.0 + slack) {
    throw Error(ErrorCode::InvalidArgument, "coupling entry exceeds unit magnitude");
  }
  captured_norms_.resize(values_.cols());
  for (Eigen::Index c = 0; c < values_.cols(); ++c) {
    captured_norms_[c] = values_.col(c).squaredNorm();
    if (std::sqrt(captured_norms_[c]) > 1.0 + slack) {
      throw Error(ErrorCode::InvalidArgument, "coupling column norm exceeds 1");
    }
  }
}

void CouplingMatrix::flag_truncation(double threshold) {
  truncation_loss_.clear();
  for (std::size_t c = 0; c < captured_norms_.size(); ++c) {
    if (captured_norms_[c] < 1.0 - threshold) truncation_loss_.push_back(static_cast<int>(c));
  }
}

UnitaryMatrix::UnitaryMatrix(MatrixXcd u, double tolerance) : u_(std::move(u)) {
  if (u_.rows() != u_.cols() || u_.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "unitary must be square and non-empty");
  }
  residual_ = frobenius_defect(u_);
  if (!(residual_ <= tolerance)) {
    std::ostringstream os;
    os << "||U^dagger U - I||_F = " << residual_ << " exceeds " << tolerance;
    throw Error(ErrorCode::NotUnitary, os.str(), residual_);
  }
}

bool UnitaryMatrix::connected(double tol_couple) const {
  const int n = dimension();
  if (n == 1) return true;
  Components comps(2 * n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (std::abs(u_(j, k)) > tol_couple) comps.join(j, n + k);
    }
  }
  const int root = comps.find(0);
  for (int i = 1; i < 2 * n; ++i) {
    if (comps.find(i) != root) return false;
  }
  return true;
}

UnitaryMatrix with_unitarization_record(UnitaryMatrix u, double distance, int ancillas) {
  u.distance_ = distance;
  u.ancillas_ = ancillas;
  return u;
}

MaskSpectrum mask_spectrum(const MaskFunction& mask, const Grid2D& grid, double alias_threshold) {
  MaskSpectrum s{grid, fft2_centered(grid, mask.sample(grid)), 0.0};
  double peak = 0.0;
  double edge = 0.0;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const double a = std::abs(s.values[grid.index(i, j)]);
      peak = std::max(peak, a);
      if (i == 0 || j == 0 || i == grid.nx() - 1 || j == grid.ny() - 1) edge = std::max(edge, a);
    }
  }
  s.edge_ratio = peak > 0.0 ? edge / peak : 0.0;
  if (s.edge_ratio > alias_threshold) {
    throw Error(ErrorCode::AliasingDetected,
                "mask spectrum reaches the band edge; refine the grid", s.edge_ratio);
  }
  return s;
}

ComplexVector inverse_mask_spectrum(const MaskSpectrum& spectrum) {
  return ifft2_centered(spectrum.grid, spectrum.values);
}

double jinc(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-3) {
    const double x2 = x * x;
    return 0.5 - x2 / 16.0 + x2 * x2 / 384.0 - x2 * x2 * x2 / 18432.0;
  }
  return std::cyl_bessel_j(1.0, ax) / ax;
}

cd mask_transform_at(const MaskFunction& mask, double fx, double fy) {
  return std::visit(
      [fx, fy](const auto& m) -> cd {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CosineGrating>) {
          throw Error(ErrorCode::InvalidArgument,
                      "cosine grating spectrum is a pair of delta functions");
        } else if constexpr (std::is_same_v<T, CustomMask>) {
          const auto& g = m.grid;
          if (std::abs(fx) > kPi / g.dx() || std::abs(fy) > kPi / g.dy()) {
            throw Error(ErrorCode::AliasingDetected,
                        "requested frequency beyond the custom mask's Nyquist limit");
          }
          ComplexVector px(g.nx());
          for (int i = 0; i < g.nx(); ++i) px[i] = std::exp(-kI * (fx * g.x(i)));
          cd total{};
          for (int j = 0; j < g.ny(); ++j) {
            cd row{};
            for (int i = 0; i < g.nx(); ++i) row += m.values[g.index(i, j)] * px[i];
            total += row * std::exp(-kI * (fy * g.y(j)));
          }
          return total * g.cell_area();
        } else {
          // Radially symmetric disc: 2 pi int_0^R J0(rho r) r dr, composite
          // Gauss-Legendre with panels short compared to the J0 period.
          const double rho = std::hypot(fx, fy);
          const double radius = m.radius;
          const int panels = std::max(4, static_cast<int>(std::ceil(rho * radius / 2.0)));
          const double h = radius / panels;
          auto integrand = [rho](double r) { return std::cyl_bessel_j(0.0, rho * r) * r; };
          double sum = 0.0;
          for (int p = 0; p < panels; ++p) {
            sum += boost::math::quadrature::gauss<double, 20>::integrate(integrand, p * h,
                                                                         (p + 1) * h);
          }
          return {2.0 * kPi * sum, 0.0};
        }
      },
      mask.kind());
}

CouplingMatrix plane_wave_coupling(const MaskFunction& mask, const PlaneWaveGrid& input,
                                   const PlaneWaveGrid& output, double wavenumber) {
  if (input.size() == 0 || output.size() == 0) {
    throw Error(ErrorCode::EmptyGrid, "plane-wave grid has no propagating directions");
  }
  if (!(wavenumber > 0.0)) throw Error(ErrorCode::InvalidArgument, "wavenumber must be positive");
  const auto& din = input.directions();
  const auto& dout = output.directions();
  const auto rows = static_cast<Eigen::Index>(dout.size());
  const auto cols = static_cast<Eigen::Index>(din.size());
  MatrixXcd c = MatrixXcd::Zero(rows, cols);

  if (const auto* g = std::get_if<CosineGrating>(&mask.kind())) {
    // M~ = amplitude (2 pi)^2 / 2 [delta(f - k_g u) + delta(f + k_g u)]; the
    // delta integrates to one over an output cell of area k^2 n_z' dOmega'.
    const double ratio = g->wavenumber / wavenumber;
    const double sx = ratio * g->u[0];
    const double sy = ratio * g->u[1];
    constexpr double match = 1e-9;
    for (Eigen::Index m = 0; m < cols; ++m) {
      for (Eigen::Index n = 0; n < rows; ++n) {
        const double ox = dout[n].nx - din[m].nx;
        const double oy = dout[n].ny - din[m].ny;
        int hits = 0;
        if (std::abs(ox - sx) < match && std::abs(oy - sy) < match) ++hits;
        if (std::abs(ox + sx) < match && std::abs(oy + sy) < match) ++hits;
        if (hits == 0) continue;
        const double cell = wavenumber * wavenumber * dout[n].nz * output.solid_angles()[n];
        const double spectrum = g->amplitude * 2.0 * kPi * kPi * hits / cell;
        c(n, m) = std::abs(wavenumber * dout[n].nz) * spectrum * input.solid_angles()[m];
      }
    }
  } else {
    if (const auto* a = std::get_if<CircularAperture>(&mask.kind())) {
      if (output.spacing() * wavenumber * a->radius > kPi) {
        throw Error(ErrorCode::AliasingDetected,
                    "direction spacing does not resolve the aperture's jinc lobes");
      }
    } else if (const auto* p = std::get_if<Pinhole>(&mask.kind())) {
      if (output.spacing() * wavenumber * p->radius > kPi) {
        throw Error(ErrorCode::AliasingDetected,
                    "direction spacing does not resolve the pinhole's jinc lobes");
      }
    }
    for (Eigen::Index m = 0; m < cols; ++m) {
      for (Eigen::Index n = 0; n < rows; ++n) {
        const cd spectrum = mask_transform_at(mask, wavenumber * (dout[n].nx - din[m].nx),
                                              wavenumber * (dout[n].ny - din[m].ny));
        c(n, m) = std::abs(wavenumber * dout[n].nz) * spectrum * input.solid_angles()[m];
      }
    }
  }

  double scale = 0.0;
  for (Eigen::Index m = 0; m < cols; ++m) scale = std::max(scale, c.col(m).norm());
  if (scale > 0.0) c /= scale;
  std::ostringstream grid;
  grid << din.size() << " in x " << dout.size() << " out directions, k=" << wavenumber;
  return CouplingMatrix(std::move(c), {mask.kind_name(), grid.str(), "plane-wave",
                                       static_cast<int>(dout.size()), scale > 0.0 ? scale : 1.0});
}

ApertureDirections aperture_output_directions(const Direction& input, double radius,
                                              double wavenumber, double spacing,
                                              double envelope_cutoff) {
  if (!(radius > 0.0) || !(wavenumber > 0.0) || !(envelope_cutoff > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "aperture grid needs positive parameters");
  }
  ApertureDirections out{PlaneWaveGrid::discrete({}), 0.0, 0.0};
  out.cutoff_argument = std::pow(std::sqrt(2.0 / kPi) / (0.5 * envelope_cutoff), 2.0 / 3.0);
  // Directions further than 2 from the input are evanescent for any input.
  const double reach = std::min(out.cutoff_argument / (wavenumber * radius), 2.0);
  out.grid = PlaneWaveGrid::disc(input.nx, input.ny, spacing, reach);
  const double x = out.cutoff_argument;
  const double j0 = std::cyl_bessel_j(0.0, x);
  const double j1 = std::cyl_bessel_j(1.0, x);
  out.truncated_weight = j0 * j0 + j1 * j1;
  return out;
}

SampledField apply_impulse_response(const ImpulseResponse& h, const SampledField& field) {
  if (!(h.grid == field.grid())) {
    throw Error(ErrorCode::GridMismatch, "impulse response and field grids differ");
  }
  ComplexVector spec = fft2_centered(field.grid(), field.values());
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= h.transfer[i];
  return SampledField(field.grid(), ifft2_centered(field.grid(), spec), field.wavenumber());
}

SampledField apply_element(const OpticalElement& element, const SampledField& field) {
  return std::visit(
      [&field](const auto& e) -> SampledField {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, MaskFunction>) {
          return apply_mask_to_field(field, e);
        } else if constexpr (std::is_same_v<T, ImpulseResponse>) {
          return apply_impulse_response(e, field);
        } else {
          return field;
        }
      },
      element);
}

CouplingMatrix overlap_unitary(const OpticalElement& element, const ModeBasis& in_basis,
                               const ModeBasis& out_basis, const Grid2D& grid,
                               double truncation_threshold) {
  if (const auto* h = std::get_if<ImpulseResponse>(&element); h && !(h->grid == grid)) {
    throw Error(ErrorCode::GridMismatch, "impulse response lives on another grid");
  }
  std::vector<SampledField> outs;
  outs.reserve(out_basis.size());
  for (const auto& l : out_basis.labels()) outs.push_back(sample_field(l, out_basis, grid));

  const auto rows = static_cast<Eigen::Index>(out_basis.size());
  const auto cols = static_cast<Eigen::Index>(in_basis.size());
  MatrixXcd c(rows, cols);
  for (Eigen::Index m = 0; m < cols; ++m) {
    const SampledField transformed =
        apply_element(element, sample_field(in_basis.labels()[m], in_basis, grid));
    for (Eigen::Index n = 0; n < rows; ++n) c(n, m) = field_overlap(outs[n], transformed);
  }

  std::string name = "free-space";
  if (const auto* mask = std::get_if<MaskFunction>(&element)) name = mask->kind_name();
  if (std::holds_alternative<ImpulseResponse>(element)) name = "impulse-response";
  CouplingMatrix result(std::move(c), {name, grid_header(grid),
                                       in_basis.description() + " -> " + out_basis.description(),
                                       static_cast<int>(out_basis.size()), 1.0});
  result.flag_truncation(truncation_threshold);
  return result;
}

UnitaryMatrix unitarize(const CouplingMatrix& c, UnitarizeMode mode) {
  const MatrixXcd& a = c.values();
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "unitarize needs a square coupling matrix");
  }
  const auto n = a.rows();
  Eigen::JacobiSVD<MatrixXcd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const VectorXd& sigma = svd.singularValues();
  const MatrixXcd& x = svd.matrixU();
  const MatrixXcd& y = svd.matrixV();

  if (mode == UnitarizeMode::Polar) {
    if (sigma(n - 1) <= kSingularThreshold) {
      std::ostringstream os;
      os << "smallest singular value " << sigma(n - 1) << " <= " << kSingularThreshold;
      throw Error(ErrorCode::SingularNetwork, os.str(), sigma(n - 1));
    }
    const MatrixXcd w = x * y.adjoint();
    return with_unitarization_record(UnitaryMatrix(w.transpose()), (a - w).norm(), 0);
  }

  constexpr double unit_slack = 1e-12;
  if (sigma(0) > 1.0 + 1e-9) {
    throw Error(ErrorCode::NotContractive, "coupling amplifies flux; cannot dilate", sigma(0));
  }
  std::vector<Eigen::Index> defects;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (sigma(i) < 1.0 - unit_slack) defects.push_back(i);
  }
  const auto r = static_cast<Eigen::Index>(defects.size());
  // [[S, E D], [D E^T, -S_d]] is unitary for diagonal S with entries <= 1;
  // conjugating by diag(X, I) and diag(Y^dagger, I) restores C in the corner.
  MatrixXcd core = MatrixXcd::Zero(n + r, n + r);
  for (Eigen::Index i = 0; i < n; ++i) core(i, i) = std::min(sigma(i), 1.0);
  for (Eigen::Index t = 0; t < r; ++t) {
    const Eigen::Index i = defects[t];
    const double s = std::min(sigma(i), 1.0);
    const double d = std::sqrt(std::max(0.0, 1.0 - s * s));
    core(i, n + t) = d;
    core(n + t, i) = d;
    core(n + t, n + t) = -s;
  }
  MatrixXcd left = MatrixXcd::Identity(n + r, n + r);
  MatrixXcd right = MatrixXcd::Identity(n + r, n + r);
  left.topLeftCorner(n, n) = x;
  right.topLeftCorner(n, n) = y.adjoint();
  MatrixXcd w = left * core * right;
  if (r == 0) w = a;  // already unitary within slack; keep the caller's matrix
  const double distance = (w.topLeftCorner(n, n) - a).norm();
  return with_unitarization_record(UnitaryMatrix(w.transpose()), distance, static_cast<int>(r));
}

CouplingMatrix to_coupling(const UnitaryMatrix& u) {
  return CouplingMatrix(u.matrix().transpose(),
                        {"unitary", "", "", u.dimension(), 1.0});
}

UnitaryMatrix complete_isometry(const CouplingMatrix& c, double tolerance) {
  const MatrixXcd& a = c.values();
  const auto m = a.rows();
  const auto k = a.cols();
  if (k > m) throw Error(ErrorCode::DimensionMismatch, "isometry has more columns than rows");
  if ((a.adjoint() * a - MatrixXcd::Identity(k, k)).norm() > tolerance) {
    throw Error(ErrorCode::NotUnitary, "coupling columns are not orthonormal");
  }
  MatrixXcd q(m, m);
  q.leftCols(k) = a;
  Eigen::Index filled = k;
  for (Eigen::Index i = 0; i < m && filled < m; ++i) {
    VectorXcd v = VectorXcd::Unit(m, i);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < filled; ++j) v -= q.col(j) * q.col(j).dot(v);
    }
    const double nv = v.norm();
    if (nv < 0.5) continue;
    v /= nv;
    for (Eigen::Index r = 0; r < m; ++r) {
      if (std::abs(v(r)) > 1e-12) {
        v *= std::conj(v(r)) / std::abs(v(r));
        break;
      }
    }
    q.col(filled++) = v;
  }
  return UnitaryMatrix(q.transpose());
}

GratingBlock compile_grating_block(const MaskFunction& grating) {
  const auto* g = std::get_if<CosineGrating>(&grating.kind());
  if (!g) throw Error(ErrorCode::InvalidArgument, "grating block needs a cosine grating");
  const PlaneWaveGrid in = PlaneWaveGrid::discrete({{0.0, 0.0}});
  const PlaneWaveGrid out = PlaneWaveGrid::discrete({{g->u[0], g->u[1]}, {-g->u[0], -g->u[1]}});
  if (out.size() != 2 || std::hypot(g->u[0], g->u[1]) == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "grating must diffract into two propagating orders");
  }
  CouplingMatrix coupling = plane_wave_coupling(grating, in, out, g->wavenumber);
  UnitaryMatrix unitary = complete_isometry(coupling);
  return {std::move(coupling), std::move(unitary)};
}

MatrixXcd gauge_fixed(const MatrixXcd& a, double tolerance) {
  MatrixXcd b = a;
  auto unit_phase = [](cd z) { return std::conj(z) / std::abs(z); };
  for (Eigen::Index r = 0; r < b.rows(); ++r) {
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      if (std::abs(b(r, c)) > tolerance) {
        b.row(r) *= unit_phase(b(r, c));
        break;
      }
    }
  }
  for (Eigen::Index c = 0; c < b.cols(); ++c) {
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      if (std::abs(b(r, c)) > tolerance) {
        b.col(c) *= unit_phase(b(r, c));
        break;
      }
    }
  }
  return b;
}

ImpulseResponse inverse_design_response(const SampledField& e_in, const SampledField& e_out,
                                        double eps, double mismatch_threshold) {
  if (!(e_in.grid() == e_out.grid())) {
    throw Error(ErrorCode::GridMismatch, "input and output fields live on different grids");
  }
  const Grid2D& grid = e_in.grid();
  const ComplexVector fin = fft2_centered(grid, e_in.values());
  const ComplexVector fout = fft2_centered(grid, e_out.values());
  double peak = 0.0;
  for (const auto& v : fin) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) throw Error(ErrorCode::InvalidArgument, "input spectrum is identically zero");
  if (!(eps > 0.0)) eps = kDefaultRegularizationFactor * peak;

  ImpulseResponse h{grid, ComplexVector(fin.size()), {}, eps, 0.0, 0.0};
  double lost = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < fin.size(); ++i) {
    const double e = std::norm(fout[i]);
    total += e;
    if (std::abs(fin[i]) < eps) lost += e;
    h.transfer[i] = fout[i] * std::conj(fin[i]) / (std::norm(fin[i]) + eps * eps);
    h.spectral_cap = std::max(h.spectral_cap, std::abs(h.transfer[i]));
  }
  h.lost_fraction = total > 0.0 ? lost / total : 0.0;
  if (h.lost_fraction > mismatch_threshold) {
    std::ostringstream os;
    os << "output carries " << h.lost_fraction
       << " of its energy where the input spectrum is below eps";
    throw Error(ErrorCode::SpectralMismatch, os.str(), h.lost_fraction);
  }
  h.kernel = ifft2_centered(grid, h.transfer);
  return h;
}

}  // namespace diffent
