#include "diffent/modes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "diffent/error.hpp"

namespace diffent {
namespace {

// Normalized Hermite functions h_n(xi), integral |h_n|^2 dxi = 1.
double hermite_function(int n, double xi) {
  double prev = 0.0;
  double cur = std::pow(kPi, -0.25) * std::exp(-0.5 * xi * xi);
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * xi * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double generalized_laguerre(int p, int alpha, double x) {
  if (p == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < p; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

void require_same_grid(const Grid2D& a, const Grid2D& b) {
  if (!(a == b)) throw Error(ErrorCode::GridMismatch, "fields live on different grids");
}

}  // namespace

PlaneWaveGrid PlaneWaveGrid::lattice(double cx, double cy, double spacing, int half_width) {
  if (!(spacing > 0.0) || half_width < 0) {
    throw Error(ErrorCode::InvalidArgument, "lattice needs positive spacing and half width");
  }
  PlaneWaveGrid g;
  g.spacing_ = spacing;
  std::size_t total = 0;
  std::size_t dropped = 0;
  for (int j = -half_width; j <= half_width; ++j) {
    for (int i = -half_width; i <= half_width; ++i) {
      ++total;
      const double nx = cx + i * spacing;
      const double ny = cy + j * spacing;
      const double t2 = nx * nx + ny * ny;
      if (t2 >= 1.0) {
        ++dropped;
        continue;
      }
      const double nz = std::sqrt(1.0 - t2);
      g.directions_.push_back({nx, ny, nz});
      g.solid_angles_.push_back(spacing * spacing / nz);
    }
  }
  g.amplitudes_.assign(g.directions_.size(), cd{});
  g.evanescent_fraction_ = total ? double(dropped) / double(total) : 0.0;
  return g;
}

PlaneWaveGrid PlaneWaveGrid::disc(double cx, double cy, double spacing, double radius) {
  if (!(spacing > 0.0) || !(radius >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "disc needs positive spacing and radius");
  }
  const int half = static_cast<int>(std::floor(radius / spacing));
  PlaneWaveGrid g;
  g.spacing_ = spacing;
  std::size_t total = 0;
  std::size_t dropped = 0;
  for (int j = -half; j <= half; ++j) {
    for (int i = -half; i <= half; ++i) {
      if (std::hypot(i * spacing, j * spacing) > radius) continue;
      ++total;
      const double nx = cx + i * spacing;
      const double ny = cy + j * spacing;
      const double t2 = nx * nx + ny * ny;
      if (t2 >= 1.0) {
        ++dropped;
        continue;
      }
      const double nz = std::sqrt(1.0 - t2);
      g.directions_.push_back({nx, ny, nz});
      g.solid_angles_.push_back(spacing * spacing / nz);
    }
  }
  g.amplitudes_.assign(g.directions_.size(), cd{});
  g.evanescent_fraction_ = total ? double(dropped) / double(total) : 0.0;
  return g;
}

PlaneWaveGrid PlaneWaveGrid::discrete(const std::vector<std::array<double, 2>>& transverse) {
  PlaneWaveGrid g;
  std::size_t dropped = 0;
  for (const auto& t : transverse) {
    const double t2 = t[0] * t[0] + t[1] * t[1];
    if (t2 >= 1.0) {
      ++dropped;
      continue;
    }
    g.directions_.push_back({t[0], t[1], std::sqrt(1.0 - t2)});
    g.solid_angles_.push_back(1.0);
  }
  g.amplitudes_.assign(g.directions_.size(), cd{});
  g.evanescent_fraction_ = transverse.empty() ? 0.0 : double(dropped) / transverse.size();
  return g;
}

PlaneWaveGrid PlaneWaveGrid::with_amplitudes(ComplexVector amplitudes) const {
  if (amplitudes.size() != directions_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "amplitude count differs from direction count");
  }
  double n2 = 0.0;
  for (const auto& a : amplitudes) n2 += std::norm(a);
  if (!(n2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "amplitude vector is zero");
  for (auto& a : amplitudes) a /= std::sqrt(n2);
  PlaneWaveGrid g = *this;
  g.amplitudes_ = std::move(amplitudes);
  return g;
}

std::string to_string(BasisKind kind, const ModeLabel& label) {
  std::ostringstream os;
  os << (kind == BasisKind::HermiteGaussian ? "HG(" : "LG(") << label.first << ","
     << label.second << ")";
  return os.str();
}

ModeBasis::ModeBasis(BasisKind kind, std::vector<ModeLabel> labels, double waist)
    : kind_(kind), labels_(std::move(labels)), waist_(waist) {
  if (!(waist > 0.0)) throw Error(ErrorCode::InvalidArgument, "waist must be positive");
  if (labels_.empty()) throw Error(ErrorCode::InvalidArgument, "mode basis is empty");
  for (const auto& l : labels_) {
    if (l.first < 0 || (kind_ == BasisKind::HermiteGaussian && l.second < 0)) {
      throw Error(ErrorCode::InvalidArgument, "negative mode index");
    }
  }
}

ModeBasis ModeBasis::hermite_gaussian(int max_order, double waist) {
  std::vector<ModeLabel> labels;
  for (int order = 0; order <= max_order; ++order) {
    for (int m = order; m >= 0; --m) labels.push_back({m, order - m});
  }
  return ModeBasis(BasisKind::HermiteGaussian, std::move(labels), waist);
}

ModeBasis ModeBasis::laguerre_gaussian(int max_radial, int max_azimuthal, double waist) {
  std::vector<ModeLabel> labels;
  for (int p = 0; p <= max_radial; ++p) {
    labels.push_back({p, 0});
    for (int l = 1; l <= max_azimuthal; ++l) {
      labels.push_back({p, l});
      labels.push_back({p, -l});
    }
  }
  return ModeBasis(BasisKind::LaguerreGaussian, std::move(labels), waist);
}

bool ModeBasis::contains(const ModeLabel& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::string ModeBasis::description() const {
  std::ostringstream os;
  os << (kind_ == BasisKind::HermiteGaussian ? "hermite-gaussian" : "laguerre-gaussian")
     << " M=" << labels_.size() << " waist=" << waist_;
  return os.str();
}

cd ModeBasis::evaluate(const ModeLabel& label, double x, double y) const {
  const double w = waist_;
  if (kind_ == BasisKind::HermiteGaussian) {
    const double s = std::sqrt(2.0) / w;
    return {hermite_function(label.first, s * x) * hermite_function(label.second, s * y) * s,
            0.0};
  }
  const int p = label.first;
  const int l = std::abs(label.second);
  const double r2 = x * x + y * y;
  const double u = 2.0 * r2 / (w * w);
  const double norm =
      std::sqrt(2.0 * std::tgamma(p + 1.0) / (kPi * std::tgamma(p + l + 1.0))) / w;
  // (sqrt(2) r / w)^|l| e^{i l phi} written as (sqrt(2)/w)^|l| (x +- i y)^|l|.
  const cd xy = label.second >= 0 ? cd{x, y} : cd{x, -y};
  cd angular{1.0, 0.0};
  for (int k = 0; k < l; ++k) angular *= xy * (std::sqrt(2.0) / w);
  return norm * angular * generalized_laguerre(p, l, u) * std::exp(-r2 / (w * w));
}

double boundary_energy_fraction(const ModeLabel& label, const ModeBasis& basis,
                                const Grid2D& grid) {
  // Inner grid occupies indices [nx, 2nx) x [ny, 2ny) of the 3x extended grid.
  const int nx = grid.nx();
  const int ny = grid.ny();
  double inside = 0.0;
  double outside = 0.0;
  for (int j = -ny; j < 2 * ny; ++j) {
    const double y = grid.y(j);
    for (int i = -nx; i < 2 * nx; ++i) {
      const double e = std::norm(basis.evaluate(label, grid.x(i), y));
      if (i >= 0 && i < nx && j >= 0 && j < ny) {
        inside += e;
      } else {
        outside += e;
      }
    }
  }
  const double total = inside + outside;
  return total > 0.0 ? outside / total : 1.0;
}

SampledField sample_field(const ModeLabel& label, const ModeBasis& basis, const Grid2D& grid,
                          double wavenumber) {
  if (!basis.contains(label)) {
    throw Error(ErrorCode::UnknownLabel, to_string(basis.kind(), label) + " not in basis");
  }
  const double frac = boundary_energy_fraction(label, basis, grid);
  if (frac > kBoundaryEnergyTolerance) {
    throw Error(ErrorCode::GridTooSmall,
                to_string(basis.kind(), label) + " leaks energy past the grid edge", frac);
  }
  ComplexVector values(grid.size());
  double n2 = 0.0;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const cd v = basis.evaluate(label, grid.x(i), grid.y(j));
      values[grid.index(i, j)] = v;
      n2 += std::norm(v);
    }
  }
  const double scale = 1.0 / std::sqrt(n2 * grid.cell_area());
  for (auto& v : values) v *= scale;
  return SampledField(grid, std::move(values), wavenumber);
}

SampledField apply_mask_to_field(const SampledField& field, const MaskFunction& mask) {
  const ComplexVector m = mask.sample(field.grid());
  ComplexVector out(field.values().begin(), field.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= m[i];
  return SampledField(field.grid(), std::move(out), field.wavenumber());
}

cd field_overlap(const SampledField& a, const SampledField& b) {
  require_same_grid(a.grid(), b.grid());
  cd s{};
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) s += std::conj(va[i]) * vb[i];
  return s * a.grid().cell_area();
}

double overlap_fidelity(const SampledField& a, const SampledField& b) {
  const double na = a.squared_norm();
  const double nb = b.squared_norm();
  if (!(na > 0.0) || !(nb > 0.0)) return 0.0;
  return std::norm(field_overlap(a, b)) / (na * nb);
}

MatrixXcd gram_matrix(const ModeBasis& basis, const Grid2D& grid) {
  std::vector<SampledField> fields;
  fields.reserve(basis.size());
  for (const auto& l : basis.labels()) fields.push_back(sample_field(l, basis, grid));
  const auto m = static_cast<Eigen::Index>(basis.size());
  MatrixXcd g(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) g(r, c) = field_overlap(fields[r], fields[c]);
  }
  return g;
}

BasisProjection project_onto_basis(const SampledField& field, const ModeBasis& basis) {
  BasisProjection p;
  double captured = 0.0;
  for (const auto& l : basis.labels()) {
    const cd c = field_overlap(sample_field(l, basis, field.grid(), field.wavenumber()), field);
    p.coefficients.push_back(c);
    captured += std::norm(c);
  }
  const double total = field.squared_norm();
  p.captured_norm = total > 0.0 ? captured / total : 0.0;
  p.truncation_energy = 1.0 - p.captured_norm;
  return p;
}

}  // namespace diffent
