#include <gtest/gtest.h>

#include <random>

#include "diffent/diffraction.hpp"
#include "diffent/error.hpp"
#include "diffent/fft.hpp"
#include "oracles.hpp"

using namespace diffent;

namespace {

MatrixXcd hadamard() {
  MatrixXcd h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

double max_singular_deviation(const MatrixXcd& u) {
  Eigen::JacobiSVD<MatrixXcd> svd(u);
  return (svd.singularValues().array() - 1.0).abs().maxCoeff();
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(CouplingMatrixTest, RejectsAmplifyingEntries) {
  MatrixXcd m(2, 1);
  m << 0.9, 0.6;
  EXPECT_EQ(code_of([&] { CouplingMatrix c(m); }), ErrorCode::InvalidArgument);
  m << 1.2, 0.0;
  EXPECT_EQ(code_of([&] { CouplingMatrix c(m); }), ErrorCode::InvalidArgument);
}

TEST(UnitaryMatrixTest, ResidualAndConnectivity) {
  EXPECT_EQ(code_of([] { UnitaryMatrix u(MatrixXcd::Ones(2, 2)); }), ErrorCode::NotUnitary);
  const UnitaryMatrix h(hadamard());
  EXPECT_LE(h.unitarity_residual(), 1e-15);
  EXPECT_TRUE(h.connected());
  MatrixXcd block = MatrixXcd::Zero(3, 3);
  block.topLeftCorner(2, 2) = hadamard();
  block(2, 2) = 1.0;
  EXPECT_FALSE(UnitaryMatrix(block).connected());
}

TEST(MaskSpectrum, ConstantMaskIsDcPeak) {
  const Grid2D g = Grid2D::square(32, 0.25);
  const MaskSpectrum s = mask_spectrum(MaskFunction::unit(g), g);
  for (int q = 0; q < 32; ++q) {
    for (int p = 0; p < 32; ++p) {
      if (p == 16 && q == 16) continue;
      EXPECT_LT(std::abs(s.values[g.index(p, q)]), 1e-12);
    }
  }
  EXPECT_NEAR(std::abs(s.values[g.index(16, 16)]), 32 * 32 * 0.0625, 1e-10);
}

TEST(MaskSpectrum, CosineGratingGivesSymmetricPeaks) {
  const Grid2D g = Grid2D::square(64, 0.25);
  const double k = 6 * g.dfx() / 0.8;
  const MaskSpectrum s = mask_spectrum(MaskFunction::cosine_grating(0.0, 0.8, k), g);
  const double a = std::abs(s.values[g.index(32, 32 + 6)]);
  const double b = std::abs(s.values[g.index(32, 32 - 6)]);
  EXPECT_NEAR(a, b, 1e-12 * a);
  EXPECT_NEAR(a, 0.5 * 64 * 64 * 0.0625, 1e-9);
}

TEST(MaskSpectrum, CustomMaskRoundTrip) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  const Grid2D g = Grid2D::square(32, 0.5);
  ComplexVector v(g.size());
  // Band-limited random mask so the alias check passes.
  ComplexVector spec(g.size(), 0.0);
  for (int q = 12; q < 20; ++q) {
    for (int p = 12; p < 20; ++p) spec[g.index(p, q)] = {n(rng), n(rng)};
  }
  v = ifft2_centered(g, spec);
  const MaskSpectrum s = mask_spectrum(MaskFunction::custom(g, v), g);
  const ComplexVector back = inverse_mask_spectrum(s);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_LT(std::abs(back[i] - v[i]), 1e-12);
}

TEST(MaskSpectrum, AliasedApertureDetected) {
  EXPECT_EQ(code_of([] { mask_spectrum(MaskFunction::circular_aperture(3.0), Grid2D::square(64, 0.2)); }),
            ErrorCode::AliasingDetected);
}

TEST(MaskSpectrum, SampledDiscFollowsJincAtLowFrequency) {
  // The pixelated disc only approximates the continuous transform; the
  // analytic path (mask_transform_at) is the precise one.
  const Grid2D g = Grid2D::square(512, 0.05);
  const double r = 4.0;
  const MaskSpectrum s = mask_spectrum(MaskFunction::circular_aperture(r), g, 1.0);
  const double peak = kPi * r * r;
  for (int p = 256; p < 256 + 20; ++p) {
    const double rho = g.fx(p);
    const double expect = 2.0 * peak * oracle::jinc(rho * r);
    EXPECT_NEAR(s.values[g.index(p, 256)].real(), expect, 5e-3 * peak) << rho;
  }
}

TEST(Jinc, LimitAndBessel) {
  EXPECT_EQ(jinc(0.0), 0.5);
  for (double x : {1e-6, 5e-4, 9.9e-4, 1e-3, 0.3, 2.0, 3.8317, 10.0, 57.3}) {
    EXPECT_NEAR(jinc(x), oracle::jinc(x), 1e-15) << x;
  }
}

TEST(MaskTransform, DiscMatchesAnalyticJinc) {
  const double r = 1.7;
  for (double rho : {0.0, 0.1, 1.0, 2.254, 7.5, 30.0, 150.0}) {
    const cd v = mask_transform_at(MaskFunction::circular_aperture(r), rho, 0.0);
    const double expect = 2.0 * kPi * r * r * oracle::jinc(rho * r);
    EXPECT_NEAR(v.real(), expect, 1e-12 * kPi * r * r) << rho;
    EXPECT_EQ(v.imag(), 0.0);
  }
}

TEST(PlaneWaveCoupling, UnitMaskKeepsDirection) {
  const Grid2D g = Grid2D::square(64, 0.25);
  const double k = 2.0 * kPi;
  const double step = g.dfx() / k;
  const PlaneWaveGrid in = PlaneWaveGrid::discrete({{{0.0, 0.0}}});
  const PlaneWaveGrid out =
      PlaneWaveGrid::discrete({{{-2 * step, 0.0}}, {{-step, 0.0}}, {{0.0, 0.0}}, {{step, step}}});
  const CouplingMatrix c = plane_wave_coupling(MaskFunction::unit(g), in, out, k);
  EXPECT_NEAR(std::abs(c.values()(2, 0)), 1.0, 1e-12);
  for (int n : {0, 1, 3}) EXPECT_LT(std::abs(c.values()(n, 0)), 1e-12);
}

TEST(PlaneWaveCoupling, GratingSplitsEvenly) {
  const double k = 2.0 * kPi;
  const MaskFunction grating = MaskFunction::cosine_grating(0.6, 0.0, k);
  const PlaneWaveGrid in = PlaneWaveGrid::discrete({{{0.0, 0.0}}});
  const PlaneWaveGrid out = PlaneWaveGrid::lattice(0.0, 0.0, 0.2, 4);
  const CouplingMatrix c = plane_wave_coupling(grating, in, out, k);
  int nonzero = 0;
  for (Eigen::Index n = 0; n < c.outputs(); ++n) {
    const double a = std::abs(c.values()(n, 0));
    if (a == 0.0) continue;
    ++nonzero;
    EXPECT_NEAR(a * a, 0.5, 1e-12);
    EXPECT_NEAR(std::abs(out.directions()[n].nx), 0.6, 1e-12);
  }
  EXPECT_EQ(nonzero, 2);
}

TEST(PlaneWaveCoupling, EmptyGridAndAliasing) {
  const PlaneWaveGrid in = PlaneWaveGrid::discrete({{{0.0, 0.0}}});
  EXPECT_EQ(code_of([&] {
              plane_wave_coupling(MaskFunction::circular_aperture(1.0), in,
                                  PlaneWaveGrid::discrete({}), 1.0);
            }),
            ErrorCode::EmptyGrid);
  EXPECT_EQ(code_of([&] {
              plane_wave_coupling(MaskFunction::circular_aperture(1.0), in,
                                  PlaneWaveGrid::lattice(0, 0, 0.1, 3), 100.0);
            }),
            ErrorCode::AliasingDetected);
}

TEST(ApertureDirections, CutoffAndTruncatedWeight) {
  const ApertureDirections a = aperture_output_directions({0, 0, 1}, 1.0, 10.0, 0.02);
  // sqrt(2/pi) x^{-3/2} = 1e-4 * 0.5
  EXPECT_NEAR(std::sqrt(2.0 / kPi) * std::pow(a.cutoff_argument, -1.5), 0.5e-4, 1e-16);
  const double j0 = boost::math::cyl_bessel_j(0, a.cutoff_argument);
  const double j1 = boost::math::cyl_bessel_j(1, a.cutoff_argument);
  EXPECT_NEAR(a.truncated_weight, j0 * j0 + j1 * j1, 1e-14);
  EXPECT_GT(a.grid.size(), 0u);
}

TEST(OverlapUnitary, IdentityAndFreeSpace) {
  const Grid2D g = Grid2D::square(128, 0.1);
  const ModeBasis b = ModeBasis::hermite_gaussian(2, 1.0);
  const CouplingMatrix c = overlap_unitary(FreeSpace{}, b, b, g);
  EXPECT_LE((c.values() - MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-8);
  const CouplingMatrix m = overlap_unitary(MaskFunction::unit(g), b, b, g);
  EXPECT_LE((m.values() - gram_matrix(b, g)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_TRUE(c.truncation_loss().empty());
}

TEST(OverlapUnitary, ApertureCouplesOnlyToZeroAzimuthalIndex) {
  const Grid2D g = Grid2D::square(128, 0.2);
  const ModeBasis lg = ModeBasis::laguerre_gaussian(2, 2, 2.0);
  const CouplingMatrix c = overlap_unitary(MaskFunction::circular_aperture(3.0), lg, lg, g);
  const auto& labels = lg.labels();
  const auto in = std::find(labels.begin(), labels.end(), ModeLabel{0, 0}) - labels.begin();
  double on = 0.0;
  for (std::size_t n = 0; n < labels.size(); ++n) {
    const double a = std::abs(c.values()(static_cast<Eigen::Index>(n), in));
    if (labels[n].second == 0) {
      on = std::max(on, a);
    } else {
      EXPECT_LT(a, 1e-8) << labels[n].first << "," << labels[n].second;
    }
  }
  EXPECT_GT(on, 0.5);
}

TEST(OverlapUnitary, FlagsTruncationLoss) {
  const Grid2D g = Grid2D::square(128, 0.1);
  const ModeBasis b = ModeBasis::hermite_gaussian(1, 1.0);
  const CouplingMatrix c = overlap_unitary(MaskFunction::pinhole(0.5), b, b, g);
  EXPECT_FALSE(c.truncation_loss().empty());
}

TEST(Unitarize, UnitaryUnchanged) {
  std::mt19937_64 rng(5);
  const MatrixXcd u = oracle::haar_unitary(4, rng);
  const UnitaryMatrix w = unitarize(CouplingMatrix(u.transpose()), UnitarizeMode::Polar);
  EXPECT_LE((w.matrix() - u).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(w.unitarization_distance(), 1e-12);
  const UnitaryMatrix f = unitarize(CouplingMatrix(u.transpose()));
  EXPECT_EQ(f.dimension(), 4);
  EXPECT_LE((f.matrix() - u).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Unitarize, ScaledBlockPolarFactor) {
  const UnitaryMatrix w = unitarize(CouplingMatrix(0.9 * hadamard()), UnitarizeMode::Polar);
  EXPECT_LE((w.matrix() - hadamard()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(w.unitarization_distance(), 0.1 * std::sqrt(2.0), 1e-12);
}

TEST(Unitarize, FluxFaithfulDilation) {
  MatrixXcd d = MatrixXcd::Zero(2, 2);
  d(0, 0) = 0.9;
  d(1, 1) = 0.5;
  const UnitaryMatrix u = unitarize(CouplingMatrix(d));
  ASSERT_EQ(u.dimension(), 4);
  EXPECT_EQ(u.ancilla_modes(), 2);
  EXPECT_LE((u.matrix().topLeftCorner(2, 2).transpose() - d).cwiseAbs().maxCoeff(), 1e-12);
  const MatrixXcd g = u.matrix().adjoint() * u.matrix() - MatrixXcd::Identity(4, 4);
  EXPECT_LE(g.norm(), 1e-10);
}

TEST(Unitarize, IdempotentAndErrors) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n;
  MatrixXcd a(3, 3);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = cd(n(rng), n(rng)) * 0.2;
  const UnitaryMatrix w1 = unitarize(CouplingMatrix(a), UnitarizeMode::Polar);
  const UnitaryMatrix w2 = unitarize(to_coupling(w1), UnitarizeMode::Polar);
  EXPECT_LE((w1.matrix() - w2.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(max_singular_deviation(w1.matrix()), 1e-10);

  MatrixXcd singular = MatrixXcd::Zero(2, 2);
  singular(0, 0) = 1.0;
  EXPECT_EQ(code_of([&] { unitarize(CouplingMatrix(singular), UnitarizeMode::Polar); }),
            ErrorCode::SingularNetwork);
  EXPECT_EQ(code_of([&] { unitarize(CouplingMatrix(MatrixXcd::Zero(2, 1))); }),
            ErrorCode::DimensionMismatch);
}

TEST(GratingBlock, MatchesHadamardUpToPhases) {
  for (const auto& u : std::vector<std::array<double, 2>>{{0.6, 0.0}, {0.3, -0.4}, {0.0, 0.9}}) {
    const GratingBlock b = compile_grating_block(MaskFunction::cosine_grating(u[0], u[1], 2 * kPi));
    EXPECT_LE((gauge_fixed(b.unitary.matrix()) - hadamard()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE(b.unitary.unitarity_residual(), 1e-10);
  }
}

TEST(GaugeFixed, RemovesDiagonalPhases) {
  std::mt19937_64 rng(9);
  const MatrixXcd u = oracle::haar_unitary(3, rng);
  MatrixXcd d1 = MatrixXcd::Zero(3, 3);
  MatrixXcd d2 = MatrixXcd::Zero(3, 3);
  for (int i = 0; i < 3; ++i) {
    d1(i, i) = std::polar(1.0, 0.7 * i + 0.1);
    d2(i, i) = std::polar(1.0, -1.3 * i + 2.0);
  }
  EXPECT_LE((gauge_fixed(d1 * u * d2) - gauge_fixed(u)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CompleteIsometry, AppendsOrthonormalColumns) {
  MatrixXcd col(3, 1);
  col << 1.0, 1.0, 0.0;
  col /= std::sqrt(2.0);
  const UnitaryMatrix u = complete_isometry(CouplingMatrix(col));
  EXPECT_EQ(u.dimension(), 3);
  EXPECT_LE((u.matrix().row(0).transpose() - col).norm(), 1e-12);
}

TEST(InverseDesign, IdentityGivesDeltaKernel) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n;
  const Grid2D g = Grid2D::square(32, 0.5);
  ComplexVector v(g.size());
  for (auto& x : v) x = {n(rng), n(rng)};
  const SampledField f(g, v);
  const ImpulseResponse h = inverse_design_response(f, f);
  const SampledField out = apply_impulse_response(h, f);
  EXPECT_NEAR(overlap_fidelity(out, f), 1.0, 1e-10);
  const std::size_t centre = g.index(16, 16);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double expect = i == centre ? 1.0 / g.cell_area() : 0.0;
    EXPECT_NEAR(std::abs(h.kernel[i]), expect, 1e-6 / g.cell_area());
  }
}

TEST(InverseDesign, GaussianToFirstOrderMode) {
  const Grid2D g = Grid2D::square(128, 0.25);
  const ModeBasis b = ModeBasis::hermite_gaussian(1, 2.0);
  const SampledField in = sample_field({0, 0}, b, g);
  const SampledField target = sample_field({1, 0}, b, g);
  const ImpulseResponse h = inverse_design_response(in, target);
  EXPECT_GE(overlap_fidelity(apply_impulse_response(h, in), target), 0.999);
  EXPECT_LE(h.lost_fraction, 1e-3);
}

TEST(InverseDesign, OutOfBandTargetRejected) {
  const Grid2D g = Grid2D::square(128, 0.25);
  const ModeBasis b = ModeBasis::hermite_gaussian(0, 2.0);
  const SampledField in = sample_field({0, 0}, b, g);
  // Narrow plane-wave segment near the Nyquist frequency.
  ComplexVector v(g.size());
  const double kx = 0.9 * kPi / g.dx();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double r2 = g.x(i) * g.x(i) + g.y(j) * g.y(j);
      v[g.index(i, j)] = std::exp(-r2 / 16.0) * std::exp(kI * (kx * g.x(i)));
    }
  }
  try {
    inverse_design_response(in, SampledField(g, v));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SpectralMismatch);
    EXPECT_GT(e.value(), 1e-3);
  }
}
