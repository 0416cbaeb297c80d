#include <gtest/gtest.h>

#include <random>

#include "diffent/agreement.hpp"
#include "diffent/entanglement.hpp"
#include "diffent/error.hpp"
#include "diffent/separability.hpp"
#include "oracles.hpp"

using namespace diffent;

namespace {

UnitaryMatrix balanced() {
  MatrixXcd h(2, 2);
  h << 1, 1, 1, -1;
  return UnitaryMatrix(h / std::sqrt(2.0));
}

SeparabilityVerdict check(const std::vector<ModeDescriptor>& d, const UnitaryMatrix& u,
                          const std::vector<int>& subset) {
  return check_no_entanglement(BargmannInput::from_descriptors(d), u, subset);
}

double fock_entropy(const std::vector<ModeDescriptor>& d, const UnitaryMatrix& u, int k) {
  InputStateSpec spec{d, 0, -1};
  const MultimodeFockState out = apply_unitary_factored(build_input_state(spec), u);
  return entanglement_entropy(out, Bipartition({k}, u.dimension()));
}

}  // namespace

TEST(Bargmann, Coefficients) {
  const BargmannMode coh = BargmannMode::from_descriptor(CoherentInput{{0.3, 0.4}});
  EXPECT_NEAR(coh.at(0).real(), -0.125, 1e-15);
  EXPECT_EQ(coh.at(1), cd(0.3, 0.4));
  EXPECT_EQ(coh.at(2), cd(0.0));
  const BargmannMode sq = BargmannMode::from_descriptor(SqueezedVacuumInput{0.3});
  EXPECT_NEAR(sq.at(2).real(), std::tanh(0.3) / 2, 1e-16);
  EXPECT_EQ(sq.at(7), cd(0.0));
  EXPECT_TRUE(BargmannMode::from_descriptor(FockInput{2}).non_gaussian);
  EXPECT_FALSE(BargmannMode::from_descriptor(FockInput{0}).non_gaussian);
  EXPECT_NEAR(bargmann_to_squeezing(squeezing_to_bargmann(-0.7)), -0.7, 1e-14);
}

TEST(Checker, CoherentInputsAlwaysSeparable) {
  std::mt19937_64 rng(41);
  const UnitaryMatrix u(oracle::haar_unitary(3, rng));
  const std::vector<ModeDescriptor> d{CoherentInput{{0.5, 0.1}}, CoherentInput{{-1.0, 0.2}},
                                      VacuumInput{}};
  for (int k = 0; k < 3; ++k) EXPECT_TRUE(check(d, u, {k}).separable);
  EXPECT_TRUE(check(d, u, {0, 1, 2}).separable);
}

TEST(Checker, SqueezingCrossTerm) {
  const std::vector<ModeDescriptor> equal{SqueezedVacuumInput{0.3}, SqueezedVacuumInput{0.3}};
  EXPECT_TRUE(check(equal, balanced(), {0}).separable);
  const std::vector<ModeDescriptor> opposite{SqueezedVacuumInput{0.3}, SqueezedVacuumInput{-0.3}};
  const SeparabilityVerdict v = check(opposite, balanced(), {0});
  ASSERT_FALSE(v.separable);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->order, 2);
  EXPECT_EQ(v.witness->input_mode, -1);
  EXPECT_NEAR(v.witness->residual, std::tanh(0.3) / 2, 1e-14);
  EXPECT_GT(fock_entropy(opposite, balanced(), 0), 0.1);
}

TEST(Checker, FockInputOnCoupledModeGivesHigherOrderWitness) {
  const SeparabilityVerdict v = check({FockInput{1}, VacuumInput{}}, balanced(), {1});
  ASSERT_FALSE(v.separable);
  EXPECT_GE(v.witness->order, 3);
  EXPECT_EQ(v.witness->input_mode, 0);
  EXPECT_EQ(v.coupled_modes, (std::vector<int>{0, 1}));
}

TEST(Checker, UncoupledFockModeIsFine) {
  MatrixXcd u = MatrixXcd::Identity(3, 3);
  u.topLeftCorner(2, 2) = balanced().matrix();
  const SeparabilityVerdict v =
      check({CoherentInput{{0.4, 0.0}}, VacuumInput{}, FockInput{3}}, UnitaryMatrix(u), {2});
  EXPECT_TRUE(v.separable);
  EXPECT_EQ(v.coupled_modes, (std::vector<int>{2}));
}

TEST(Checker, Errors) {
  const BargmannInput in = BargmannInput::from_descriptors({VacuumInput{}, VacuumInput{}});
  auto code = [&](const UnitaryMatrix& u, const std::vector<int>& s) {
    try {
      check_no_entanglement(in, u, s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code(UnitaryMatrix::identity(3), {0}), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code(balanced(), {}), ErrorCode::EmptyPartition);
  EXPECT_EQ(code(balanced(), {5}), ErrorCode::InvalidArgument);
  BargmannInput bad = in;
  bad.modes[0].coefficients[1] = cd(std::nan(""), 0.0);
  EXPECT_THROW(check_no_entanglement(bad, balanced(), {0}), Error);
}

TEST(Checker, CouplingSupport) {
  MatrixXcd u = MatrixXcd::Identity(3, 3);
  u.bottomRightCorner(2, 2) = balanced().matrix();
  EXPECT_EQ(coupled_input_modes(UnitaryMatrix(u), {0}), (std::vector<int>{0}));
  EXPECT_EQ(coupled_input_modes(UnitaryMatrix(u), {2}), (std::vector<int>{1, 2}));
}

TEST(Gaussian, InputCovariance) {
  const GaussianState g = gaussian_input({{cd(0.5, -0.25), 0.0}, {cd(0.0), 0.4}});
  EXPECT_NEAR(g.mean(0), 1.0, 1e-15);
  EXPECT_NEAR(g.mean(2), -0.5, 1e-15);
  EXPECT_NEAR(g.covariance(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(g.covariance(1, 1), std::exp(0.8), 1e-14);
  EXPECT_NEAR(g.covariance(3, 3), std::exp(-0.8), 1e-14);
  EXPECT_LE(purity_residual(g.covariance), 1e-12);
  EXPECT_THROW(gaussian_spec({FockInput{1}}), Error);
}

TEST(Gaussian, SymplecticIsOrthogonal) {
  std::mt19937_64 rng(42);
  const MatrixXd s = passive_symplectic(UnitaryMatrix(oracle::haar_unitary(3, rng)));
  EXPECT_LE((s * s.transpose() - MatrixXd::Identity(6, 6)).norm(), 1e-12);
  MatrixXd omega = MatrixXd::Zero(6, 6);
  omega.topRightCorner(3, 3) = MatrixXd::Identity(3, 3);
  omega.bottomLeftCorner(3, 3) = -MatrixXd::Identity(3, 3);
  EXPECT_LE((s * omega * s.transpose() - omega).norm(), 1e-12);
}

TEST(Gaussian, CovarianceVerdictMatchesChecker) {
  const auto equal = gaussian_covariance_propagate({{0.0, 0.3}, {0.0, 0.3}}, balanced());
  EXPECT_TRUE(covariance_separable(equal.covariance, Bipartition({0}, 2)));
  const auto opposite = gaussian_covariance_propagate({{0.0, 0.3}, {0.0, -0.3}}, balanced());
  EXPECT_FALSE(covariance_separable(opposite.covariance, Bipartition({0}, 2)));
  MatrixXd mixed = 2.0 * MatrixXd::Identity(4, 4);
  try {
    covariance_separable(mixed, Bipartition({0}, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPure);
  }
}

TEST(Gaussian, CoherentMeanFollowsTransposedNetwork) {
  std::mt19937_64 rng(43);
  const MatrixXcd u = oracle::haar_unitary(2, rng);
  const cd a0(0.3, 0.2);
  const cd a1(-0.5, 0.1);
  const GaussianState g = gaussian_covariance_propagate({{a0, 0.0}, {a1, 0.0}}, UnitaryMatrix(u));
  for (int k = 0; k < 2; ++k) {
    const cd out = u(0, k) * a0 + u(1, k) * a1;
    EXPECT_NEAR(g.mean(k), 2 * out.real(), 1e-14);
    EXPECT_NEAR(g.mean(2 + k), 2 * out.imag(), 1e-14);
  }
}

TEST(Agreement, SeedsAreStable) {
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
  EXPECT_NE(derive_seed(7, 3), derive_seed(7, 4));
  const TrialOutcome a = run_agreement_trial(5, 99);
  const TrialOutcome b = run_agreement_trial(5, 99);
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.unitary, b.unitary);
  EXPECT_EQ(a.agree, b.agree);
}

TEST(Agreement, SmallSuiteAgrees) {
  const AgreementSummary s = run_agreement_suite(16, 2024);
  EXPECT_TRUE(s.all_agree());
  EXPECT_GT(s.gaussian_trials, 0);
}

TEST(Gaussian, PassiveNetworksKeepVacuumAndEqualSqueezing) {
  std::mt19937_64 rng(44);
  const UnitaryMatrix haar(oracle::haar_unitary(3, rng));
  const auto coherent = gaussian_covariance_propagate({{0.5, 0.0}, {0.0, 0.0}, {cd(0.1, 0.2), 0.0}}, haar);
  EXPECT_LE((coherent.covariance - MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-12);
  const UnitaryMatrix real = random_network(NetworkKind::RealOrthogonal, 3, rng);
  const auto squeezed = gaussian_covariance_propagate({{0.0, 0.4}, {0.0, 0.4}, {0.0, 0.4}}, real);
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      if (a % 3 != b % 3) EXPECT_LE(std::abs(squeezed.covariance(a, b)), 1e-12) << a << "," << b;
    }
  }
}
