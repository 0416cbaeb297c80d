#include <gtest/gtest.h>

#include "diffent/error.hpp"
#include "diffent/protocols.hpp"

using namespace diffent;

TEST(Ifm, BalancedIdealProjection) {
  const IfmResult r = ifm_project(1.0, su2_splitter(kPi / 2, 0.0));
  EXPECT_NEAR(r.null_probability, 1.0, 1e-12);
  EXPECT_NEAR(r.detected_probability, 0.0, 1e-12);
  EXPECT_NEAR(r.atoms.bell_fidelity(), 1.0, 1e-12);
  EXPECT_NEAR(r.atoms.squared_norm(), 1.0, 1e-12);
}

TEST(Ifm, ProbabilityConservation) {
  for (double eta : {0.25, 0.5, 0.75, 1.0}) {
    for (double theta : {kPi / 2, 1.0}) {
      const IfmResult r = ifm_project(eta, su2_splitter(theta, 0.3));
      EXPECT_NEAR(r.null_probability + r.detected_probability, 1.0, 1e-12) << eta;
      EXPECT_NEAR(r.null_probability, eta, 1e-12);
    }
  }
}

TEST(Ifm, InvalidInputs) {
  for (double eta : {0.0, -0.1, 1.5}) {
    try {
      ifm_project(eta, su2_splitter(kPi / 2, 0.0));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidEfficiency);
    }
  }
  EXPECT_THROW(ifm_project(0.5, UnitaryMatrix::identity(3)), Error);
}

TEST(Hom, DipAndSweep) {
  EXPECT_NEAR(hom_coincidence(su2_splitter(kPi / 2, 0.7)), 0.0, 1e-12);
  for (int i = 0; i <= 16; ++i) {
    const double theta = kPi * i / 16;
    const double c = std::cos(theta);
    EXPECT_NEAR(hom_coincidence(su2_splitter(theta, 0.0)), c * c, 1e-12);
  }
}

TEST(Noon, FidelityOfKnownStates) {
  MultimodeFockState noon(2);
  noon.set({2, 0}, 1.0 / std::sqrt(2.0));
  noon.set({0, 2}, cd(0.0, 1.0) / std::sqrt(2.0));
  EXPECT_NEAR(noon_fidelity(noon, 2), 1.0, 1e-15);
  EXPECT_NEAR(noon_fidelity(MultimodeFockState::basis({1, 1}), 2), 0.0, 1e-15);
  EXPECT_NEAR(noon_fidelity(MultimodeFockState::basis({2, 0}), 2), 0.5, 1e-15);
}

TEST(Noon, ScanSeparatesTwoFromThree) {
  ScanOptions o{32, 32, true, true};
  const ScanResult two = noon_fidelity_scan(2, o);
  EXPECT_GE(two.best_fidelity, 1.0 - 1e-9);
  EXPECT_EQ(two.surface.size(), 33u * 32u);
  EXPECT_GE(two.best_fidelity, two.grid_best_fidelity);
  const ScanResult three = noon_fidelity_scan(3, o);
  EXPECT_LE(three.best_fidelity, 1.0 - 1e-3);
  EXPECT_THROW(noon_fidelity_scan(0, o), Error);
}
