#include "cvnet/teleport.hpp"
#include "cvnet/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cvnet;

namespace {

TeleportConfig lossless(double r_E, double beta_c) {
  TeleportConfig c;
  c.beta_c = beta_c;
  c.r_E = r_E;
  c.r_A = unity_feedforward_r_A(beta_c);
  return c;
}

}  // namespace

TEST(Teleport, UnityFeedforwardSolve) {
  const double r = unity_feedforward_r_A(0.1, 0.4);
  EXPECT_NEAR(0.1 * 0.4 * std::pow(std::cosh(r), 2), 1.0, 1e-12);
  EXPECT_NEAR(squeeze_to_gain_db(unity_feedforward_r_A(0.04)), 13.979400086720377, 1e-9);
  EXPECT_THROW(unity_feedforward_r_A(0.0), ConfigError);
  EXPECT_THROW(unity_feedforward_r_A(0.1, 0.0), ConfigError);
}

TEST(Teleport, ConventionsForK) {
  TeleportConfig c = TeleportConfig::with_losses(0.62, 0.93, 0.4, 0.1);
  c.r_A = unity_feedforward_r_A(0.1, 0.4);
  EXPECT_NEAR(c.k(), 1.0, 1e-12);
  EXPECT_TRUE(c.unity_gain());
  c.convention = FeedforwardConvention::kCouplerOnly;
  EXPECT_NEAR(c.k(), 2.5, 1e-12);
}

TEST(Teleport, LosslessTransferIsSymplecticWithExpectedBlocks) {
  const TeleportConfig c = lossless(0.8, 0.1);
  const TeleportSequence seq = build_teleport_sequence(c);
  EXPECT_LT(symplecticity_error(seq.T), 1e-10);
  EXPECT_LT(seq.A.cwiseAbs().maxCoeff(), 1e-15);
  // Input path 3 reaches Bob through the coupler with amplitude sqrt(beta_c) cosh(r_A).
  const Eigen::Matrix2d t13 = seq.T.block<2, 2>(0, 4);
  EXPECT_NEAR(t13(0, 0), std::sqrt(0.1) * std::cosh(c.r_A), 1e-12);
  EXPECT_NEAR(t13(1, 1), std::sqrt(0.1) * std::cosh(c.r_A), 1e-12);
  EXPECT_NEAR(t13(0, 1), 0.0, 1e-12);
}

TEST(Teleport, LosslessFidelityApproachesSqueezingLaw) {
  // The residual is the sqrt(1 - beta_c) leakage of Bob's own mode, which
  // scales linearly with the coupling.
  for (double r : {0.0, 0.5, 1.0, 2.0}) {
    const double law = 1.0 / (std::exp(-2 * r) + 1.0);
    EXPECT_NEAR(teleport_fidelity(lossless(r, 1e-8)), law, 1e-8);
    const double d3 = teleport_fidelity(lossless(r, 1e-3)) - law;
    const double d4 = teleport_fidelity(lossless(r, 1e-4)) - law;
    EXPECT_NEAR(d3 / d4, 10.0, 0.05);
  }
}

TEST(Teleport, ClosedFormsMatchPipelineLossless) {
  const double beta_c = 0.01;
  for (double k : {0.5, 0.9, 1.3})
    for (double n_s : {0.0, 2.0}) {
      const double r_A = std::acosh(std::sqrt(k / beta_c));
      TeleportConfig c;
      c.beta_c = beta_c;
      c.r_A = r_A;
      c.r_E = 0.8;
      c.n_s = n_s;
      c.theta_s = 0.3;
      const ClosedFormFidelities cf = closed_form_fidelities(c.r_E, r_A, beta_c, n_s);
      EXPECT_NEAR(cf.k, k, 1e-12);
      EXPECT_NEAR(cf.F_q_nonunity, teleport_fidelity(c), 1e-12);
      c.r_E = 0.0;
      EXPECT_NEAR(cf.F_c_lossless, teleport_fidelity(c), 1e-12);
    }
}

TEST(Teleport, SmallCouplingClassicalForm) {
  for (double k : {0.5, 1.3})
    for (double n_s : {0.0, 2.0}) {
      const double beta_c = 1e-7;
      TeleportConfig c;
      c.beta_c = beta_c;
      c.r_A = std::acosh(std::sqrt(k / beta_c));
      c.n_s = n_s;
      const double fc = closed_form_fidelities(0.0, c.r_A, beta_c, n_s).F_c_nonunity;
      EXPECT_NEAR(fc, std::exp(-n_s * std::pow(std::sqrt(k) - 1, 2) / (1 + k)) / (1 + k), 1e-15);
      EXPECT_NEAR(teleport_fidelity(c), fc, 1e-6);
    }
}

TEST(Teleport, UnityGainFidelityIndependentOfCoherentAmplitude) {
  TeleportConfig c = lossless(0.6, 1e-3);
  const double f0 = teleport_fidelity(c);
  c.n_s = 5.0;
  c.theta_s = 1.0;
  EXPECT_NEAR(teleport_fidelity(c), f0, 1e-9);
}

TEST(Teleport, ClassicalBound) {
  EXPECT_NEAR(teleport_fidelity(lossless(0.0, 1e-10)), 0.5, 1e-9);
  BobNoiseParams p;
  for (double phi : {0.0, 1.0, kPi}) EXPECT_NEAR(bob_noise_photons(p, phi), 1.5, 1e-12);
}

TEST(Teleport, LossesLowerFidelity) {
  TeleportConfig c = TeleportConfig::with_losses(0.62, 0.93, 0.4, 0.1);
  c.r_E = gain_db_to_squeeze(6.0);
  c.r_A = unity_feedforward_r_A(0.1, 0.4);
  const double lossy = teleport_fidelity(c);
  TeleportConfig ideal = lossless(c.r_E, 0.1);
  EXPECT_LT(lossy, teleport_fidelity(ideal));
  c.n_th_b = 0.2;
  EXPECT_LT(teleport_fidelity(c), lossy);
}

TEST(Teleport, InputStateSeesPathThreeLoss) {
  TeleportConfig c = TeleportConfig::with_losses(1.0, 1.0, 1.0, 0.1);
  c.eps[2] = 0.3;
  c.n_s = 1.0;
  const GaussianState in = teleport_input_state(c);
  EXPECT_NEAR(in.mean(0), std::sqrt(0.7), 1e-15);
  EXPECT_NEAR(in.cov(0, 0), 0.25, 1e-15);
}

TEST(Teleport, BobNoisePhaseDependence) {
  BobNoiseParams p;
  p.r_E = gain_db_to_squeeze(3.0);
  const double at_pi = bob_noise_photons(p, kPi);
  const double at_zero = bob_noise_photons(p, 0.0);
  EXPECT_LT(at_pi, at_zero);
  for (int i = 0; i < 36; ++i) EXPECT_GE(bob_noise_photons(p, 2 * kPi * i / 36.0), at_pi - 1e-12);
  // Lossless: 1/2 + cosh(2r) + sinh(2r) cos(phi).
  const double r = p.r_E;
  EXPECT_NEAR(at_pi, 0.5 + std::cosh(2 * r) - std::sinh(2 * r), 1e-12);
  p.alpha_bar = 0.8;
  const std::vector<double> curve = bob_noise_vs_pump_phase(p, {0.0, kPi});
  EXPECT_GT(curve[1], at_pi);
}

TEST(Teleport, ValidateRejectsBadLosses) {
  TeleportConfig c;
  c.eps[0] = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}
