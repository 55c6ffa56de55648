#include "cvnet/gaussian.hpp"
#include "cvnet/teleport.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cvnet;

namespace {

// Random single-mode Gaussian state: thermal occupation, squeezing, rotation
// and displacement drawn from `rng`.
GaussianState random_single_mode(std::mt19937_64& rng, bool pure) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double n = pure ? 0.0 : 2.0 * u(rng);
  const double r = 0.8 * u(rng);
  const double th = 2.0 * kPi * u(rng);
  Eigen::Matrix2d sq = Eigen::Vector2d(std::exp(-2.0 * r), std::exp(2.0 * r)).asDiagonal();
  Eigen::Matrix2d rot;
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  GaussianState s;
  s.cov = (0.25 * (1.0 + 2.0 * n)) * rot * sq * rot.transpose();
  s.mean = Vec(2);
  s.mean << 2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0;
  return s;
}

// pi * integral of W_in W_out over phase space; the overlap formula for the
// fidelity when the input is pure.
double wigner_overlap(const GaussianState& a, const GaussianState& b) {
  const double h = 0.02, lim = 8.0;
  double sum = 0.0;
  Vec pt(2);
  for (double x = -lim; x <= lim; x += h) {
    for (double p = -lim; p <= lim; p += h) {
      pt << x, p;
      sum += wigner_density(a, pt) * wigner_density(b, pt);
    }
  }
  return kPi * sum * h * h;
}

}  // namespace

TEST(GaussianState, VacuumAndThermal) {
  const GaussianState v = GaussianState::vacuum(3);
  EXPECT_TRUE(v.cov.isApprox(0.25 * Mat::Identity(6, 6)));
  EXPECT_EQ(v.n_modes(), 3);
  const GaussianState t = GaussianState::thermal({0.0, 1.5});
  EXPECT_DOUBLE_EQ(t.cov(2, 2), 1.0);
  EXPECT_DOUBLE_EQ(t.cov(3, 3), 1.0);
  EXPECT_DOUBLE_EQ(t.cov(0, 0), 0.25);
}

TEST(GaussianState, MarginalKeepsRequestedOrder) {
  GaussianState s = GaussianState::thermal({0.1, 0.2, 0.3});
  s.mean << 1, 2, 3, 4, 5, 6;
  s.cov(0, 4) = s.cov(4, 0) = 0.05;
  const GaussianState m = s.marginal({2, 0});
  EXPECT_DOUBLE_EQ(m.mean(0), 5.0);
  EXPECT_DOUBLE_EQ(m.mean(3), 2.0);
  EXPECT_DOUBLE_EQ(m.cov(0, 2), 0.05);
  EXPECT_DOUBLE_EQ(m.cov(0, 0), 0.25 * 1.6);
}

TEST(Symplectic, TwoModeSqueezeCovariance) {
  const double r = 0.7;
  const GaussianState s = apply(two_mode_squeeze(r, 0.0, 0, 1, 2), GaussianState::vacuum(2));
  EXPECT_NEAR(s.cov(0, 0), 0.25 * std::cosh(2 * r), 1e-14);
  EXPECT_NEAR(s.cov(1, 1), 0.25 * std::cosh(2 * r), 1e-14);
  EXPECT_NEAR(s.cov(0, 2), 0.25 * std::sinh(2 * r), 1e-14);
  EXPECT_NEAR(s.cov(1, 3), -0.25 * std::sinh(2 * r), 1e-14);
  EXPECT_NEAR(s.cov(0, 3), 0.0, 1e-14);
}

TEST(Symplectic, GeneratorsPreserveOmega) {
  for (double r : {0.0, 0.3, 1.7}) {
    for (double phi : {0.0, 1.1, kPi}) {
      EXPECT_LT(symplecticity_error(two_mode_squeeze(r, phi, 0, 2, 3).matrix), 1e-12);
      EXPECT_LT(symplecticity_error(two_mode_squeeze(r, phi, 2, 1, 3).matrix), 1e-12);
    }
  }
  for (double b : {0.0, 0.1, 0.5, 1.0}) EXPECT_LT(symplecticity_error(directional_coupler(b, 0, 1, 2).matrix), 1e-14);
  EXPECT_LT(symplecticity_error(phase_rotation(0.4, 1, 2).matrix), 1e-14);
  const SymplecticOp c = compose(directional_coupler(0.3, 0, 1, 2), two_mode_squeeze(0.5, 0.2, 0, 1, 2));
  EXPECT_LT(symplecticity_error(c.matrix), 1e-12);
}

TEST(Symplectic, InvalidArgumentsThrow) {
  EXPECT_THROW(two_mode_squeeze(0.1, 0.0, 0, 0, 2), std::invalid_argument);
  EXPECT_THROW(two_mode_squeeze(0.1, 0.0, 0, 2, 2), std::out_of_range);
  EXPECT_THROW(directional_coupler(1.2, 0, 1, 2), std::invalid_argument);
}

TEST(Symplectic, CouplerSplitsCoherentAmplitude) {
  const double beta = 0.1;
  GaussianState in = tensor(GaussianState::coherent(1.0, 0.5), GaussianState::vacuum(1));
  const GaussianState out = apply(directional_coupler(beta, 0, 1, 2), in);
  EXPECT_NEAR(out.mean(0), std::sqrt(1 - beta), 1e-15);
  EXPECT_NEAR(out.mean(1), 0.5 * std::sqrt(1 - beta), 1e-15);
  EXPECT_NEAR(out.mean(2), -std::sqrt(beta), 1e-15);
  EXPECT_NEAR(out.mean(3), -0.5 * std::sqrt(beta), 1e-15);
  EXPECT_TRUE(out.cov.isApprox(0.25 * Mat::Identity(4, 4), 1e-14));
}

TEST(Channel, VacuumIsFixedPointOfPureLoss) {
  const GaussianState v = GaussianState::vacuum(2);
  const GaussianState out = apply(pure_loss_channel({0.3, 0.9}), v);
  EXPECT_TRUE(out.cov.isApprox(v.cov, 1e-15));
}

TEST(Channel, ThermalBathMixing) {
  const double eta = 0.6, n = 0.8;
  const GaussianState in = GaussianState::thermal({2.0});
  const GaussianState out = apply(pure_loss_channel({eta}, {n}), in);
  EXPECT_NEAR(out.cov(0, 0), eta * 0.25 * 5.0 + (1 - eta) * 0.25 * (1 + 2 * n), 1e-14);
}

TEST(Channel, LossNeverPushesBelowVacuum) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double r = 1.5 * u(rng);
    GaussianState s = apply(two_mode_squeeze(r, 2 * kPi * u(rng), 0, 1, 2), GaussianState::vacuum(2));
    s = apply(pure_loss_channel({u(rng), u(rng)}), s);
    EXPECT_TRUE(satisfies_uncertainty(s.cov));
    EXPECT_GE(symplectic_eigenvalues(s.cov).minCoeff(), 0.25 - 1e-12);
  }
}

TEST(Channel, ComposeMatchesSequentialApplication) {
  const LossyChannel a = as_channel(two_mode_squeeze(0.4, 0.3, 0, 1, 2));
  const LossyChannel b = pure_loss_channel({0.7, 0.5}, {0.2, 0.0});
  GaussianState s = GaussianState::thermal({0.3, 0.1});
  s.mean << 0.2, -0.1, 0.4, 0.0;
  const GaussianState seq = apply(b, apply(a, s));
  const GaussianState once = apply(compose(b, a), s);
  EXPECT_TRUE(seq.cov.isApprox(once.cov, 1e-14));
  EXPECT_TRUE(seq.mean.isApprox(once.mean, 1e-14));
}

TEST(Uncertainty, DetectsViolations) {
  EXPECT_TRUE(satisfies_uncertainty(0.25 * Mat::Identity(2, 2)));
  EXPECT_FALSE(satisfies_uncertainty(0.2 * Mat::Identity(2, 2)));
  Mat squeezed(2, 2);
  squeezed << 0.1, 0.0, 0.0, 0.625;
  EXPECT_TRUE(satisfies_uncertainty(squeezed));
}

TEST(SymplecticEigenvalues, PureTwoModeSqueezedVacuum) {
  const GaussianState s = apply(two_mode_squeeze(1.1, 0.5, 0, 1, 2), GaussianState::vacuum(2));
  const Vec nu = symplectic_eigenvalues(s.cov);
  EXPECT_NEAR(nu(0), 0.25, 1e-12);
  EXPECT_NEAR(nu(1), 0.25, 1e-12);
  const Vec th = symplectic_eigenvalues(GaussianState::thermal({0.5, 2.0}).cov);
  EXPECT_NEAR(th(0), 0.5, 1e-14);
  EXPECT_NEAR(th(1), 1.25, 1e-14);
}

TEST(Wigner, NormalizedOnGrid) {
  std::mt19937_64 rng(11);
  const GaussianState s = random_single_mode(rng, false);
  const double h = 0.02;
  double sum = 0.0;
  Vec pt(2);
  for (double x = -10; x <= 10; x += h)
    for (double p = -10; p <= 10; p += h) {
      pt << x, p;
      sum += wigner_density(s, pt);
    }
  EXPECT_NEAR(sum * h * h, 1.0, 1e-6);
}

TEST(Fidelity, IdenticalStatesGiveOne) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const GaussianState s = random_single_mode(rng, i % 2 == 0);
    EXPECT_NEAR(gaussian_fidelity(s, s), 1.0, 1e-12);
  }
  const GaussianState hot = GaussianState::thermal({4.0});
  EXPECT_NEAR(gaussian_fidelity(hot, hot), 1.0, 1e-12);
}

TEST(Fidelity, CoherentOverlap) {
  // With vacuum variance 1/4 the amplitude is alpha = x + i p, and
  // |<alpha|beta>|^2 = exp(-|alpha - beta|^2).
  const GaussianState a = GaussianState::coherent(0.3, -0.2);
  const GaussianState b = GaussianState::coherent(-0.5, 0.4);
  EXPECT_NEAR(gaussian_fidelity(a, b), std::exp(-(0.64 + 0.36)), 1e-14);
}

TEST(Fidelity, MatchesWignerOverlapForPureInput) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 4; ++i) {
    const GaussianState in = random_single_mode(rng, true);
    const GaussianState out = random_single_mode(rng, false);
    EXPECT_NEAR(gaussian_fidelity(in, out), wigner_overlap(in, out), 1e-6) << "trial " << i;
  }
}

TEST(Fidelity, SymmetricAndBounded) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const GaussianState a = random_single_mode(rng, false);
    const GaussianState b = random_single_mode(rng, false);
    const double f = gaussian_fidelity(a, b);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-12);
    EXPECT_NEAR(f, gaussian_fidelity(b, a), 1e-12);
  }
}
