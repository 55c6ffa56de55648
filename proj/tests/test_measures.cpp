#include "cvnet/measures.hpp"
#include "cvnet/gaussian.hpp"
#include "cvnet/tmsq.hpp"
#include "cvnet/units.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cvnet;

namespace {

Cov4 tmsv(double r, double phi = 0.0) {
  return apply(two_mode_squeeze(r, phi, 0, 1, 2), GaussianState::vacuum(2)).cov;
}

// Entanglement entropy of a two-mode squeezed vacuum, in ebits.
double tmsv_entropy(double r) {
  const double c = std::cosh(r) * std::cosh(r), s = std::sinh(r) * std::sinh(r);
  return s == 0.0 ? 0.0 : c * std::log2(c) - s * std::log2(s);
}

// Local single-mode squeeze and rotation on each mode.
Cov4 apply_local(const Cov4& V, double s1, double t1, double s2, double t2) {
  auto local = [](double s, double t) {
    Eigen::Matrix2d sq = Eigen::Vector2d(std::exp(-s), std::exp(s)).asDiagonal();
    return Eigen::Matrix2d(rotation2(t) * sq);
  };
  Cov4 L = Cov4::Zero();
  L.block<2, 2>(0, 0) = local(s1, t1);
  L.block<2, 2>(2, 2) = local(s2, t2);
  return L * V * L.transpose();
}

}  // namespace

TEST(Measures, VacuumIdentities) {
  const Cov4 V = 0.25 * Cov4::Identity();
  const EntanglementReport r = entanglement_report(V);
  EXPECT_DOUBLE_EQ(r.log_negativity, 0.0);
  ASSERT_TRUE(r.eof.has_value());
  EXPECT_DOUBLE_EQ(*r.eof, 0.0);
  EXPECT_NEAR(r.duan.minus, 1.0, 1e-15);
  EXPECT_NEAR(r.duan.plus, 1.0, 1e-15);
  EXPECT_NEAR(r.purity, 1.0, 1e-15);
  EXPECT_NEAR(r.nu_minus, 0.25, 1e-15);
  EXPECT_NEAR(r.simon.delta_s, -0.375, 1e-15);
}

TEST(Measures, TwoModeSqueezedVacuum) {
  for (double r : {0.1, 0.5, 1.0, 2.0}) {
    const Cov4 V = tmsv(r);
    EXPECT_NEAR(nu_minus(V), 0.25 * std::exp(-2 * r), 1e-13);
    EXPECT_NEAR(log_negativity(V), 2 * r / std::log(2.0), 1e-11);
    EXPECT_NEAR(duan_epr(V).minus, std::exp(-2 * r), 1e-12);
    EXPECT_NEAR(duan_epr(V).plus, std::exp(2 * r), 1e-10 * std::exp(2 * r));
    EXPECT_NEAR(purity(V), 1.0, 1e-10);
    const EofResult e = entanglement_of_formation(V);
    ASSERT_TRUE(e.value.has_value());
    EXPECT_NEAR(*e.value, tmsv_entropy(r), 1e-10);
  }
}

TEST(Measures, EofClosedFormAtHalf) {
  // c+ = (x^-1/2 + x^1/2)^2 / 4 = 9/8 and c- = 1/8 at x = 1/2.
  const double expected = 1.125 * std::log2(1.125) - 0.125 * std::log2(0.125);
  EXPECT_NEAR(eof_h(0.5), expected, 1e-15);
  EXPECT_NEAR(eof_h(0.5), 0.56617, 1e-5);
}

TEST(Measures, DuanIsInvariantUnderModeTwoRotation) {
  const Cov4 V = lossy_tmsq_cov(0.6, 0.62, 0.9);
  const double ref = duan_epr(V).minus;
  for (double phi : {0.3, 1.2, 2.5, -0.7}) {
    Cov4 R = Cov4::Identity();
    R.block<2, 2>(2, 2) = rotation2(phi);
    EXPECT_NEAR(duan_epr(R * V * R.transpose()).minus, ref, 1e-12);
  }
  // A pump-phase rotation of the squeezer is undone by the optimal angle.
  EXPECT_NEAR(duan_epr(tmsv(0.8, 1.3)).minus, std::exp(-1.6), 1e-12);
}

TEST(Measures, LocalSymplecticInvariance) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const Cov4 V = lossy_tmsq_cov(1.0 + 0.5 * u(rng), 0.5 + 0.4 * std::abs(u(rng)), 0.8);
    const Cov4 W = apply_local(V, 0.5 * u(rng), 3 * u(rng), 0.5 * u(rng), 3 * u(rng));
    EXPECT_NEAR(nu_minus(W), nu_minus(V), 1e-12);
    EXPECT_NEAR(log_negativity(W), log_negativity(V), 1e-10);
    EXPECT_NEAR(purity(W), purity(V), 1e-12);
  }
}

TEST(Measures, PurityOfThermalProduct) {
  const Cov4 V = GaussianState::thermal({0.5, 1.5}).cov;
  EXPECT_NEAR(purity(V), 1.0 / (2.0 * 4.0), 1e-15);
}

TEST(Measures, EntanglementRequiresNuBelowQuarter) {
  const Cov4 separable = GaussianState::thermal({0.2, 0.2}).cov;
  EXPECT_DOUBLE_EQ(log_negativity(separable), 0.0);
  EXPECT_GT(log_negativity(lossy_tmsq_cov(0.3, 0.9, 0.9)), 0.0);
  EXPECT_DOUBLE_EQ(log_negativity_from_nu(0.3), 0.0);
  EXPECT_NEAR(log_negativity_from_nu(0.125), 1.0, 1e-15);
}

TEST(Measures, EofPolicyOnAsymmetricStates) {
  const Cov4 V = lossy_tmsq_cov(1.0, 0.3, 1.0);
  const EofResult strict = entanglement_of_formation(V, EofPolicy::kSymmetricOnly);
  EXPECT_FALSE(strict.value.has_value());
  EXPECT_FALSE(strict.diagnostic.empty());
  const EofResult loose = entanglement_of_formation(V, EofPolicy::kAlwaysFormula);
  ASSERT_TRUE(loose.value.has_value());
  EXPECT_NEAR(*loose.value, std::max(0.0, eof_h(4 * nu_minus(V))), 1e-15);
}

TEST(Measures, EbitRates) {
  EXPECT_NEAR(ebit_rate(1.25, 56e6), 70e6, 1e-6);
  EXPECT_NEAR(ebit_rate(0.21, 32e6), 6.72e6, 1e-6);
  const EntanglementReport r = entanglement_report(tmsv(0.5), 10e6);
  ASSERT_TRUE(r.ebit_rate_hz.has_value());
  EXPECT_NEAR(*r.ebit_rate_hz, tmsv_entropy(0.5) * 10e6, 1e-3);
}

TEST(Measures, SimonSeparatesEntangledFromVacuum) {
  const double vac = simon_criterion(0.25 * Cov4::Identity()).delta_s;
  EXPECT_LT(simon_criterion(tmsv(0.5)).delta_s, vac);
  const SimonResult s = simon_criterion(tmsv(0.5));
  EXPECT_NEAR(s.delta_s, s.lhs - s.rhs, 1e-15);
}

TEST(Measures, TwoModeBlockExtraction) {
  GaussianState s = GaussianState::thermal({0.1, 0.2, 0.3});
  s.cov(0, 5) = s.cov(5, 0) = 0.07;
  const Cov4 b = two_mode_block(s.cov, 0, 2);
  EXPECT_DOUBLE_EQ(b(0, 3), 0.07);
  EXPECT_DOUBLE_EQ(b(2, 2), 0.25 * 1.6);
}

TEST(Measures, ReportJsonHasNullForMissingEof) {
  const EntanglementReport r = entanglement_report(lossy_tmsq_cov(1.0, 0.3, 1.0));
  const nlohmann::json j = to_json(r);
  EXPECT_TRUE(j.at("e_f").is_null());
  EXPECT_NEAR(j.at("e_n").get<double>(), r.log_negativity, 0.0);
}
