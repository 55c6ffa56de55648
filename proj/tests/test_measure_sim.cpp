#include "cvnet/measure_sim.hpp"
#include "cvnet/rng.hpp"
#include "cvnet/tmsq.hpp"
#include "cvnet/units.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

using namespace cvnet;

namespace {

const GaussianState kTruth = lossy_tmsq_state(gain_db_to_squeeze(4.0), 0.0, 0.62, 1.0);

std::array<OutputChain, 2> quiet_chains() {
  return {OutputChain::make("a", 1e6, 0.5, 7e9), OutputChain::make("b", 1e6, 0.5, 9e9)};
}

}  // namespace

TEST(Rng, DerivedSeedsAreDistinctAndStable) {
  EXPECT_EQ(derive_seed(1, "on", 0), derive_seed(1, "on", 0));
  EXPECT_NE(derive_seed(1, "on", 0), derive_seed(1, "off", 0));
  EXPECT_NE(derive_seed(1, "on", 0), derive_seed(1, "on", 1));
  EXPECT_NE(derive_seed(1, "on", 0), derive_seed(2, "on", 0));
  std::uint64_t s = 0;
  EXPECT_EQ(splitmix64(s), 0xe220a8397b1dcdafULL);
}

TEST(OutputChainTest, ThermalVarianceAndConversion) {
  const OutputChain c = OutputChain::make("O3,a", 6.8e6, 16.1, 7.231e9);
  EXPECT_DOUBLE_EQ(c.thermal_variance(), 8.05);
  EXPECT_NEAR(c.conversion_factor(), 1e-6 / (50.0 * kHbar * 2 * kPi * 7.231e9), 1e-6 * c.conversion_factor());
  const auto chains = tmsq_measurement_chains();
  EXPECT_EQ(chains[0].name, "O3,a");
  EXPECT_DOUBLE_EQ(chains[1].g_sys, 1.3e7);
  EXPECT_DOUBLE_EQ(chains[1].n_sys, 15.7);
}

TEST(Sampling, DeterministicAcrossThreadCounts) {
  SampleOptions one;
  one.label = "on";
  SampleOptions many = one;
  many.threads = 4;
  const QuadratureRecord a = sample_records(kTruth, quiet_chains(), 10000, 42, one);
  const QuadratureRecord b = sample_records(kTruth, quiet_chains(), 10000, 42, many);
  EXPECT_EQ((a.samples - b.samples).cwiseAbs().maxCoeff(), 0.0);
  const QuadratureRecord c = sample_records(kTruth, quiet_chains(), 10000, 43, one);
  EXPECT_GT((a.samples - c.samples).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Sampling, RecordCovarianceIncludesChainNoise) {
  const auto chains = quiet_chains();
  const QuadratureRecord r = sample_records(GaussianState::vacuum(2), chains, 200000, 7);
  const Cov4 S = sample_covariance(r);
  const double expect = 0.25 + chains[0].thermal_variance();
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(S(i, i), expect, 5 * expect * std::sqrt(2.0 / 200000));
}

TEST(Sampling, NearSingularCovarianceIsAccepted) {
  GaussianState s = GaussianState::vacuum(2);
  s.cov = lossy_tmsq_cov(3.0, 1.0, 1.0);
  EXPECT_NO_THROW(sample_records(s, quiet_chains(), 100, 1));
}

TEST(Reconstruction, RecoversTruthWithinStatistics) {
  const auto chains = tmsq_measurement_chains();
  SampleOptions o;
  o.label = "on";
  const QuadratureRecord on = sample_records(kTruth, chains, 100000, 99, o);
  o.label = "off";
  const QuadratureRecord off = sample_records(GaussianState::vacuum(2), chains, 100000, 99, o);
  const CovEstimate est = reconstruct_cov(on, off);
  EXPECT_EQ(est.n, 100000);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double sigma = std::sqrt(est.stat_var(i, j));
      EXPECT_LT(std::abs(est.v_hat(i, j) - kTruth.cov(i, j)), 5 * sigma) << i << "," << j;
      EXPECT_NEAR(est.worst_case_lo(i, j), est.v_hat(i, j) - sigma, 1e-15);
      EXPECT_NEAR(est.worst_case_hi(i, j), est.v_hat(i, j) + sigma, 1e-15);
    }
}

TEST(Reconstruction, SamplingVarianceFormula) {
  Cov4 S = Cov4::Identity();
  S(0, 2) = S(2, 0) = 0.5;
  const Cov4 v = covariance_sampling_variance(S, 101);
  EXPECT_DOUBLE_EQ(v(0, 0), 2.0 / 100);
  EXPECT_DOUBLE_EQ(v(0, 2), 1.25 / 100);
  EXPECT_DOUBLE_EQ(v(0, 1), 1.0 / 100);
}

TEST(Reconstruction, SamplingVarianceMatchesReplicas) {
  const auto chains = quiet_chains();
  const int reps = 400;
  const Eigen::Index n = 2000;
  Cov4 sum = Cov4::Zero(), sum2 = Cov4::Zero(), predicted = Cov4::Zero();
  for (int k = 0; k < reps; ++k) {
    const QuadratureRecord r = sample_records(kTruth, chains, n, 1000 + k);
    const Cov4 S = sample_covariance(r);
    sum += S;
    sum2 += S.cwiseProduct(S);
    predicted += covariance_sampling_variance(S, n);
  }
  const Cov4 mean = sum / reps;
  const Cov4 empirical = (sum2 / reps - mean.cwiseProduct(mean)) * reps / (reps - 1.0);
  predicted /= reps;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(empirical(i, j) / predicted(i, j), 1.0, 0.2) << i << "," << j;
}

TEST(Reconstruction, MisestimatedGainScalesExcess) {
  auto chains = quiet_chains();
  for (auto& c : chains) c.g_sys_assumed = 1.1 * c.g_sys;
  SampleOptions o;
  o.label = "on";
  const QuadratureRecord on = sample_records(kTruth, chains, 400000, 5, o);
  o.label = "off";
  const QuadratureRecord off = sample_records(GaussianState::vacuum(2), chains, 400000, 5, o);
  const CovEstimate est = reconstruct_cov(on, off);
  const Cov4 expected = (kTruth.cov - 0.25 * Cov4::Identity()) / 1.1 + 0.25 * Cov4::Identity();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(est.v_hat(i, j), expected(i, j), 5 * std::sqrt(est.stat_var(i, j)));
}

TEST(Histogram, NormalizedAndDifferenceIntegratesToZero) {
  const auto chains = quiet_chains();
  const QuadratureRecord on = sample_records(kTruth, chains, 50000, 3);
  SampleOptions o;
  o.label = "off";
  const QuadratureRecord off = sample_records(GaussianState::vacuum(2), chains, 50000, 3, o);
  const Hist2D h = histogram2d(on, 0, 2, 40, -6, 6);
  double total = 0.0;
  for (double d : h.density) total += d;
  EXPECT_NEAR(total * h.bin_width() * h.bin_width(), 1.0, 1e-12);
  EXPECT_GT(h.in_range, 49000);
  const Hist2D diff = histogram_difference(on, off, 0, 2, 40, -6, 6);
  double dsum = 0.0;
  for (double d : diff.density) dsum += d;
  EXPECT_NEAR(dsum, 0.0, 1e-9);
  EXPECT_THROW(histogram2d(on, 0, 2, 4, -6, 6), std::invalid_argument);
}

TEST(WorstCase, EnvelopeContainsCentralValues) {
  const auto chains = quiet_chains();
  const QuadratureRecord on = sample_records(kTruth, chains, 100000, 11);
  SampleOptions o;
  o.label = "off";
  const QuadratureRecord off = sample_records(GaussianState::vacuum(2), chains, 100000, 11, o);
  const CovEstimate est = reconstruct_cov(on, off);
  const WorstCaseReport w = worst_case_report(est, 0.1);
  ASSERT_TRUE(w.physical);
  EXPECT_EQ(w.corners_used, 8);
  EXPECT_LE(w.log_negativity.lo, w.central.log_negativity);
  EXPECT_GE(w.log_negativity.hi, w.central.log_negativity);
  EXPECT_LE(w.delta_epr_minus.lo, w.central.duan.minus);
  EXPECT_GE(w.delta_epr_minus.hi, w.central.duan.minus);
  EXPECT_LT(w.log_negativity.lo, w.log_negativity.hi);
  const nlohmann::json j = to_json(w);
  EXPECT_TRUE(j.contains("bounds"));
}

TEST(WorstCase, UnphysicalEstimateIsFlagged) {
  // With the noisy measurement chains this seed reconstructs a matrix with
  // negative determinant although every entry is within statistics.
  const auto chains = tmsq_measurement_chains();
  const QuadratureRecord on = sample_records(kTruth, chains, 100000, 11);
  SampleOptions o;
  o.label = "off";
  const QuadratureRecord off = sample_records(GaussianState::vacuum(2), chains, 100000, 11, o);
  const CovEstimate est = reconstruct_cov(on, off);
  ASSERT_LT(est.v_hat.determinant(), 0.0);
  const WorstCaseReport w = worst_case_report(est, 0.1);
  EXPECT_FALSE(w.physical);
  EXPECT_NE(w.diagnostic.find("invalid covariance"), std::string::npos);
  EXPECT_TRUE(std::isnan(w.central.log_negativity));
  EXPECT_TRUE(std::isfinite(w.central.duan.minus));
  EXPECT_LT(w.corners_used, 8);
  const nlohmann::json j = to_json(w);
  EXPECT_FALSE(j["physical"].get<bool>());
  EXPECT_TRUE(j["e_n"].is_null());
}

TEST(WorstCase, CollapsesWithoutUncertainty) {
  CovEstimate est;
  est.v_hat = kTruth.cov;
  const WorstCaseReport w = worst_case_report(est, 0.0);
  EXPECT_NEAR(w.log_negativity.lo, w.log_negativity.hi, 1e-14);
  EXPECT_NEAR(w.central.log_negativity, log_negativity(kTruth.cov), 1e-14);
}

TEST(RecordCsv, RoundTrip) {
  const QuadratureRecord r = sample_records(kTruth, quiet_chains(), 50, 8);
  const auto path = (std::filesystem::temp_directory_path() / "cvnet_record_roundtrip.csv").string();
  write_record_csv(path, r);
  const QuadratureRecord back = read_record_csv(path);
  EXPECT_EQ(back.samples.rows(), 50);
  EXPECT_EQ((back.samples - r.samples).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(back.seed, r.seed);
  std::filesystem::remove(path);
}
