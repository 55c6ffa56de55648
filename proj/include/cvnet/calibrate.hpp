#pragma once

// Output-chain calibration: noise power versus termination temperature or
// mixer gain, SNR improvement, Levenberg-Marquardt extraction of
// (G_sys, N_sys), and intermediate loss between mixers sharing a line.

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace cvnet {

// Output noise in photons: 1/2 coth(hbar omega / 2 k_B T) + N_sys, with the
// T -> 0 limit 1/2 + N_sys.
double photons_vs_temperature(double t_kelvin, double n_sys, double omega);
// G_J / 2 + (G_J - 1) / 2 + N_sys.
double photons_vs_gain(double g_j, double n_sys);

// Power in watts: G_sys * BW * hbar omega * photons.
double noise_power_vs_temperature(double t_kelvin, double g_sys, double n_sys, double omega, double bw_hz);
double noise_power_vs_gain(double g_j, double g_sys, double n_sys, double omega, double bw_hz);

double system_noise_temperature(double n_sys, double omega);
double zero_point_temperature(double omega);

// G_J / G_N for a chain with noise temperature T_sys.
double snr_improvement(double g_j, double t_sys_kelvin, double omega);

enum class SweepKind { kTemperature, kJmGain };

struct NoiseSweep {
  SweepKind kind = SweepKind::kJmGain;
  std::vector<double> x;      // kelvin or linear JM gain, strictly increasing
  std::vector<double> power;  // watts
  double omega = 0.0;
  double bw_hz = 1e6;

  void validate() const;
};

struct FitOptions {
  int max_iterations = 200;
  double tolerance = 1e-14;  // on the log-parameter step
};

struct FitResult {
  double g_sys = 0.0;
  double n_sys = 0.0;
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();  // over (g_sys, n_sys)
  double residual_norm = 0.0;                            // of log residuals
  double t_sys_kelvin = 0.0;
  int iterations = 0;
};

// Fits one (G_sys, N_sys) pair to every sweep jointly. All sweeps must share
// omega, since N_sys is a photon number at that frequency.
FitResult fit_chain(const std::vector<NoiseSweep>& sweeps, const FitOptions& options = {});
FitResult fit_chain(const NoiseSweep& sweep, const FitOptions& options = {});

// Noiseless model sweep, optionally with multiplicative Gaussian noise of
// relative size noise_fraction.
NoiseSweep synthetic_sweep(SweepKind kind, const std::vector<double>& x, double g_sys, double n_sys, double omega,
                           double bw_hz, double noise_fraction = 0.0, std::uint64_t seed = 0);

struct IntermediateLoss {
  double eta = 1.0;
  double loss_db = 0.0;        // 10 log10(eta), <= 0
  double n_sys_bottom = 0.0;   // N_sys referred to the farther mixer
  std::string warning;
};

// eta = G_sys(bottom) / G_sys(top); ratios up to 1.05 are clamped to 1 with a
// warning, larger ones are rejected.
IntermediateLoss intermediate_loss_from_series(double g_sys_top, double g_sys_bottom, double n_sys_top = 0.0);

// Removes a known coupling attenuation (positive dB) from a measured
// transmission ratio.
double transmission_after_coupling(double eta, double coupling_db);

nlohmann::json to_json(const FitResult& fit);

}  // namespace cvnet
