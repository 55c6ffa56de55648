#pragma once

// Three-path teleportation circuit. Path 1 carries the Entangler's b mode to
// Bob, path 2 its a mode to Alice, path 3 the unknown input at Alice's second
// port. Alice's output on path 3 is fed forward through a directional coupler
// onto path 1.

#include "cvnet/gaussian.hpp"
#include "cvnet/units.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace cvnet {

enum class FeedforwardConvention {
  kCouplerOnly,            // k = beta_c G_A
  kIncludeFeedforwardLoss  // k = beta_c (1 - eps_6) G_A
};

struct TeleportConfig {
  double r_E = 0.0;
  double r_A = 0.0;
  double phi_E = 0.0;
  double phi_A = kPi;
  // Power losses eps_1..eps_6. eps_1..3 sit before Alice's amplifier on
  // paths 1..3, eps_4..6 after it. eps_1 = beta (Bob), eps_2 = alpha
  // (Alice), eps_6 = beta_f (feedforward).
  std::array<double, 6> eps{};
  double beta_c = 0.1;
  double n_th_a = 0.0;  // bath and input occupation on path 2
  double n_th_b = 0.0;  // bath and input occupation on paths 1 and 3
  double n_input = 0.0; // thermal occupation of the path-3 input state
  double n_s = 0.0;     // coherent input photon number
  double theta_s = 0.0;
  FeedforwardConvention convention = FeedforwardConvention::kIncludeFeedforwardLoss;

  void validate() const;
  double k() const;
  bool unity_gain() const { return std::abs(k() - 1.0) < 1e-9; }

  // Loss assignment used by the experiment: alpha_bar on Alice's entangled
  // arm, beta_bar on Bob's, beta_f_bar on the feedforward line.
  static TeleportConfig with_losses(double alpha_bar, double beta_bar, double beta_f_bar, double beta_c);
};

// Solves sqrt(beta_c * beta_f_bar) cosh(r_A) = 1. Throws ConfigError naming
// the required cosh(r_A) when no real solution exists.
double unity_feedforward_r_A(double beta_c, double beta_f_bar = 1.0);

struct TeleportSequence {
  Mat T;   // 6x6 = C L2 S2 L1 S1
  Mat A;   // added noise
  Mat V0;  // input covariance
  Vec c0;  // input mean
};

TeleportSequence build_teleport_sequence(const TeleportConfig& cfg);

// Full 6x6 output state, the path-1 teleported state, and the path-3 input
// state the fidelity compares against.
GaussianState teleport_full_state(const TeleportConfig& cfg);
GaussianState teleported_state(const TeleportConfig& cfg);
GaussianState teleport_input_state(const TeleportConfig& cfg);

// Fidelity between single-mode Gaussian states (vacuum variance 1/4).
double gaussian_fidelity(const GaussianState& in, const GaussianState& out);

double teleport_fidelity(const TeleportConfig& cfg);

struct ClosedFormFidelities {
  double k = 0.0;
  double F_q_lossless = 0.0;  // 1 / (e^{-2 r_E} + 1)
  double F_c_lossless = 0.0;  // r_E = 0, parameterised by beta_c and G_A
  double F_q_nonunity = 0.0;  // finite beta_c, k = beta_c G_A
  double F_c_nonunity = 0.0;  // small-coupling form in k only
};

// Lossless closed forms. k is taken as beta_c cosh^2(r_A).
ClosedFormFidelities closed_form_fidelities(double r_E, double r_A, double beta_c, double n_s);

// C(r_E, k): exact expanded form and its small-coupling, large-gain limit.
double fidelity_c_expanded(double r_E, double k, double beta_c);
double fidelity_c_limit(double r_E, double k);

// Closed-form lossless V_tel^(1) diagonal entry.
double lossless_teleported_variance(double r_E, double r_A, double beta_c);

struct BobNoiseParams {
  double r_E = 0.0;
  double alpha_bar = 1.0;
  double beta_bar = 1.0;
  double n_input = 0.0;   // thermal photons of Alice's input
  double n_entangler_a = 0.0;
  double n_entangler_b = 0.0;
  double n_bath_a = 0.0;
  double n_bath_b = 0.0;
};

// Symmetrized photon-number variance at Bob (vacuum = 1/2) under unity
// feedforward, high eraser gain and weak coupling. Minima at odd multiples of pi.
double bob_noise_photons(const BobNoiseParams& p, double phi_ea);
std::vector<double> bob_noise_vs_pump_phase(const BobNoiseParams& p, const std::vector<double>& phi_grid);

}  // namespace cvnet
