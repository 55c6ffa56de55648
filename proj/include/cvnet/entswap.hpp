#pragma once

// Three-mixer entanglement swapping. Entangler 1 sends its a mode to Alice
// and its b mode to Claire; Entangler 2 sends its a mode to Claire and its b
// mode to Bob. Claire amplifies the pair and her a output is fed forward
// through a lossy line and a directional coupler onto Alice's path.

#include "cvnet/gaussian.hpp"
#include "cvnet/measures.hpp"
#include "cvnet/units.hpp"

#include <optional>
#include <vector>

namespace cvnet {

struct SwapConfig {
  double r_1 = 0.0;
  double r_2 = 0.0;
  double r_3 = 0.0;  // Claire; only the physical circuit reads it
  double phi_1 = 0.0;
  double phi_2 = 0.0;
  double phi_3 = kPi;
  double alpha_bar_1 = 1.0;  // Entangler 1 a -> Alice
  double alpha_bar_2 = 1.0;  // Entangler 2 a -> Claire
  double beta_bar_1 = 1.0;   // Entangler 1 b -> Claire
  double beta_bar_2 = 1.0;   // Entangler 2 b -> Bob
  double alpha_bar_f = 1.0;  // feedforward line
  double beta_c = 0.1;
  // Coherent drive on Entangler 2 port b.
  double n_in = 0.0;
  double theta_in = 0.0;

  void validate() const;
  bool default_phases() const;

  // Loss set used for the swapping measurements.
  static SwapConfig measured_losses();
};

// Claire gain giving sqrt(beta_c alpha_bar_f) cosh(r_3) = 1. ConfigError
// naming the required cosh(r_3) when the product is outside (0, 1].
double unity_claire_r3(double beta_c, double alpha_bar_f);

// Closed-form Alice/Bob covariance over (x_A, p_A, x_B, p_B): unity
// feedforward with Claire in the high-gain limit, vacuum inputs and baths.
// Non-default phases are routed through swap_circuit_state.
Cov4 swap_covariance(const SwapConfig& cfg);

enum class ClaireModel {
  kHighGainLimit,  // a_out3 = (a_in3 + e^{i phi_3} b_in3^dag) / sqrt(beta_c alpha_bar_f)
  kPhysical        // symplectic squeeze with r_3
};

// Full circuit over modes (a1, b1, a2, b2). After Claire the a2 slot holds
// her fed-forward output; Alice ends in mode 0 and Bob in mode 3.
GaussianState swap_circuit_state(const SwapConfig& cfg, ClaireModel model);

// Alice/Bob marginal of swap_circuit_state.
GaussianState swap_alice_bob(const SwapConfig& cfg, ClaireModel model);

struct SwapDuan {
  double minus = 0.0;
  double plus = 0.0;
};

// Lossless, beta_c -> 0: minus = e^{-2 r_2} + e^{-2 r_1}, plus = e^{2 r_2} + e^{-2 r_1}.
SwapDuan swap_duan_lossless(double r_1, double r_2);

struct SwapGainPoint {
  double g2_db = 0.0;
  EntanglementReport report;
};

std::vector<SwapGainPoint> swap_report_vs_gain(SwapConfig cfg, const std::vector<double>& g2_db,
                                               EofPolicy policy = EofPolicy::kSymmetricOnly);

struct SwapMeans {
  Eigen::Vector2d alice = Eigen::Vector2d::Zero();
  Eigen::Vector2d bob = Eigen::Vector2d::Zero();
};

SwapMeans swap_coherent_means(const SwapConfig& cfg);

struct SwapPhasePoint {
  double delta_phi = 0.0;  // radians; Entangler 2 pump phase is delta_phi - pi
  double var_minus = 0.0;  // Var(x_A - x_B), vacuum 1/2
  double var_plus = 0.0;   // Var(x_A + x_B)
};

std::vector<SwapPhasePoint> swap_phase_sweep(SwapConfig cfg, const std::vector<double>& delta_phi);

// Entangler-2 gain (dB) at which the swapped Duan minus first drops to 1.
// The lossless value is analytic; the lossy one is root-solved on the
// closed-form covariance. Empty when the criterion is never violated on
// [0, max_g2_db].
std::optional<double> swap_threshold_lossless_db(double r_1);
std::optional<double> swap_threshold_db(const SwapConfig& cfg, double max_g2_db = 20.0);

}  // namespace cvnet
