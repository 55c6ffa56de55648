#pragma once

// Single Josephson-mixer two-mode squeezer: closed-form covariances with
// output loss, EPR variances versus pump phase, dynamical bandwidth and the
// which-path eraser quadrature map.

#include "cvnet/gaussian.hpp"
#include "cvnet/measures.hpp"

#include <string>

namespace cvnet {

struct JmConfig {
  std::string name = "JM1";
  double f_a_hz = 7.231e9;
  double f_b_hz = 9.695e9;
  double gain_db = 0.0;
  double pump_phase = 0.0;  // radians
  // Linewidths gamma/2pi, stored in Hz as tabulated.
  double gamma_a_hz = 103e6;
  double gamma_b_hz = 78e6;
  double alpha_bar = 1.0;  // power transmission on mode a's output path
  double beta_bar = 1.0;   // power transmission on mode b's output path

  static JmConfig preset(const std::string& name);
  void validate() const;
};

Cov4 ideal_tmsq_cov(double r);
Cov4 lossy_tmsq_cov(double r, double alpha_bar, double beta_bar);

// Same state produced with the generic channel machinery (squeeze, then
// pure loss into baths with the given occupations).
GaussianState lossy_tmsq_state(double r, double phi_p, double alpha_bar, double beta_bar,
                               double bath_a = 0.0, double bath_b = 0.0);

// Extremal EPR variances Var(x1 - x2) and Var(x1 + x2) under asymmetric loss.
double asym_loss_var_minus(double r, double alpha_bar, double beta_bar);
double asym_loss_var_plus(double r, double alpha_bar, double beta_bar);

// Symmetric loss alpha on both arms.
double sym_loss_log_negativity(double r, double alpha);
double sym_loss_purity(double r, double alpha);

// Large-r approximations for asymmetric losses alpha, beta (loss fractions).
double asym_loss_log_negativity_approx(double r, double alpha, double beta);
double asym_loss_purity_approx(double r, double alpha, double beta);

struct EprVariances {
  double minus = 0.0;  // Var(x1 - x2)
  double plus = 0.0;   // Var(x1 + x2)
};

// Sinusoidal dependence on the measurement phase phi relative to the pump
// phase phi_p; the minimum of `minus` sits at phi = phi_p.
EprVariances epr_variance_vs_phase(double r, double alpha_bar, double beta_bar, double phi, double phi_p = 0.0);

// gamma_0 = 2 g_a g_b / (g_a + g_b); B = gamma_0 / sqrt(G). Inputs in Hz.
double dynamical_bandwidth(double gamma_a_hz, double gamma_b_hz, double gain_linear);

struct EraserOutput {
  double i_out = 0.0;
  double q_out = 0.0;
};

// Finite-gain eraser output of mode a referred to the input; tends to
// (I_a + I_b, Q_a - Q_b) as the gain grows.
EraserOutput eraser_referred_quadratures(double gain_linear, double i_a, double q_a, double i_b, double q_b);
EraserOutput eraser_limit(double i_a, double q_a, double i_b, double q_b);

}  // namespace cvnet
