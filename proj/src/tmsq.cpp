#include "cvnet/tmsq.hpp"

#include "cvnet/errors.hpp"
#include "cvnet/units.hpp"

#include <cmath>
#include <stdexcept>

namespace cvnet {
namespace {

void check_transmission(double t, const char* name) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " + std::to_string(t));
  }
}

Cov4 standard_form_cov(double v11, double v33, double v13) {
  Cov4 v = Cov4::Zero();
  v(0, 0) = v(1, 1) = v11;
  v(2, 2) = v(3, 3) = v33;
  v(0, 2) = v(2, 0) = v13;
  v(1, 3) = v(3, 1) = -v13;
  return v;
}

}  // namespace

JmConfig JmConfig::preset(const std::string& name) {
  JmConfig c;
  c.name = name;
  if (name == "JM1") {
    c.gamma_a_hz = 103e6;
    c.gamma_b_hz = 78e6;
  } else if (name == "JM2") {
    c.gamma_a_hz = 97e6;
    c.gamma_b_hz = 90e6;
  } else if (name == "JM3") {
    c.gamma_a_hz = 78e6;
    c.gamma_b_hz = 84e6;
  } else {
    throw std::invalid_argument("unknown JM preset '" + name + "' (expected JM1, JM2 or JM3)");
  }
  return c;
}

void JmConfig::validate() const {
  if (!(f_b_hz > f_a_hz && f_a_hz > 0.0)) throw std::invalid_argument("JmConfig: need 0 < f_a < f_b");
  if (!(gamma_a_hz > 0.0 && gamma_b_hz > 0.0)) throw std::invalid_argument("JmConfig: linewidths must be positive");
  if (!(gain_db >= 0.0)) throw std::invalid_argument("JmConfig: gain_db must be >= 0");
  check_transmission(alpha_bar, "alpha_bar");
  check_transmission(beta_bar, "beta_bar");
}

Cov4 ideal_tmsq_cov(double r) {
  return standard_form_cov(0.25 * std::cosh(2.0 * r), 0.25 * std::cosh(2.0 * r), 0.25 * std::sinh(2.0 * r));
}

Cov4 lossy_tmsq_cov(double r, double alpha_bar, double beta_bar) {
  check_transmission(alpha_bar, "alpha_bar");
  check_transmission(beta_bar, "beta_bar");
  const double c = std::cosh(2.0 * r);
  const double s = std::sinh(2.0 * r);
  return standard_form_cov(0.25 * (alpha_bar * c + (1.0 - alpha_bar)), 0.25 * (beta_bar * c + (1.0 - beta_bar)),
                           0.25 * std::sqrt(alpha_bar * beta_bar) * s);
}

GaussianState lossy_tmsq_state(double r, double phi_p, double alpha_bar, double beta_bar, double bath_a,
                               double bath_b) {
  const GaussianState squeezed = apply(two_mode_squeeze(r, phi_p, 0, 1, 2), GaussianState::vacuum(2));
  return apply(pure_loss_channel({alpha_bar, beta_bar}, {bath_a, bath_b}), squeezed);
}

double asym_loss_var_minus(double r, double alpha_bar, double beta_bar) {
  const double sa = std::sqrt(alpha_bar);
  const double sb = std::sqrt(beta_bar);
  return 0.5 * ((1.0 - 0.5 * (alpha_bar + beta_bar)) + 0.25 * std::exp(-2.0 * r) * (sa + sb) * (sa + sb) +
                0.25 * std::exp(2.0 * r) * (sa - sb) * (sa - sb));
}

double asym_loss_var_plus(double r, double alpha_bar, double beta_bar) {
  const double sa = std::sqrt(alpha_bar);
  const double sb = std::sqrt(beta_bar);
  return 0.5 * ((1.0 - 0.5 * (alpha_bar + beta_bar)) + 0.25 * std::exp(2.0 * r) * (sa + sb) * (sa + sb) +
                0.25 * std::exp(-2.0 * r) * (sa - sb) * (sa - sb));
}

double sym_loss_log_negativity(double r, double alpha) {
  const double e = std::exp(-2.0 * r);
  return -std::log2(e + alpha * (1.0 - e));
}

double sym_loss_purity(double r, double alpha) {
  return 1.0 / (1.0 + 2.0 * (1.0 - alpha) * alpha * (std::cosh(2.0 * r) - 1.0));
}

double asym_loss_log_negativity_approx(double r, double alpha, double beta) {
  const double eps = 0.5 * (alpha + beta);
  const double delta = alpha + beta > 0.0 ? (alpha - beta) / (alpha + beta) : 0.0;
  const double e = std::exp(-2.0 * r);
  return -std::log2(e + eps * (1.0 - e) + std::tanh(r) * eps * eps * delta * delta);
}

double asym_loss_purity_approx(double r, double alpha, double beta) {
  const double eps = 0.5 * (alpha + beta);
  const double delta = alpha + beta > 0.0 ? (alpha - beta) / (alpha + beta) : 0.0;
  const double base = 1.0 / (1.0 + 2.0 * (1.0 - eps) * eps * (std::cosh(2.0 * r) - 1.0));
  if (eps <= 0.0 || eps >= 1.0) return base;
  const double k = eps * delta / (2.0 * (1.0 - eps) * eps);
  return base - k * k * std::exp(-2.0 * r);
}

EprVariances epr_variance_vs_phase(double r, double alpha_bar, double beta_bar, double phi, double phi_p) {
  const Cov4 v = lossy_tmsq_cov(r, alpha_bar, beta_bar);
  const double local = v(0, 0) + v(2, 2);
  const double cross = 2.0 * v(0, 2) * std::cos(phi_p - phi);
  return {local - cross, local + cross};
}

double dynamical_bandwidth(double gamma_a_hz, double gamma_b_hz, double gain_linear) {
  if (!(gamma_a_hz > 0.0 && gamma_b_hz > 0.0)) throw std::invalid_argument("dynamical_bandwidth: linewidths must be positive");
  if (!(gain_linear >= 1.0)) throw std::invalid_argument("dynamical_bandwidth: gain must be >= 1");
  const double gamma0 = 2.0 * gamma_a_hz * gamma_b_hz / (gamma_a_hz + gamma_b_hz);
  return gamma0 / std::sqrt(gain_linear);
}

EraserOutput eraser_referred_quadratures(double gain_linear, double i_a, double q_a, double i_b, double q_b) {
  if (!(gain_linear >= 1.0)) throw std::invalid_argument("eraser: gain must be >= 1");
  const double w = std::sqrt((gain_linear - 1.0) / gain_linear);
  return {i_a + w * i_b, q_a - w * q_b};
}

EraserOutput eraser_limit(double i_a, double q_a, double i_b, double q_b) { return {i_a + i_b, q_a - q_b}; }

}  // namespace cvnet
