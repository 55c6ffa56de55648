#include "cvnet/teleport.hpp"

#include "cvnet/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cvnet {
namespace {

Mat loss_amplitudes(double e1, double e2, double e3) {
  Vec d(6);
  d << std::sqrt(1.0 - e1), std::sqrt(1.0 - e1), std::sqrt(1.0 - e2), std::sqrt(1.0 - e2), std::sqrt(1.0 - e3),
      std::sqrt(1.0 - e3);
  return d.asDiagonal();
}

Mat loss_noise(double e1, double e2, double e3, double n1, double n2, double n3) {
  Vec d(6);
  const double a = e1 * (1.0 + 2.0 * n1) / 4.0;
  const double b = e2 * (1.0 + 2.0 * n2) / 4.0;
  const double c = e3 * (1.0 + 2.0 * n3) / 4.0;
  d << a, a, b, b, c, c;
  return d.asDiagonal();
}

}  // namespace

void TeleportConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError("teleport: " + m); };
  if (!(r_E >= 0.0) || !(r_A >= 0.0)) fail("squeeze parameters must be >= 0");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] >= 0.0 && eps[i] <= 1.0)) fail("loss eps_" + std::to_string(i + 1) + " must lie in [0, 1]");
  }
  if (!(beta_c >= 0.0 && beta_c <= 1.0)) fail("beta_c must lie in [0, 1], got " + std::to_string(beta_c));
  if (!(n_th_a >= 0.0 && n_th_b >= 0.0 && n_input >= 0.0)) fail("thermal occupations must be >= 0");
  if (!(n_s >= 0.0)) fail("n_s must be >= 0");
}

double TeleportConfig::k() const {
  const double ga = std::cosh(r_A) * std::cosh(r_A);
  const double bf = convention == FeedforwardConvention::kIncludeFeedforwardLoss ? 1.0 - eps[5] : 1.0;
  return beta_c * bf * ga;
}

TeleportConfig TeleportConfig::with_losses(double alpha_bar, double beta_bar, double beta_f_bar, double beta_c) {
  TeleportConfig c;
  c.eps = {1.0 - beta_bar, 1.0 - alpha_bar, 0.0, 0.0, 0.0, 1.0 - beta_f_bar};
  c.beta_c = beta_c;
  return c;
}

double unity_feedforward_r_A(double beta_c, double beta_f_bar) {
  const double product = beta_c * beta_f_bar;
  if (!(product > 0.0 && product <= 1.0)) {
    std::ostringstream msg;
    msg << "unity feedforward unsolvable: requires cosh(r_A) = 1/sqrt(beta_c * beta_f_bar) with beta_c * beta_f_bar = "
        << product << " (needs 0 < product <= 1)";
    throw ConfigError(msg.str());
  }
  return std::acosh(1.0 / std::sqrt(product));
}

TeleportSequence build_teleport_sequence(const TeleportConfig& cfg) {
  cfg.validate();
  const auto& e = cfg.eps;
  const Mat S1 = two_mode_squeeze(cfg.r_E, cfg.phi_E, 0, 1, 3).matrix;
  const Mat S2 = two_mode_squeeze(cfg.r_A, cfg.phi_A, 1, 2, 3).matrix;
  const Mat C = directional_coupler(cfg.beta_c, 0, 2, 3).matrix;
  const Mat L1 = loss_amplitudes(e[0], e[1], e[2]);
  const Mat L2 = loss_amplitudes(e[3], e[4], e[5]);
  const Mat A1 = loss_noise(e[0], e[1], e[2], cfg.n_th_b, cfg.n_th_a, cfg.n_th_b);
  const Mat A2 = loss_noise(e[3], e[4], e[5], cfg.n_th_b, cfg.n_th_a, cfg.n_th_b);

  TeleportSequence seq;
  seq.T = C * L2 * S2 * L1 * S1;
  const Mat M = C * L2 * S2;
  seq.A = M * A1 * M.transpose() + C * A2 * C.transpose();
  seq.A = 0.5 * (seq.A + seq.A.transpose()).eval();

  Vec v0(6);
  const double vb = 0.25 * (1.0 + 2.0 * cfg.n_th_b);
  const double va = 0.25 * (1.0 + 2.0 * cfg.n_th_a);
  const double vi = 0.25 * (1.0 + 2.0 * cfg.n_input);
  v0 << vb, vb, va, va, vi, vi;
  seq.V0 = v0.asDiagonal();
  seq.c0 = Vec::Zero(6);
  seq.c0(4) = std::sqrt(cfg.n_s) * std::cos(cfg.theta_s);
  seq.c0(5) = std::sqrt(cfg.n_s) * std::sin(cfg.theta_s);
  return seq;
}

GaussianState teleport_full_state(const TeleportConfig& cfg) {
  const TeleportSequence seq = build_teleport_sequence(cfg);
  GaussianState s{seq.T * seq.c0, seq.T * seq.V0 * seq.T.transpose() + seq.A};
  s.cov = 0.5 * (s.cov + s.cov.transpose()).eval();
  return s;
}

GaussianState teleported_state(const TeleportConfig& cfg) { return teleport_full_state(cfg).marginal({0}); }

GaussianState teleport_input_state(const TeleportConfig& cfg) {
  // The input as it arrives at Alice's port: path 3 after the first loss
  // stage (S1 does not touch path 3).
  const TeleportSequence seq = build_teleport_sequence(cfg);
  const double t = 1.0 - cfg.eps[2];
  GaussianState s;
  s.mean = std::sqrt(t) * seq.c0.segment<2>(4);
  s.cov = t * seq.V0.block<2, 2>(4, 4) + Mat::Identity(2, 2) * cfg.eps[2] * (1.0 + 2.0 * cfg.n_th_b) / 4.0;
  return s;
}

double gaussian_fidelity(const GaussianState& in, const GaussianState& out) {
  if (in.mean.size() != 2 || out.mean.size() != 2) throw std::invalid_argument("gaussian_fidelity: single-mode states expected");
  const Eigen::Matrix2d sum = in.cov + out.cov;
  const double lambda = sum.determinant();
  if (!(lambda > 1e-300)) throw NumericalError("gaussian_fidelity: V_in + V_out is singular");
  const double d_in = std::max(0.0, in.cov.determinant() - 1.0 / 16.0);
  const double d_out = std::max(0.0, out.cov.determinant() - 1.0 / 16.0);
  const double delta = 16.0 * d_in * d_out;
  const Eigen::Vector2d beta = in.mean - out.mean;
  // The 1/2 in the exponent makes two coherent states overlap as exp(-|a-b|^2)
  // when x = (a + a^dag)/2.
  const double expo = 0.5 * beta.dot(sum.inverse() * beta);
  return 0.5 * std::exp(-expo) / (std::sqrt(lambda + delta) - std::sqrt(delta));
}

double teleport_fidelity(const TeleportConfig& cfg) {
  return gaussian_fidelity(teleport_input_state(cfg), teleported_state(cfg));
}

double fidelity_c_expanded(double r_E, double k, double beta_c) {
  const double root = std::sqrt(std::max(0.0, k - k * beta_c - beta_c + beta_c * beta_c));
  return 0.25 * (1.0 + k + (1.0 - 2.0 * beta_c + k) * std::cosh(2.0 * r_E) - 2.0 * root * std::sinh(2.0 * r_E));
}

double fidelity_c_limit(double r_E, double k) {
  const double ch = std::cosh(r_E);
  return 0.5 * ((1.0 + k) * ch * ch - std::sqrt(k) * std::sinh(2.0 * r_E));
}

double lossless_teleported_variance(double r_E, double r_A, double beta_c) {
  const double bcb = 1.0 - beta_c;
  const double sa = std::sinh(r_A);
  const double ca = std::cosh(r_A);
  return 0.25 * (bcb * std::cosh(2.0 * r_E) + beta_c * sa * sa * std::cosh(2.0 * r_E) -
                 2.0 * std::sqrt(bcb * beta_c) * sa * std::sinh(2.0 * r_E) + beta_c * ca * ca);
}

ClosedFormFidelities closed_form_fidelities(double r_E, double r_A, double beta_c, double n_s) {
  ClosedFormFidelities f;
  const double ga = std::cosh(r_A) * std::cosh(r_A);
  f.k = beta_c * ga;
  f.F_q_lossless = 1.0 / (std::exp(-2.0 * r_E) + 1.0);
  // The displacement mismatch is sqrt(n_s)(1 - sqrt(k)) along the input
  // direction; with isotropic V_in + V_tel = C I the exponent is n_s B / (2C).
  const double a = 0.5 * (1.0 + beta_c * (ga - 1.0));
  const double b = f.k - 2.0 * std::sqrt(f.k) + 1.0;
  f.F_c_lossless = std::exp(-n_s * b / (2.0 * a)) / (2.0 * a);
  const double c = fidelity_c_expanded(r_E, f.k, beta_c);
  f.F_q_nonunity = std::exp(-n_s * b / (2.0 * c)) / (2.0 * c);
  f.F_c_nonunity = std::exp(-n_s * (std::sqrt(f.k) - 1.0) * (std::sqrt(f.k) - 1.0) / (1.0 + f.k)) / (1.0 + f.k);
  return f;
}

double bob_noise_photons(const BobNoiseParams& p, double phi_ea) {
  const double ab = p.alpha_bar;
  const double bb = p.beta_bar;
  const double ch = std::cosh(p.r_E);
  const double sh = std::sinh(p.r_E);
  const double cross = std::sqrt(ab * bb) * std::sinh(2.0 * p.r_E) * std::cos(phi_ea);
  const double var_in = 0.5 + p.n_input;
  const double var_a = 0.5 + p.n_entangler_a;
  const double var_b = 0.5 + p.n_entangler_b;
  const double var_tha = 0.5 + p.n_bath_a;
  const double var_thb = 0.5 + p.n_bath_b;
  return var_in + (ab * ch * ch + bb * sh * sh + cross) * var_a + (ab * sh * sh + bb * ch * ch + cross) * var_b +
         (1.0 - ab) * var_tha + (1.0 - bb) * var_thb;
}

std::vector<double> bob_noise_vs_pump_phase(const BobNoiseParams& p, const std::vector<double>& phi_grid) {
  std::vector<double> out;
  out.reserve(phi_grid.size());
  for (double phi : phi_grid) out.push_back(bob_noise_photons(p, phi));
  return out;
}

}  // namespace cvnet
