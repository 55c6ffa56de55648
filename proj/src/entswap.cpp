#include "cvnet/entswap.hpp"

#include "cvnet/errors.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <sstream>

namespace cvnet {
namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream msg;
    msg << "entswap: " << name << " must lie in [0, 1], got " << v;
    throw ConfigError(msg.str());
  }
}

constexpr int kModes = 4;

// Claire in the high-gain limit: mode 2 receives g (a2 + Z R(phi_3) b1),
// which is not symplectic.
LossyChannel claire_limit(double gain, double phi_3) {
  Mat X = Mat::Identity(2 * kModes, 2 * kModes);
  X.block<2, 2>(4, 4) = gain * Eigen::Matrix2d::Identity();
  X.block<2, 2>(4, 2) = gain * pauli_z2() * rotation2(phi_3);
  return {X, Mat::Zero(2 * kModes, 2 * kModes), {}};
}

}  // namespace

void SwapConfig::validate() const {
  if (!(r_1 >= 0.0 && r_2 >= 0.0 && r_3 >= 0.0)) throw ConfigError("entswap: squeeze parameters must be >= 0");
  check_unit(alpha_bar_1, "alpha_bar_1");
  check_unit(alpha_bar_2, "alpha_bar_2");
  check_unit(beta_bar_1, "beta_bar_1");
  check_unit(beta_bar_2, "beta_bar_2");
  check_unit(alpha_bar_f, "alpha_bar_f");
  check_unit(beta_c, "beta_c");
  if (!(n_in >= 0.0)) throw ConfigError("entswap: n_in must be >= 0");
}

bool SwapConfig::default_phases() const {
  auto wrap = [](double a) { return std::remainder(a, 2.0 * kPi); };
  return std::abs(wrap(phi_1)) < 1e-12 && std::abs(wrap(phi_2)) < 1e-12 && std::abs(wrap(phi_3 - kPi)) < 1e-12;
}

SwapConfig SwapConfig::measured_losses() {
  SwapConfig c;
  c.alpha_bar_1 = 0.9;
  c.alpha_bar_2 = 0.72;
  c.beta_bar_1 = 0.62;
  c.beta_bar_2 = 0.97;
  c.alpha_bar_f = 0.85;
  c.beta_c = 0.1;
  c.r_3 = gain_db_to_squeeze(10.7);
  return c;
}

double unity_claire_r3(double beta_c, double alpha_bar_f) {
  const double product = beta_c * alpha_bar_f;
  if (!(product > 0.0 && product <= 1.0)) {
    std::ostringstream msg;
    msg << "unity feedforward unsolvable: requires cosh(r_3) = 1/sqrt(beta_c * alpha_bar_f) with beta_c * alpha_bar_f = "
        << product << " (needs 0 < product <= 1)";
    throw ConfigError(msg.str());
  }
  return std::acosh(1.0 / std::sqrt(product));
}

Cov4 swap_covariance(const SwapConfig& cfg) {
  cfg.validate();
  unity_claire_r3(cfg.beta_c, cfg.alpha_bar_f);
  if (!cfg.default_phases()) {
    const GaussianState ab = swap_alice_bob(cfg, ClaireModel::kHighGainLimit);
    return ab.cov;
  }
  const double bcb = 1.0 - cfg.beta_c;
  const double c1 = std::cosh(2.0 * cfg.r_1);
  const double s1 = std::sinh(2.0 * cfg.r_1);
  const double c2 = std::cosh(2.0 * cfg.r_2);
  const double s2 = std::sinh(2.0 * cfg.r_2);

  const double v11 = 0.25 * cfg.alpha_bar_2 * c2 + 0.25 * (cfg.beta_bar_1 + bcb * cfg.alpha_bar_1) * c1 -
                     0.5 * std::sqrt(bcb * cfg.alpha_bar_1 * cfg.beta_bar_1) * s1 +
                     0.25 * ((1.0 - cfg.alpha_bar_2) + (1.0 - cfg.beta_bar_1) + cfg.beta_c * (1.0 - cfg.alpha_bar_f) +
                             bcb * (1.0 - cfg.alpha_bar_1));
  const double v33 = 0.25 * cfg.beta_bar_2 * c2 + 0.25 * (1.0 - cfg.beta_bar_2);
  const double v13 = 0.25 * std::sqrt(cfg.beta_bar_2 * cfg.alpha_bar_2) * s2;

  Cov4 v = Cov4::Zero();
  v(0, 0) = v(1, 1) = v11;
  v(2, 2) = v(3, 3) = v33;
  v(0, 2) = v(2, 0) = v13;
  v(1, 3) = v(3, 1) = -v13;
  return v;
}

GaussianState swap_circuit_state(const SwapConfig& cfg, ClaireModel model) {
  cfg.validate();
  GaussianState s = GaussianState::vacuum(kModes);
  s.mean(6) = std::sqrt(cfg.n_in) * std::cos(cfg.theta_in);
  s.mean(7) = std::sqrt(cfg.n_in) * std::sin(cfg.theta_in);

  s = apply(two_mode_squeeze(cfg.r_1, cfg.phi_1, 0, 1, kModes), s);
  s = apply(two_mode_squeeze(cfg.r_2, cfg.phi_2, 2, 3, kModes), s);
  s = apply(pure_loss_channel({cfg.alpha_bar_1, cfg.beta_bar_1, cfg.alpha_bar_2, cfg.beta_bar_2}), s);

  if (model == ClaireModel::kHighGainLimit) {
    const double product = cfg.beta_c * cfg.alpha_bar_f;
    if (!(product > 0.0)) throw ConfigError("entswap: high-gain Claire needs beta_c * alpha_bar_f > 0");
    s = apply(claire_limit(1.0 / std::sqrt(product), cfg.phi_3), s);
  } else {
    s = apply(two_mode_squeeze(cfg.r_3, cfg.phi_3, 2, 1, kModes), s);
  }

  s = apply(pure_loss_channel({1.0, 1.0, cfg.alpha_bar_f, 1.0}), s);
  s = apply(directional_coupler(cfg.beta_c, 0, 2, kModes), s);
  return s;
}

GaussianState swap_alice_bob(const SwapConfig& cfg, ClaireModel model) {
  return swap_circuit_state(cfg, model).marginal({0, 3});
}

SwapDuan swap_duan_lossless(double r_1, double r_2) {
  const double tail = std::exp(-2.0 * r_1);
  return {std::exp(-2.0 * r_2) + tail, std::exp(2.0 * r_2) + tail};
}

std::vector<SwapGainPoint> swap_report_vs_gain(SwapConfig cfg, const std::vector<double>& g2_db, EofPolicy policy) {
  std::vector<SwapGainPoint> out;
  out.reserve(g2_db.size());
  for (double g : g2_db) {
    cfg.r_2 = gain_db_to_squeeze(g);
    out.push_back({g, entanglement_report(swap_covariance(cfg), std::nullopt, policy)});
  }
  return out;
}

SwapMeans swap_coherent_means(const SwapConfig& cfg) {
  const GaussianState ab = swap_alice_bob(cfg, ClaireModel::kHighGainLimit);
  SwapMeans m;
  m.alice = ab.mean.segment<2>(0);
  m.bob = ab.mean.segment<2>(2);
  return m;
}

std::vector<SwapPhasePoint> swap_phase_sweep(SwapConfig cfg, const std::vector<double>& delta_phi) {
  std::vector<SwapPhasePoint> out;
  out.reserve(delta_phi.size());
  for (double d : delta_phi) {
    cfg.phi_2 = d - kPi;
    const Mat v = swap_alice_bob(cfg, ClaireModel::kHighGainLimit).cov;
    const double local = v(0, 0) + v(2, 2);
    out.push_back({d, local - 2.0 * v(0, 2), local + 2.0 * v(0, 2)});
  }
  return out;
}

std::optional<double> swap_threshold_lossless_db(double r_1) {
  if (!(r_1 > 0.0)) return std::nullopt;
  const double r_2 = -0.5 * std::log1p(-std::exp(-2.0 * r_1));
  return squeeze_to_gain_db(r_2);
}

std::optional<double> swap_threshold_db(const SwapConfig& cfg, double max_g2_db) {
  SwapConfig c = cfg;
  auto excess = [&c](double g_db) {
    c.r_2 = gain_db_to_squeeze(g_db);
    return duan_epr(swap_covariance(c)).minus - 1.0;
  };
  if (excess(0.0) <= 0.0) return 0.0;
  // Scan for the first sign change, then polish the bracket.
  constexpr int kSteps = 400;
  double lo = 0.0;
  for (int i = 1; i <= kSteps; ++i) {
    const double hi = max_g2_db * i / kSteps;
    if (excess(hi) <= 0.0) {
      boost::uintmax_t iters = 100;
      const auto bracket = boost::math::tools::toms748_solve(
          excess, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
      return 0.5 * (bracket.first + bracket.second);
    }
    lo = hi;
  }
  return std::nullopt;
}

}  // namespace cvnet
