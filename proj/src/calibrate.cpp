#include "cvnet/calibrate.hpp"

#include "cvnet/errors.hpp"
#include "cvnet/rng.hpp"
#include "cvnet/units.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cvnet {
namespace {

double half_coth(double t_kelvin, double omega) {
  if (!(t_kelvin > 0.0)) return 0.5;
  const double x = kHbar * omega / (2.0 * kBoltzmann * t_kelvin);
  return 0.5 / std::tanh(x);
}

// Photon number minus (1/2 + N_sys): the part that carries the sweep.
double sweep_term(SweepKind kind, double x, double omega) {
  return kind == SweepKind::kTemperature ? half_coth(x, omega) - 0.5 : x - 1.0;
}

struct Problem {
  std::vector<double> term;
  std::vector<double> log_y;
  std::vector<double> scale;  // BW hbar omega per point
};

// theta = (log G_sys, log(1/2 + N_sys))
Eigen::VectorXd residuals(const Problem& p, const Eigen::Vector2d& theta) {
  Eigen::VectorXd r(p.term.size());
  const double g = std::exp(theta(0));
  const double u = std::exp(theta(1));
  for (std::size_t i = 0; i < p.term.size(); ++i) r(i) = std::log(g * p.scale[i] * (p.term[i] + u)) - p.log_y[i];
  return r;
}

Eigen::MatrixXd jacobian(const Problem& p, const Eigen::Vector2d& theta) {
  Eigen::MatrixXd J(p.term.size(), 2);
  for (int k = 0; k < 2; ++k) {
    const double h = 1e-6 * std::max(1.0, std::abs(theta(k)));
    Eigen::Vector2d up = theta, dn = theta;
    up(k) += h;
    dn(k) -= h;
    J.col(k) = (residuals(p, up) - residuals(p, dn)) / (2.0 * h);
  }
  return J;
}

}  // namespace

double photons_vs_temperature(double t_kelvin, double n_sys, double omega) {
  return half_coth(t_kelvin, omega) + n_sys;
}

double photons_vs_gain(double g_j, double n_sys) { return 0.5 * g_j + 0.5 * (g_j - 1.0) + n_sys; }

double noise_power_vs_temperature(double t_kelvin, double g_sys, double n_sys, double omega, double bw_hz) {
  return g_sys * bw_hz * kHbar * omega * photons_vs_temperature(t_kelvin, n_sys, omega);
}

double noise_power_vs_gain(double g_j, double g_sys, double n_sys, double omega, double bw_hz) {
  return g_sys * bw_hz * kHbar * omega * photons_vs_gain(g_j, n_sys);
}

double system_noise_temperature(double n_sys, double omega) { return n_sys * kHbar * omega / kBoltzmann; }

double zero_point_temperature(double omega) { return kHbar * omega / (2.0 * kBoltzmann); }

double snr_improvement(double g_j, double t_sys_kelvin, double omega) {
  if (!(g_j >= 1.0)) throw std::invalid_argument("snr_improvement: G_J must be >= 1");
  const double tq = zero_point_temperature(omega);
  return (t_sys_kelvin + tq) / (t_sys_kelvin / g_j + tq * (1.0 + (g_j - 1.0) / g_j));
}

void NoiseSweep::validate() const {
  if (x.size() != power.size()) throw ConfigError("noise sweep: x and power differ in length");
  if (x.size() < 4) throw ConfigError("noise sweep: at least 4 points are needed for a 2-parameter fit");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw ConfigError("noise sweep: x must be strictly increasing");
  }
  for (double p : power) {
    if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("noise sweep: powers must be positive");
  }
  if (kind == SweepKind::kJmGain && x.front() < 1.0) throw ConfigError("noise sweep: JM gain must be >= 1");
  if (kind == SweepKind::kTemperature && x.front() < 0.0) throw ConfigError("noise sweep: temperature must be >= 0");
  if (!(omega > 0.0 && bw_hz > 0.0)) throw ConfigError("noise sweep: omega and bandwidth must be positive");
}

FitResult fit_chain(const NoiseSweep& sweep, const FitOptions& options) {
  return fit_chain(std::vector<NoiseSweep>{sweep}, options);
}

FitResult fit_chain(const std::vector<NoiseSweep>& sweeps, const FitOptions& options) {
  if (sweeps.empty()) throw ConfigError("fit_chain: no sweeps");
  Problem p;
  const double omega = sweeps.front().omega;
  for (const auto& s : sweeps) {
    s.validate();
    if (std::abs(s.omega - omega) > 1e-9 * omega) throw ConfigError("fit_chain: joint sweeps must share omega");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      p.term.push_back(sweep_term(s.kind, s.x[i], s.omega));
      p.log_y.push_back(std::log(s.power[i]));
      p.scale.push_back(s.bw_hz * kHbar * s.omega);
    }
  }
  const std::size_t m = p.term.size();

  // Power / scale is affine in the sweep term with slope G and intercept
  // G u, which gives the starting point.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double y = std::exp(p.log_y[i]) / p.scale[i];
    sx += p.term[i];
    sy += y;
    sxx += p.term[i] * p.term[i];
    sxy += p.term[i] * y;
  }
  const double denom = m * sxx - sx * sx;
  if (!(std::abs(denom) > 1e-12 * std::max(1.0, sxx * m))) {
    throw NumericalError("fit_chain: degenerate design, the sweep variable does not change the model");
  }
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;
  Eigen::Vector2d theta;
  if (slope > 0.0 && intercept > 0.0) {
    theta << std::log(slope), std::log(intercept / slope);
  } else {
    theta << std::log(sy / m / (sx / m + 1.0)), 0.0;
  }

  Eigen::VectorXd r = residuals(p, theta);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  int it = 0;
  bool converged = false;
  for (; it < options.max_iterations; ++it) {
    const Eigen::MatrixXd J = jacobian(p, theta);
    const Eigen::Matrix2d JtJ = J.transpose() * J;
    const Eigen::Vector2d g = J.transpose() * r;
    bool improved = false;
    Eigen::Vector2d step = Eigen::Vector2d::Zero();
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::Matrix2d A = JtJ;
      A.diagonal() += lambda * JtJ.diagonal().cwiseMax(1e-12);
      step = A.ldlt().solve(-g);
      const Eigen::Vector2d trial = theta + step;
      const Eigen::VectorXd r_trial = residuals(p, trial);
      const double c_trial = r_trial.squaredNorm();
      if (std::isfinite(c_trial) && c_trial <= cost) {
        theta = trial;
        r = r_trial;
        cost = c_trial;
        lambda = std::max(lambda / 10.0, 1e-12);
        improved = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved || step.norm() < options.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "fit_chain: no convergence after " << options.max_iterations << " iterations (last G_sys="
        << std::exp(theta(0)) << ", N_sys=" << std::exp(theta(1)) - 0.5 << ")";
    throw NumericalError(msg.str());
  }

  FitResult out;
  out.g_sys = std::exp(theta(0));
  const double u = std::exp(theta(1));
  out.n_sys = u - 0.5;
  out.residual_norm = std::sqrt(cost);
  out.iterations = it;
  out.t_sys_kelvin = system_noise_temperature(out.n_sys, omega);
  const Eigen::MatrixXd J = jacobian(p, theta);
  const Eigen::Matrix2d JtJ = J.transpose() * J;
  const double dof = m > 2 ? static_cast<double>(m - 2) : 1.0;
  const Eigen::Matrix2d cov_theta = (cost / dof) * JtJ.inverse();
  const Eigen::Matrix2d D = Eigen::Vector2d(out.g_sys, u).asDiagonal();
  out.covariance = D * cov_theta * D;
  return out;
}

NoiseSweep synthetic_sweep(SweepKind kind, const std::vector<double>& x, double g_sys, double n_sys, double omega,
                           double bw_hz, double noise_fraction, std::uint64_t seed) {
  NoiseSweep s;
  s.kind = kind;
  s.x = x;
  s.omega = omega;
  s.bw_hz = bw_hz;
  NormalStream rng(derive_seed(seed, "calibration-noise", 0));
  for (double xi : x) {
    const double p = kind == SweepKind::kTemperature ? noise_power_vs_temperature(xi, g_sys, n_sys, omega, bw_hz)
                                                     : noise_power_vs_gain(xi, g_sys, n_sys, omega, bw_hz);
    const double factor = noise_fraction > 0.0 ? 1.0 + noise_fraction * rng() : 1.0;
    s.power.push_back(p * std::max(factor, 1e-6));
  }
  return s;
}

IntermediateLoss intermediate_loss_from_series(double g_sys_top, double g_sys_bottom, double n_sys_top) {
  if (!(g_sys_top > 0.0 && g_sys_bottom > 0.0)) throw ConfigError("intermediate loss: gains must be positive");
  IntermediateLoss out;
  double eta = g_sys_bottom / g_sys_top;
  if (eta > 1.05) {
    std::ostringstream msg;
    msg << "inconsistent calibration: the farther mixer sees more gain than the nearer one (ratio " << eta << ")";
    throw ConfigError(msg.str());
  }
  if (eta > 1.0) {
    std::ostringstream msg;
    msg << "gain ratio " << eta << " exceeds 1; clamped to 1";
    out.warning = msg.str();
    eta = 1.0;
  }
  out.eta = eta;
  out.loss_db = ratio_to_db(eta);
  out.n_sys_bottom = n_sys_top / eta + (1.0 - eta) / (2.0 * eta);
  return out;
}

double transmission_after_coupling(double eta, double coupling_db) { return eta * db_to_ratio(coupling_db); }

nlohmann::json to_json(const FitResult& fit) {
  return {{"g_sys_linear", fit.g_sys},
          {"n_sys", fit.n_sys},
          {"t_sys_k", fit.t_sys_kelvin},
          {"g_sys_std", std::sqrt(std::max(0.0, fit.covariance(0, 0)))},
          {"n_sys_std", std::sqrt(std::max(0.0, fit.covariance(1, 1)))},
          {"residual_norm", fit.residual_norm},
          {"iterations", fit.iterations}};
}

}  // namespace cvnet
