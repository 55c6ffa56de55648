#pragma once

// Phase-space calculus for multimode Gaussian states.
//
// Conventions: [x, p] = i/2, so the vacuum has variance 1/4 in every
// quadrature. Quadratures are interleaved as (x1, p1, x2, p2, ...), and the
// symplectic form is block-diagonal with [[0, 1], [-1, 0]] per mode.

#include <Eigen/Dense>

#include <vector>

namespace cvnet {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline constexpr double kVacuumVariance = 0.25;

struct GaussianState {
  Vec mean;
  Mat cov;

  int n_modes() const { return static_cast<int>(mean.size() / 2); }

  static GaussianState vacuum(int n_modes);
  static GaussianState thermal(const std::vector<double>& occupations);
  // Coherent amplitude given as quadrature means (x, p) for a single mode.
  static GaussianState coherent(double x, double p);

  // Gaussian marginal over the listed modes, in the listed order.
  GaussianState marginal(const std::vector<int>& modes) const;
};

// Direct sum of independent states (block-diagonal covariance).
GaussianState tensor(const GaussianState& a, const GaussianState& b);

struct SymplecticOp {
  Mat matrix;
  int n_modes() const { return static_cast<int>(matrix.rows() / 2); }
};

// General Gaussian channel: mean -> X mean, cov -> X cov X^T + Y.
struct LossyChannel {
  Mat X;
  Mat Y;
  std::vector<double> transmissions;
  int n_modes() const { return static_cast<int>(X.rows() / 2); }
};

Mat symplectic_form(int n_modes);

SymplecticOp identity_op(int n_modes);
SymplecticOp two_mode_squeeze(double r, double phi_p, int mode_a, int mode_b, int n_modes);
SymplecticOp phase_rotation(double phi, int mode, int n_modes);
SymplecticOp directional_coupler(double beta_c, int path_a, int path_b, int n_modes);

// compose(second, first) applies `first`, then `second`.
SymplecticOp compose(const SymplecticOp& second, const SymplecticOp& first);
LossyChannel compose(const LossyChannel& second, const LossyChannel& first);
LossyChannel as_channel(const SymplecticOp& op);

// One power transmission and one bath occupation per mode.
LossyChannel pure_loss_channel(const std::vector<double>& transmissions,
                               const std::vector<double>& bath_occupations);
LossyChannel pure_loss_channel(const std::vector<double>& transmissions);

GaussianState apply(const SymplecticOp& op, const GaussianState& state);
GaussianState apply(const LossyChannel& channel, const GaussianState& state);

// max |S Omega S^T - Omega|.
double symplecticity_error(const Mat& S);

// Heisenberg-uncertainty check cov + (i/4) Omega >= 0. Reconstructed
// experimental matrices may fail it, so nothing else enforces it.
bool satisfies_uncertainty(const Mat& cov, double tol = 1e-10);

// Symplectic eigenvalues of cov (vacuum has 1/4), ascending.
Vec symplectic_eigenvalues(const Mat& cov);

// Normalized Wigner density; prefactor 1 / ((2 pi)^n sqrt(det V)).
double wigner_density(const GaussianState& state, const Vec& point);

// Block helpers for the 2x2 single-mode building blocks.
Eigen::Matrix2d rotation2(double phi);
Eigen::Matrix2d pauli_z2();

}  // namespace cvnet
