#include "cvnet/gaussian.hpp"

#include "cvnet/errors.hpp"
#include "cvnet/units.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace cvnet {
namespace {

void check_mode(int mode, int n_modes, const char* what) {
  if (mode < 0 || mode >= n_modes) {
    throw std::out_of_range(std::string(what) + ": mode index " + std::to_string(mode) +
                            " outside [0, " + std::to_string(n_modes) + ")");
  }
}

void check_dims(const Mat& m, const GaussianState& s, const char* what) {
  if (m.rows() != s.mean.size() || m.cols() != s.mean.size()) {
    throw std::invalid_argument(std::string(what) + ": operator is " + std::to_string(m.rows()) +
                                "x" + std::to_string(m.cols()) + " but state has dimension " +
                                std::to_string(s.mean.size()));
  }
}

Mat symmetrized(const Mat& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

Eigen::Matrix2d rotation2(double phi) {
  Eigen::Matrix2d r;
  r << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
  return r;
}

Eigen::Matrix2d pauli_z2() {
  Eigen::Matrix2d z;
  z << 1.0, 0.0, 0.0, -1.0;
  return z;
}

GaussianState GaussianState::vacuum(int n_modes) {
  if (n_modes <= 0) throw std::invalid_argument("vacuum: n_modes must be positive");
  return {Vec::Zero(2 * n_modes), kVacuumVariance * Mat::Identity(2 * n_modes, 2 * n_modes)};
}

GaussianState GaussianState::thermal(const std::vector<double>& occupations) {
  const int n = static_cast<int>(occupations.size());
  GaussianState s = vacuum(n);
  for (int k = 0; k < n; ++k) {
    if (!(occupations[k] >= 0.0)) throw std::invalid_argument("thermal: occupation must be >= 0");
    s.cov.block<2, 2>(2 * k, 2 * k) *= 1.0 + 2.0 * occupations[k];
  }
  return s;
}

GaussianState GaussianState::coherent(double x, double p) {
  GaussianState s = vacuum(1);
  s.mean << x, p;
  return s;
}

GaussianState GaussianState::marginal(const std::vector<int>& modes) const {
  const int n = n_modes();
  const int m = static_cast<int>(modes.size());
  GaussianState out{Vec(2 * m), Mat(2 * m, 2 * m)};
  for (int i = 0; i < m; ++i) {
    check_mode(modes[i], n, "marginal");
    out.mean.segment<2>(2 * i) = mean.segment<2>(2 * modes[i]);
    for (int j = 0; j < m; ++j) {
      out.cov.block<2, 2>(2 * i, 2 * j) = cov.block<2, 2>(2 * modes[i], 2 * modes[j]);
    }
  }
  return out;
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const auto na = a.mean.size();
  const auto nb = b.mean.size();
  GaussianState s{Vec(na + nb), Mat::Zero(na + nb, na + nb)};
  s.mean << a.mean, b.mean;
  s.cov.topLeftCorner(na, na) = a.cov;
  s.cov.bottomRightCorner(nb, nb) = b.cov;
  return s;
}

Mat symplectic_form(int n_modes) {
  Mat omega = Mat::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

SymplecticOp identity_op(int n_modes) { return {Mat::Identity(2 * n_modes, 2 * n_modes)}; }

SymplecticOp two_mode_squeeze(double r, double phi_p, int mode_a, int mode_b, int n_modes) {
  if (mode_a == mode_b) throw std::invalid_argument("degenerate squeeze: both modes are " + std::to_string(mode_a));
  check_mode(mode_a, n_modes, "two_mode_squeeze");
  check_mode(mode_b, n_modes, "two_mode_squeeze");
  if (!std::isfinite(r) || r < 0.0) {
    throw std::invalid_argument("two_mode_squeeze: r must be finite and >= 0 (the pump phase carries the sign), got " +
                                std::to_string(r));
  }
  SymplecticOp op = identity_op(n_modes);
  const Eigen::Matrix2d cross = std::sinh(r) * pauli_z2() * rotation2(phi_p);
  const Eigen::Matrix2d diag = std::cosh(r) * Eigen::Matrix2d::Identity();
  op.matrix.block<2, 2>(2 * mode_a, 2 * mode_a) = diag;
  op.matrix.block<2, 2>(2 * mode_b, 2 * mode_b) = diag;
  op.matrix.block<2, 2>(2 * mode_a, 2 * mode_b) = cross;
  op.matrix.block<2, 2>(2 * mode_b, 2 * mode_a) = cross;
  return op;
}

SymplecticOp phase_rotation(double phi, int mode, int n_modes) {
  check_mode(mode, n_modes, "phase_rotation");
  SymplecticOp op = identity_op(n_modes);
  op.matrix.block<2, 2>(2 * mode, 2 * mode) = rotation2(phi);
  return op;
}

SymplecticOp directional_coupler(double beta_c, int path_a, int path_b, int n_modes) {
  if (!(beta_c >= 0.0 && beta_c <= 1.0)) {
    throw std::invalid_argument("directional_coupler: beta_c must lie in [0, 1], got " + std::to_string(beta_c));
  }
  if (path_a == path_b) throw std::invalid_argument("directional_coupler: paths must differ");
  check_mode(path_a, n_modes, "directional_coupler");
  check_mode(path_b, n_modes, "directional_coupler");
  SymplecticOp op = identity_op(n_modes);
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  const double t = std::sqrt(1.0 - beta_c);
  const double c = std::sqrt(beta_c);
  op.matrix.block<2, 2>(2 * path_a, 2 * path_a) = t * id;
  op.matrix.block<2, 2>(2 * path_b, 2 * path_b) = t * id;
  op.matrix.block<2, 2>(2 * path_a, 2 * path_b) = c * id;
  op.matrix.block<2, 2>(2 * path_b, 2 * path_a) = -c * id;
  return op;
}

SymplecticOp compose(const SymplecticOp& second, const SymplecticOp& first) {
  if (second.matrix.rows() != first.matrix.rows()) throw std::invalid_argument("compose: dimension mismatch");
  return {second.matrix * first.matrix};
}

LossyChannel compose(const LossyChannel& second, const LossyChannel& first) {
  if (second.X.rows() != first.X.rows()) throw std::invalid_argument("compose: dimension mismatch");
  LossyChannel out;
  out.X = second.X * first.X;
  out.Y = symmetrized(second.X * first.Y * second.X.transpose() + second.Y);
  out.transmissions = first.transmissions;
  for (std::size_t k = 0; k < out.transmissions.size() && k < second.transmissions.size(); ++k) {
    out.transmissions[k] *= second.transmissions[k];
  }
  return out;
}

LossyChannel as_channel(const SymplecticOp& op) {
  const auto d = op.matrix.rows();
  return {op.matrix, Mat::Zero(d, d), std::vector<double>(d / 2, 1.0)};
}

LossyChannel pure_loss_channel(const std::vector<double>& transmissions,
                               const std::vector<double>& bath_occupations) {
  if (transmissions.size() != bath_occupations.size()) {
    throw std::invalid_argument("pure_loss_channel: need one bath occupation per mode");
  }
  const int n = static_cast<int>(transmissions.size());
  LossyChannel ch{Mat::Zero(2 * n, 2 * n), Mat::Zero(2 * n, 2 * n), transmissions};
  for (int k = 0; k < n; ++k) {
    const double eta = transmissions[k];
    const double nth = bath_occupations[k];
    if (!(eta >= 0.0 && eta <= 1.0)) {
      throw std::invalid_argument("pure_loss_channel: transmission of mode " + std::to_string(k) +
                                  " must lie in [0, 1], got " + std::to_string(eta));
    }
    if (!(nth >= 0.0)) throw std::invalid_argument("pure_loss_channel: bath occupation must be >= 0");
    ch.X.block<2, 2>(2 * k, 2 * k) = std::sqrt(eta) * Eigen::Matrix2d::Identity();
    ch.Y.block<2, 2>(2 * k, 2 * k) = (1.0 - eta) * (1.0 + 2.0 * nth) * kVacuumVariance * Eigen::Matrix2d::Identity();
  }
  return ch;
}

LossyChannel pure_loss_channel(const std::vector<double>& transmissions) {
  return pure_loss_channel(transmissions, std::vector<double>(transmissions.size(), 0.0));
}

GaussianState apply(const SymplecticOp& op, const GaussianState& state) {
  check_dims(op.matrix, state, "apply");
  return {op.matrix * state.mean, symmetrized(op.matrix * state.cov * op.matrix.transpose())};
}

GaussianState apply(const LossyChannel& channel, const GaussianState& state) {
  check_dims(channel.X, state, "apply");
  check_dims(channel.Y, state, "apply");
  return {channel.X * state.mean, symmetrized(channel.X * state.cov * channel.X.transpose() + channel.Y)};
}

double symplecticity_error(const Mat& S) {
  const Mat omega = symplectic_form(static_cast<int>(S.rows() / 2));
  return (S * omega * S.transpose() - omega).cwiseAbs().maxCoeff();
}

bool satisfies_uncertainty(const Mat& cov, double tol) {
  const int n = static_cast<int>(cov.rows() / 2);
  const Eigen::MatrixXcd h = cov.cast<std::complex<double>>() +
                             std::complex<double>(0.0, kVacuumVariance) * symplectic_form(n).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

Vec symplectic_eigenvalues(const Mat& cov) {
  const int n = static_cast<int>(cov.rows() / 2);
  Eigen::EigenSolver<Mat> es(symplectic_form(n) * cov, false);
  std::vector<double> mags;
  for (int i = 0; i < es.eigenvalues().size(); ++i) mags.push_back(std::abs(es.eigenvalues()[i].imag()));
  std::sort(mags.begin(), mags.end());
  // Eigenvalues come in +-i nu pairs; keep one of each pair.
  Vec nu(n);
  for (int k = 0; k < n; ++k) nu[k] = 0.5 * (mags[2 * k] + mags[2 * k + 1]);
  return nu;
}

double wigner_density(const GaussianState& state, const Vec& point) {
  if (point.size() != state.mean.size()) throw std::invalid_argument("wigner_density: point dimension mismatch");
  Eigen::LDLT<Mat> ldlt(state.cov);
  const double det = state.cov.determinant();
  if (!(det > 1e-300) || ldlt.info() != Eigen::Success) {
    throw NumericalError("degenerate state: covariance determinant " + std::to_string(det));
  }
  const Vec d = point - state.mean;
  const double quad = d.dot(ldlt.solve(d));
  const int n = state.n_modes();
  return std::exp(-0.5 * quad) / (std::pow(2.0 * kPi, n) * std::sqrt(det));
}

}  // namespace cvnet
