#include "cvnet/measures.hpp"

#include "cvnet/errors.hpp"
#include "cvnet/units.hpp"

#include <cmath>
#include <sstream>

namespace cvnet {

double DuanResult::minus_db() const { return ratio_to_db(minus); }
double DuanResult::plus_db() const { return ratio_to_db(plus); }

StandardForm standard_form(const Cov4& V) {
  // Rotating mode 2 by theta maps the cross block C to C R(theta)^T; the
  // x-x minus p-p correlation (V13 - V24) peaks at the angle below.
  const double c = V(0, 2) - V(1, 3);
  const double s = V(0, 3) + V(1, 2);
  StandardForm f;
  f.v11 = 0.5 * (V(0, 0) + V(1, 1));
  f.v33 = 0.5 * (V(2, 2) + V(3, 3));
  f.v13 = 0.5 * std::hypot(c, s);
  f.angle = std::atan2(s, c);
  return f;
}

DuanResult duan_epr(const Cov4& V) {
  const StandardForm f = standard_form(V);
  DuanResult d;
  d.minus = 2.0 * (f.v11 + f.v33 - 2.0 * f.v13);
  d.plus = 2.0 * (f.v11 + f.v33 + 2.0 * f.v13);
  d.optimal_angle = f.angle;
  return d;
}

SimonResult simon_criterion(const Cov4& V) {
  const StandardForm f = standard_form(V);
  const double det_like = f.v11 * f.v33 - f.v13 * f.v13;
  SimonResult s;
  s.lhs = 16.0 * det_like * det_like;
  s.rhs = (f.v11 + f.v33) + 2.0 * f.v13 * f.v13 - 1.0 / 16.0;
  s.delta_s = s.lhs - s.rhs;
  return s;
}

double nu_minus(const Cov4& V) {
  const double det_a = V.block<2, 2>(0, 0).determinant();
  const double det_b = V.block<2, 2>(2, 2).determinant();
  const double det_c = V.block<2, 2>(0, 2).determinant();
  const double det_v = V.partialPivLu().determinant();
  const double tilde = det_a + det_b - 2.0 * det_c;
  double disc = tilde * tilde - 4.0 * det_v;
  if (disc < 0.0) {
    if (disc < -1e-12) {
      std::ostringstream msg;
      msg << "invalid covariance: partial-transpose discriminant " << disc;
      throw NumericalError(msg.str());
    }
    disc = 0.0;
  }
  // nu_-^2 = det V / nu_+^2 avoids the cancellation in (tilde - sqrt(disc)) / 2.
  const double nu_plus2 = 0.5 * (tilde + std::sqrt(disc));
  const double nu2 = nu_plus2 > 0.0 ? det_v / nu_plus2 : 0.0;
  if (!(nu2 > 0.0)) {
    std::ostringstream msg;
    msg << "invalid covariance: squared symplectic eigenvalue " << nu2;
    throw NumericalError(msg.str());
  }
  return std::sqrt(nu2);
}

double log_negativity_from_nu(double nu) { return std::max(0.0, -std::log2(4.0 * nu)); }

double log_negativity(const Cov4& V) { return log_negativity_from_nu(nu_minus(V)); }

double eof_h(double x) {
  if (!(x > 0.0)) throw NumericalError("entanglement of formation needs 4 nu_minus > 0");
  const double a = (1.0 + x) * (1.0 + x) / (4.0 * x);
  const double b = (1.0 - x) * (1.0 - x) / (4.0 * x);
  const double tb = b > 0.0 ? b * std::log2(b) : 0.0;
  return a * std::log2(a) - tb;
}

EofResult entanglement_of_formation(const Cov4& V, EofPolicy policy) {
  const StandardForm f = standard_form(V);
  EofResult out;
  if (policy == EofPolicy::kSymmetricOnly && std::abs(f.v11 - f.v33) >= 0.05 * (f.v11 + f.v33)) {
    std::ostringstream msg;
    msg << "E_F unavailable: closed form needs a symmetric state, got V11=" << f.v11 << " V33=" << f.v33;
    out.diagnostic = msg.str();
    return out;
  }
  const double x = 4.0 * nu_minus(V);
  out.value = x >= 1.0 ? 0.0 : std::max(0.0, eof_h(x));
  return out;
}

double purity(const Cov4& V) {
  const double det = V.partialPivLu().determinant();
  if (!(det > 0.0)) throw NumericalError("purity: covariance determinant must be positive");
  return 1.0 / (16.0 * std::sqrt(det));
}

double ebit_rate(double eof, double bandwidth_hz) { return eof * bandwidth_hz; }

EntanglementReport entanglement_report(const Cov4& V, std::optional<double> bandwidth_hz, EofPolicy policy) {
  EntanglementReport r;
  r.duan = duan_epr(V);
  r.simon = simon_criterion(V);
  r.nu_minus = nu_minus(V);
  r.log_negativity = log_negativity_from_nu(r.nu_minus);
  EofResult eof = entanglement_of_formation(V, policy);
  r.eof = eof.value;
  r.eof_diagnostic = eof.diagnostic;
  r.purity = purity(V);
  if (bandwidth_hz && r.eof) r.ebit_rate_hz = ebit_rate(*r.eof, *bandwidth_hz);
  return r;
}

nlohmann::json to_json(const EntanglementReport& report) {
  nlohmann::json j;
  j["delta_epr_minus"] = report.duan.minus;
  j["delta_epr_plus"] = report.duan.plus;
  j["delta_epr_minus_db"] = report.duan.minus_db();
  j["delta_epr_plus_db"] = report.duan.plus_db();
  j["delta_s"] = report.simon.delta_s;
  j["nu_minus"] = report.nu_minus;
  j["e_n"] = report.log_negativity;
  j["e_f"] = report.eof ? nlohmann::json(*report.eof) : nlohmann::json(nullptr);
  if (!report.eof_diagnostic.empty()) j["e_f_diagnostic"] = report.eof_diagnostic;
  j["purity"] = report.purity;
  j["ebit_rate_hz"] = report.ebit_rate_hz ? nlohmann::json(*report.ebit_rate_hz) : nlohmann::json(nullptr);
  return j;
}

Cov4 two_mode_block(const Eigen::MatrixXd& cov, int mode_i, int mode_j) {
  Cov4 v;
  const int idx[2] = {mode_i, mode_j};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) v.block<2, 2>(2 * a, 2 * b) = cov.block<2, 2>(2 * idx[a], 2 * idx[b]);
  return v;
}

}  // namespace cvnet
