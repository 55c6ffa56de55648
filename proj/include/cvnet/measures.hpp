#pragma once

// Entanglement and squeezing figures of merit for two-mode covariance
// matrices ordered (x1, p1, x2, p2), vacuum variance 1/4.

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace cvnet {

using Cov4 = Eigen::Matrix4d;

struct DuanResult {
  double minus = 0.0;  // Var(x1 - x2) + Var(p1 + p2) at the optimal local rotation
  double plus = 0.0;
  double optimal_angle = 0.0;  // rotation of mode 2 that brings V to standard form

  double minus_db() const;
  double plus_db() const;
};

// Standard-form parameters (V11, V33, V13) after rotating mode 2.
struct StandardForm {
  double v11 = 0.0;
  double v33 = 0.0;
  double v13 = 0.0;
  double angle = 0.0;
};

StandardForm standard_form(const Cov4& V);

DuanResult duan_epr(const Cov4& V);

struct SimonResult {
  double delta_s = 0.0;  // lhs - rhs
  double lhs = 0.0;      // 16 (V11 V33 - V13^2)^2
  double rhs = 0.0;      // (V11 + V33) + 2 V13^2 - 1/16
};

// Literal inequality in the V13 standard-form parameters. The vacuum
// evaluates to -0.375, so only comparisons between states are meaningful.
SimonResult simon_criterion(const Cov4& V);

// Smallest symplectic eigenvalue of the partially transposed state.
double nu_minus(const Cov4& V);
double log_negativity(const Cov4& V);
double log_negativity_from_nu(double nu);

// h(x) of the entanglement-of-formation closed form; x = 4 nu_minus.
double eof_h(double x);

enum class EofPolicy {
  kSymmetricOnly,  // E_F unavailable when |V11 - V33| >= 0.05 (V11 + V33)
  kAlwaysFormula,  // evaluate max(0, h(4 nu_minus)) regardless of symmetry
};

struct EofResult {
  std::optional<double> value;
  std::string diagnostic;
};

EofResult entanglement_of_formation(const Cov4& V, EofPolicy policy = EofPolicy::kSymmetricOnly);

double purity(const Cov4& V);
double ebit_rate(double eof, double bandwidth_hz);

struct EntanglementReport {
  DuanResult duan;
  SimonResult simon;
  double nu_minus = 0.0;
  double log_negativity = 0.0;
  std::optional<double> eof;
  std::string eof_diagnostic;
  double purity = 0.0;
  std::optional<double> ebit_rate_hz;
};

EntanglementReport entanglement_report(const Cov4& V, std::optional<double> bandwidth_hz = std::nullopt,
                                       EofPolicy policy = EofPolicy::kSymmetricOnly);

nlohmann::json to_json(const EntanglementReport& report);

// Extract the 4x4 two-mode block of an arbitrary matrix (modes i, j).
Cov4 two_mode_block(const Eigen::MatrixXd& cov, int mode_i, int mode_j);

}  // namespace cvnet
