#pragma once

// Monte-Carlo heterodyne records. Samples are drawn in device-referred
// quadrature units, pushed through the room-temperature conversion to raw
// volts and referred back with the chain calibration, so a misestimated
// G_sys shows up in the recovered statistics.

#include "cvnet/gaussian.hpp"
#include "cvnet/measures.hpp"

#include <limits>
#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cvnet {

struct OutputChain {
  std::string name;
  double g_sys = 1.0;   // linear power gain
  double n_sys = 0.0;   // added noise photons
  double omega = 0.0;   // rad/s
  double t_int_s = 1e-6;
  double r_load_ohm = 50.0;
  // Gain assumed when referring records back; defaults to g_sys.
  std::optional<double> g_sys_assumed;

  void validate() const;
  // gamma = T_int / (R hbar omega)
  double conversion_factor() const;
  // Per-quadrature variance the chain adds on top of the device output.
  double thermal_variance() const { return 0.5 * n_sys; }
  double referral_gain() const { return g_sys_assumed.value_or(g_sys); }

  static OutputChain make(std::string name, double g_sys, double n_sys, double f_hz, double t_int_s = 1e-6);
};

// Chains of the two-mode squeezing measurement.
std::array<OutputChain, 2> tmsq_measurement_chains();

struct QuadratureRecord {
  Mat samples;  // N x 4, columns x1, p1, x2, p2
  std::uint64_t seed = 0;
  std::string label;
  std::array<OutputChain, 2> chains;

  Eigen::Index size() const { return samples.rows(); }
};

struct SampleOptions {
  std::string label = "record";
  int threads = 1;
  Eigen::Index chunk = 4096;
};

QuadratureRecord sample_records(const GaussianState& state, const std::array<OutputChain, 2>& chains, Eigen::Index n,
                                std::uint64_t seed, const SampleOptions& options = {});

// Unbiased sample covariance (N - 1 normalization).
Cov4 sample_covariance(const QuadratureRecord& record);

// Sampling variance of each entry of a covariance estimate:
// (S_ii S_jj + S_ij^2) / (N - 1), which gives 2 S_ii^2 / (N - 1) on the diagonal.
Cov4 covariance_sampling_variance(const Cov4& S, Eigen::Index n);

struct CovEstimate {
  Cov4 v_hat = Cov4::Zero();
  Cov4 stat_var = Cov4::Zero();
  Cov4 worst_case_lo = Cov4::Zero();
  Cov4 worst_case_hi = Cov4::Zero();
  Eigen::Index n = 0;
};

// V = Cov(on) - Cov(off) + I/4 with the two estimates' variances summed.
CovEstimate reconstruct_cov(const QuadratureRecord& on, const QuadratureRecord& off);

struct Hist2D {
  int bins = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> density;  // row-major, [ix * bins + iy]
  Eigen::Index in_range = 0;

  double bin_width() const { return (hi - lo) / bins; }
  double center(int i) const { return lo + (i + 0.5) * bin_width(); }
  double at(int ix, int iy) const { return density[static_cast<std::size_t>(ix) * bins + iy]; }
};

// Density of the (col_x, col_y) pair on a square grid, normalized over the
// samples that fall inside the range.
Hist2D histogram2d(const QuadratureRecord& record, int col_x, int col_y, int bins, double lo, double hi);
Hist2D histogram_difference(const QuadratureRecord& on, const QuadratureRecord& off, int col_x, int col_y, int bins,
                            double lo, double hi);

// Starts empty; include() widens it.
struct Interval {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v);
  bool empty() const { return lo > hi; }
};

struct WorstCaseReport {
  // A reconstructed matrix can violate the uncertainty relation within its
  // error bars. Then only the Duan and Simon quantities of the central value
  // are filled, the rest are NaN, and the bounds cover the physical corners.
  bool physical = true;
  std::string diagnostic;
  int corners_used = 0;
  EntanglementReport central;
  Interval delta_epr_minus;
  Interval delta_epr_plus;
  Interval delta_s;
  Interval nu_minus;
  Interval log_negativity;
  std::optional<Interval> eof;
  Interval purity;
};

// Envelope of every measure over the corners {V_hat +/- sigma on the local
// blocks} x {V_hat +/- sigma on the cross blocks} x {gain calibration off by
// +/- fraction}. The calibration error rescales the on-minus-off excess.
// Corners outside the physical region are skipped.
WorstCaseReport worst_case_report(const CovEstimate& est, double vacuum_fraction,
                                  EofPolicy policy = EofPolicy::kAlwaysFormula);

nlohmann::json to_json(const OutputChain& chain);
nlohmann::json to_json(const WorstCaseReport& report);

void write_record_csv(const std::string& path, const QuadratureRecord& record);
QuadratureRecord read_record_csv(const std::string& path);
void write_histogram_csv(const std::string& path, const Hist2D& hist, const std::string& x_name,
                         const std::string& y_name);

}  // namespace cvnet
