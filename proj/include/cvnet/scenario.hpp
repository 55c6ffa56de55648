#pragma once

// Declarative experiment files. Every field name carries its unit:
// _db for gains and attenuations, _deg for angles, _linear for power
// transmissions and ratios, _hz, _k, _mk and _s where they apply.

#include "cvnet/measure_sim.hpp"
#include "cvnet/measures.hpp"
#include "cvnet/teleport.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cvnet {

enum class ScenarioKind { kTmsq, kTeleport, kEntswap, kReconstruct, kCalibrate };

std::string to_string(ScenarioKind kind);

struct Sweep {
  std::string variable;
  std::vector<double> values;
};

struct TmsqScenario {
  std::string preset = "JM1";
  double gamma_a_hz = 0.0;
  double gamma_b_hz = 0.0;
  double alpha_bar = 1.0;
  double beta_bar = 1.0;
  double gain_db = 0.0;       // fixed gain for phase sweeps
  double pump_phase_deg = 0.0;
  EofPolicy eof_policy = EofPolicy::kSymmetricOnly;
};

enum class TeleportMode { kFidelityVsGain, kBobNoise };

struct TeleportScenario {
  TeleportMode mode = TeleportMode::kFidelityVsGain;
  double entangler_gain_db = 0.0;
  bool unity_feedforward = true;
  double amplifier_gain_db = 14.0;
  double beta_c = 0.1;
  double alpha_bar = 1.0;
  double beta_bar = 1.0;
  double beta_f_bar = 1.0;
  std::vector<double> alpha_bar_family;  // bob_noise curves
  double n_th_a = 0.0;
  double n_th_b = 0.0;
  double n_input = 0.0;
  double n_s = 0.0;
  double theta_s_deg = 0.0;
  FeedforwardConvention convention = FeedforwardConvention::kIncludeFeedforwardLoss;
};

enum class EntswapMode { kGainSweep, kPhaseSweep };

struct EntswapScenario {
  EntswapMode mode = EntswapMode::kGainSweep;
  double g1_db = 1.4;
  double g2_db = 2.5;
  double alpha_bar_1 = 0.9;
  double alpha_bar_2 = 0.72;
  double beta_bar_1 = 0.62;
  double beta_bar_2 = 0.97;
  double alpha_bar_f = 0.85;
  double beta_c = 0.1;
  EofPolicy eof_policy = EofPolicy::kSymmetricOnly;
};

struct HistogramSpec {
  std::string x = "x1";
  std::string y = "x2";
};

struct ReconstructScenario {
  double gain_db = 4.0;
  double alpha_bar = 0.62;
  double beta_bar = 1.0;
  long long samples = 100000;
  double vacuum_fraction = 0.1;
  std::array<OutputChain, 2> chains = tmsq_measurement_chains();
  int histogram_bins = 64;
  double histogram_half_range = 12.0;
  std::vector<HistogramSpec> histograms;
  bool write_records = false;
};

struct CalibrateScenario {
  std::string sweep_kind = "jm_gain";  // or "temperature"
  double f_hz = 7.231e9;
  double bw_hz = 1e6;
  std::string input_csv;                // measured sweep; empty -> synthetic
  double synthetic_g_sys = 3.5e6;
  double synthetic_n_sys = 13.2;
  double noise_fraction = 0.0;
  std::optional<double> series_g_sys_top;
  std::optional<double> series_g_sys_bottom;
  double series_n_sys_top = 0.0;
  double coupling_db = 0.0;
};

using ScenarioParams =
    std::variant<TmsqScenario, TeleportScenario, EntswapScenario, ReconstructScenario, CalibrateScenario>;

struct Scenario {
  std::string source_path;
  ScenarioKind kind = ScenarioKind::kTmsq;
  std::string name;
  std::uint64_t seed = 0;
  std::string output_prefix;
  Sweep sweep;
  ScenarioParams params;
  std::vector<std::string> warnings;

  // Fully resolved scenario (defaults filled in, units as in the file).
  nlohmann::json resolved() const;
};

// Parses and range-checks a scenario file. Throws ConfigError with
// "path:line:column: field: message" diagnostics.
Scenario load_scenario(const std::string& path);

}  // namespace cvnet
