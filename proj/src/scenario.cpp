#include "cvnet/scenario.hpp"

#include "cvnet/errors.hpp"
#include "cvnet/tmsq.hpp"
#include "cvnet/units.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

namespace cvnet {
namespace {

class Section {
 public:
  Section(YAML::Node node, std::string prefix, const std::string& file)
      : node_(std::move(node)), prefix_(std::move(prefix)), file_(file) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) fail_at(node_, "", "expected a mapping");
  }

  bool present() const { return node_ && node_.IsMap(); }
  bool has(const std::string& key) const { return present() && node_[key]; }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    fail_at(has(key) ? node_[key] : node_, key, msg);
  }

  double number(const std::string& key, double fallback) {
    used_.insert(key);
    if (!has(key)) return fallback;
    return scalar_number(node_[key], key);
  }

  std::optional<double> optional_number(const std::string& key) {
    used_.insert(key);
    if (!has(key)) return std::nullopt;
    return scalar_number(node_[key], key);
  }

  double unit_interval(const std::string& key, double fallback) {
    const double v = number(key, fallback);
    if (!(v >= 0.0 && v <= 1.0)) fail(key, "must lie in [0, 1], got " + std::to_string(v));
    return v;
  }

  double non_negative(const std::string& key, double fallback) {
    const double v = number(key, fallback);
    if (!(v >= 0.0)) fail(key, "must be >= 0, got " + std::to_string(v));
    return v;
  }

  double positive(const std::string& key, double fallback) {
    const double v = number(key, fallback);
    if (!(v > 0.0)) fail(key, "must be > 0, got " + std::to_string(v));
    return v;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    if (!has(key)) return fallback;
    const YAML::Node n = node_[key];
    if (!n.IsScalar()) fail(key, "expected a string");
    return n.as<std::string>();
  }

  bool flag(const std::string& key, bool fallback) {
    used_.insert(key);
    if (!has(key)) return fallback;
    try {
      return node_[key].as<bool>();
    } catch (const YAML::Exception&) {
      fail(key, "expected true or false");
    }
  }

  std::vector<double> numbers(const std::string& key) {
    used_.insert(key);
    std::vector<double> out;
    if (!has(key)) return out;
    const YAML::Node n = node_[key];
    if (!n.IsSequence()) fail(key, "expected a list of numbers");
    for (const auto& item : n) out.push_back(scalar_number(item, key));
    return out;
  }

  YAML::Node child(const std::string& key) {
    used_.insert(key);
    return has(key) ? node_[key] : YAML::Node(YAML::NodeType::Undefined);
  }

  std::string qualified(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }
  const std::string& file() const { return file_; }

  void finish() const {
    if (!present()) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!used_.count(key)) fail_at(kv.first, key, "unknown field");
    }
  }

 private:
  double scalar_number(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) fail_at(n, key, "expected a number");
    try {
      const double v = n.as<double>();
      if (!std::isfinite(v)) fail_at(n, key, "must be finite");
      return v;
    } catch (const YAML::Exception&) {
      fail_at(n, key, "expected a number, got '" + n.Scalar() + "'");
    }
  }

  [[noreturn]] void fail_at(const YAML::Node& n, const std::string& key, const std::string& msg) const {
    std::ostringstream out;
    out << file_;
    if (n) {
      const YAML::Mark m = n.Mark();
      if (m.line >= 0) out << ':' << m.line + 1 << ':' << m.column + 1;
    }
    out << ": " << (key.empty() ? prefix_ : qualified(key)) << ": " << msg;
    throw ConfigError(out.str());
  }

  YAML::Node node_;
  std::string prefix_;
  const std::string& file_;
  std::set<std::string> used_;
};

EofPolicy parse_eof_policy(Section& s) {
  const std::string v = s.text("eof_policy", "symmetric_only");
  if (v == "symmetric_only") return EofPolicy::kSymmetricOnly;
  if (v == "always_formula") return EofPolicy::kAlwaysFormula;
  s.fail("eof_policy", "expected symmetric_only or always_formula, got '" + v + "'");
}

std::string eof_policy_name(EofPolicy p) {
  return p == EofPolicy::kSymmetricOnly ? "symmetric_only" : "always_formula";
}

Sweep parse_sweep(Section& root, const std::vector<std::string>& allowed, bool required) {
  Section s(root.child("sweep"), "sweep", root.file());
  Sweep out;
  if (!s.present()) {
    if (required) root.fail("sweep", "missing sweep section");
    return out;
  }
  out.variable = s.text("variable", "");
  if (out.variable.empty()) s.fail("variable", "missing sweep variable");
  bool ok = false;
  std::string list;
  for (const auto& a : allowed) {
    ok = ok || a == out.variable;
    list += (list.empty() ? "" : ", ") + a;
  }
  if (!ok) s.fail("variable", "expected one of {" + list + "}, got '" + out.variable + "'");

  if (s.has("values")) {
    out.values = s.numbers("values");
    if (s.has("start") || s.has("stop")) s.fail("values", "give either values or start/stop, not both");
  } else if (s.has("start") || s.has("stop")) {
    const double start = s.number("start", 0.0);
    if (!s.has("stop")) s.fail("start", "start needs a matching stop");
    const double stop = s.number("stop", 0.0);
    if (s.has("step") == s.has("points")) s.fail("stop", "give exactly one of step or points");
    if (s.has("step")) {
      const double step = s.number("step", 0.0);
      if (!(step > 0.0)) s.fail("step", "must be > 0");
      const double span = std::abs(stop - start);
      const long n = std::lround(std::floor(span / step + 1e-9)) + 1;
      if (n > 1000000) s.fail("step", "grid too large");
      const double dir = stop >= start ? 1.0 : -1.0;
      for (long i = 0; i < n; ++i) out.values.push_back(start + dir * step * static_cast<double>(i));
    } else {
      const double pts = s.number("points", 0.0);
      if (!(pts >= 1.0) || pts != std::floor(pts)) s.fail("points", "must be a positive integer");
      const long n = static_cast<long>(pts);
      for (long i = 0; i < n; ++i) out.values.push_back(n == 1 ? start : start + (stop - start) * i / double(n - 1));
    }
  } else {
    s.numbers("values");
  }
  if (out.values.empty()) s.fail("values", "grid is empty");
  if (out.values.size() > 1) {
    const bool inc = out.values[1] > out.values[0];
    for (std::size_t i = 1; i < out.values.size(); ++i) {
      const bool step_inc = out.values[i] > out.values[i - 1];
      if (out.values[i] == out.values[i - 1] || step_inc != inc) s.fail("values", "grid must be strictly monotone");
    }
  }
  s.finish();
  return out;
}

TmsqScenario parse_tmsq(Section& s, Scenario& sc) {
  TmsqScenario t;
  t.preset = s.text("preset", "JM1");
  JmConfig jm;
  try {
    jm = JmConfig::preset(t.preset);
  } catch (const std::invalid_argument& e) {
    s.fail("preset", e.what());
  }
  t.gamma_a_hz = s.positive("gamma_a_hz", jm.gamma_a_hz);
  t.gamma_b_hz = s.positive("gamma_b_hz", jm.gamma_b_hz);
  t.alpha_bar = s.unit_interval("alpha_bar_linear", 1.0);
  t.beta_bar = s.unit_interval("beta_bar_linear", 1.0);
  t.gain_db = s.non_negative("gain_db", 0.0);
  t.pump_phase_deg = s.number("pump_phase_deg", 0.0);
  t.eof_policy = parse_eof_policy(s);
  if (sc.sweep.variable == "gain_db") {
    for (double g : sc.sweep.values)
      if (g < 0.0) s.fail("gain_db", "sweep gains must be >= 0 dB");
  }
  return t;
}

TeleportScenario parse_teleport(Section& s, Scenario& sc) {
  TeleportScenario t;
  const std::string mode = s.text("mode", "fidelity_vs_gain");
  if (mode == "fidelity_vs_gain") t.mode = TeleportMode::kFidelityVsGain;
  else if (mode == "bob_noise") t.mode = TeleportMode::kBobNoise;
  else s.fail("mode", "expected fidelity_vs_gain or bob_noise, got '" + mode + "'");

  t.entangler_gain_db = s.non_negative("entangler_gain_db", 0.0);
  const std::string ff = s.text("feedforward", "unity");
  if (ff == "unity") t.unity_feedforward = true;
  else if (ff == "fixed") t.unity_feedforward = false;
  else s.fail("feedforward", "expected unity or fixed, got '" + ff + "'");
  t.amplifier_gain_db = s.non_negative("amplifier_gain_db", 14.0);
  t.beta_c = s.unit_interval("beta_c_linear", 0.1);
  t.alpha_bar = s.unit_interval("alpha_bar_linear", 1.0);
  t.beta_bar = s.unit_interval("beta_bar_linear", 1.0);
  t.beta_f_bar = s.unit_interval("beta_f_bar_linear", 1.0);
  t.alpha_bar_family = s.numbers("alpha_bar_family_linear");
  for (double a : t.alpha_bar_family)
    if (!(a >= 0.0 && a <= 1.0)) s.fail("alpha_bar_family_linear", "entries must lie in [0, 1]");
  t.n_th_a = s.non_negative("n_th_a", 0.0);
  t.n_th_b = s.non_negative("n_th_b", 0.0);
  t.n_input = s.non_negative("n_input", 0.0);
  t.n_s = s.non_negative("n_s", 0.0);
  t.theta_s_deg = s.number("theta_s_deg", 0.0);
  const std::string conv = s.text("k_convention", "include_feedforward_loss");
  if (conv == "include_feedforward_loss") t.convention = FeedforwardConvention::kIncludeFeedforwardLoss;
  else if (conv == "coupler_only") t.convention = FeedforwardConvention::kCouplerOnly;
  else s.fail("k_convention", "expected include_feedforward_loss or coupler_only");

  const double bf = t.convention == FeedforwardConvention::kIncludeFeedforwardLoss ? t.beta_f_bar : 1.0;
  const double product = t.beta_c * bf;
  std::ostringstream w;
  if (!(product > 0.0)) {
    w << sc.source_path << ": teleport: unity feedforward unsolvable, cosh(r_A) = 1/sqrt(beta_c * beta_f_bar) "
      << "diverges for beta_c * beta_f_bar = " << product;
    sc.warnings.push_back(w.str());
  } else if (!t.unity_feedforward) {
    const double k = product * db_to_ratio(t.amplifier_gain_db);
    if (std::abs(k - 1.0) > 1e-3) {
      const double r_a = std::acosh(1.0 / std::sqrt(product));
      w << sc.source_path << ": teleport: fixed feedforward gives k = " << k << "; unity needs r_A = " << r_a
        << " (amplifier_gain_db = " << squeeze_to_gain_db(r_a) << ")";
      sc.warnings.push_back(w.str());
    }
  }
  if (t.mode == TeleportMode::kBobNoise && t.alpha_bar_family.empty()) t.alpha_bar_family = {t.alpha_bar};
  return t;
}

EntswapScenario parse_entswap(Section& s) {
  EntswapScenario e;
  const std::string mode = s.text("mode", "gain_sweep");
  if (mode == "gain_sweep") e.mode = EntswapMode::kGainSweep;
  else if (mode == "phase_sweep") e.mode = EntswapMode::kPhaseSweep;
  else s.fail("mode", "expected gain_sweep or phase_sweep, got '" + mode + "'");
  e.g1_db = s.non_negative("g1_db", 1.4);
  e.g2_db = s.non_negative("g2_db", 2.5);
  e.alpha_bar_1 = s.unit_interval("alpha_bar_1_linear", 0.9);
  e.alpha_bar_2 = s.unit_interval("alpha_bar_2_linear", 0.72);
  e.beta_bar_1 = s.unit_interval("beta_bar_1_linear", 0.62);
  e.beta_bar_2 = s.unit_interval("beta_bar_2_linear", 0.97);
  e.alpha_bar_f = s.unit_interval("alpha_bar_f_linear", 0.85);
  e.beta_c = s.unit_interval("beta_c_linear", 0.1);
  e.eof_policy = parse_eof_policy(s);
  if (!(e.beta_c * e.alpha_bar_f > 0.0)) {
    s.fail("beta_c_linear", "unity feedforward unsolvable: cosh(r_3) = 1/sqrt(beta_c * alpha_bar_f) diverges");
  }
  return e;
}

OutputChain parse_chain(const YAML::Node& node, const std::string& prefix, const std::string& file,
                        const OutputChain& fallback) {
  Section s(node, prefix, file);
  OutputChain c = OutputChain::make(s.text("name", fallback.name), s.positive("g_sys_linear", fallback.g_sys),
                                    s.non_negative("n_sys", fallback.n_sys),
                                    s.positive("f_hz", fallback.omega / (2.0 * kPi)),
                                    s.positive("t_int_s", fallback.t_int_s));
  if (auto g = s.optional_number("g_sys_assumed_linear")) {
    if (!(*g > 0.0)) s.fail("g_sys_assumed_linear", "must be > 0");
    c.g_sys_assumed = *g;
  }
  s.finish();
  return c;
}

ReconstructScenario parse_reconstruct(Section& s) {
  ReconstructScenario r;
  r.gain_db = s.non_negative("gain_db", 4.0);
  r.alpha_bar = s.unit_interval("alpha_bar_linear", 0.62);
  r.beta_bar = s.unit_interval("beta_bar_linear", 1.0);
  const double n = s.number("samples", 100000);
  if (!(n >= 2.0) || n != std::floor(n) || n > 1e8) s.fail("samples", "must be an integer in [2, 1e8]");
  r.samples = static_cast<long long>(n);
  r.vacuum_fraction = s.number("vacuum_fraction_linear", 0.1);
  if (!(r.vacuum_fraction >= 0.0 && r.vacuum_fraction <= 0.5)) s.fail("vacuum_fraction_linear", "must lie in [0, 0.5]");
  const YAML::Node chains = s.child("chains");
  if (chains) {
    if (!chains.IsSequence() || chains.size() != 2) s.fail("chains", "expected a list of two output chains");
    const auto defaults = tmsq_measurement_chains();
    for (int k = 0; k < 2; ++k) r.chains[k] = parse_chain(chains[k], s.qualified("chains[" + std::to_string(k) + "]"), s.file(), defaults[k]);
  }
  Section h(s.child("histogram"), s.qualified("histogram"), s.file());
  if (h.present()) {
    const double bins = h.number("bins", 64);
    if (!(bins >= 8.0) || bins != std::floor(bins)) h.fail("bins", "must be an integer >= 8");
    r.histogram_bins = static_cast<int>(bins);
    r.histogram_half_range = h.positive("half_range", 12.0);
    const YAML::Node pairs = h.child("pairs");
    if (pairs) {
      if (!pairs.IsSequence()) h.fail("pairs", "expected a list of [column, column] pairs");
      for (const auto& p : pairs) {
        if (!p.IsSequence() || p.size() != 2) h.fail("pairs", "each pair needs two column names");
        HistogramSpec spec{p[0].as<std::string>(), p[1].as<std::string>()};
        for (const auto& c : {spec.x, spec.y}) {
          if (c != "x1" && c != "p1" && c != "x2" && c != "p2") h.fail("pairs", "unknown column '" + c + "'");
        }
        r.histograms.push_back(spec);
      }
    }
    h.finish();
  }
  if (r.histograms.empty()) r.histograms = {{"x1", "x2"}, {"p1", "p2"}};
  r.write_records = s.flag("write_records", false);
  return r;
}

CalibrateScenario parse_calibrate(Section& s, Scenario& sc) {
  CalibrateScenario c;
  c.sweep_kind = s.text("sweep_kind", "jm_gain");
  if (c.sweep_kind != "jm_gain" && c.sweep_kind != "temperature") {
    s.fail("sweep_kind", "expected jm_gain or temperature, got '" + c.sweep_kind + "'");
  }
  c.f_hz = s.positive("f_hz", 7.231e9);
  c.bw_hz = s.positive("bw_hz", 1e6);
  c.input_csv = s.text("input_csv", "");
  if (!c.input_csv.empty()) {
    std::filesystem::path p(c.input_csv);
    if (p.is_relative()) p = std::filesystem::path(sc.source_path).parent_path() / p;
    if (!std::filesystem::exists(p)) s.fail("input_csv", "file not found: " + p.string());
    c.input_csv = p.string();
  }
  c.synthetic_g_sys = s.positive("g_sys_linear", 3.5e6);
  c.synthetic_n_sys = s.non_negative("n_sys", 13.2);
  c.noise_fraction = s.non_negative("noise_fraction_linear", 0.0);
  Section series(s.child("series"), s.qualified("series"), s.file());
  if (series.present()) {
    c.series_g_sys_top = series.positive("g_sys_top_linear", 1.0);
    c.series_g_sys_bottom = series.positive("g_sys_bottom_linear", 1.0);
    c.series_n_sys_top = series.non_negative("n_sys_top", 0.0);
    c.coupling_db = series.non_negative("coupling_db", 0.0);
    series.finish();
  }
  if (c.input_csv.empty()) {
    const std::string want = c.sweep_kind == "jm_gain" ? "jm_gain_db" : "temperature_mk";
    if (sc.sweep.variable != want) s.fail("sweep_kind", "synthetic " + c.sweep_kind + " sweeps need sweep.variable = " + want);
    if (sc.sweep.values.size() < 4) s.fail("sweep_kind", "a 2-parameter fit needs at least 4 sweep points");
    for (double v : sc.sweep.values)
      if (v < 0.0) s.fail("sweep_kind", "sweep values must be >= 0");
  }
  return c;
}

nlohmann::json params_json(const ScenarioParams& params) {
  return std::visit(
      [](const auto& p) -> nlohmann::json {
        using T = std::decay_t<decltype(p)>;
        nlohmann::json j;
        if constexpr (std::is_same_v<T, TmsqScenario>) {
          j = {{"preset", p.preset},
               {"gamma_a_hz", p.gamma_a_hz},
               {"gamma_b_hz", p.gamma_b_hz},
               {"alpha_bar_linear", p.alpha_bar},
               {"beta_bar_linear", p.beta_bar},
               {"gain_db", p.gain_db},
               {"pump_phase_deg", p.pump_phase_deg},
               {"eof_policy", eof_policy_name(p.eof_policy)}};
        } else if constexpr (std::is_same_v<T, TeleportScenario>) {
          j = {{"mode", p.mode == TeleportMode::kFidelityVsGain ? "fidelity_vs_gain" : "bob_noise"},
               {"entangler_gain_db", p.entangler_gain_db},
               {"feedforward", p.unity_feedforward ? "unity" : "fixed"},
               {"amplifier_gain_db", p.amplifier_gain_db},
               {"beta_c_linear", p.beta_c},
               {"alpha_bar_linear", p.alpha_bar},
               {"beta_bar_linear", p.beta_bar},
               {"beta_f_bar_linear", p.beta_f_bar},
               {"alpha_bar_family_linear", p.alpha_bar_family},
               {"n_th_a", p.n_th_a},
               {"n_th_b", p.n_th_b},
               {"n_input", p.n_input},
               {"n_s", p.n_s},
               {"theta_s_deg", p.theta_s_deg},
               {"k_convention", p.convention == FeedforwardConvention::kIncludeFeedforwardLoss
                                    ? "include_feedforward_loss"
                                    : "coupler_only"}};
        } else if constexpr (std::is_same_v<T, EntswapScenario>) {
          j = {{"mode", p.mode == EntswapMode::kGainSweep ? "gain_sweep" : "phase_sweep"},
               {"g1_db", p.g1_db},
               {"g2_db", p.g2_db},
               {"alpha_bar_1_linear", p.alpha_bar_1},
               {"alpha_bar_2_linear", p.alpha_bar_2},
               {"beta_bar_1_linear", p.beta_bar_1},
               {"beta_bar_2_linear", p.beta_bar_2},
               {"alpha_bar_f_linear", p.alpha_bar_f},
               {"beta_c_linear", p.beta_c},
               {"eof_policy", eof_policy_name(p.eof_policy)}};
        } else if constexpr (std::is_same_v<T, ReconstructScenario>) {
          nlohmann::json pairs = nlohmann::json::array();
          for (const auto& h : p.histograms) pairs.push_back({h.x, h.y});
          j = {{"gain_db", p.gain_db},
               {"alpha_bar_linear", p.alpha_bar},
               {"beta_bar_linear", p.beta_bar},
               {"samples", p.samples},
               {"vacuum_fraction_linear", p.vacuum_fraction},
               {"chains", {to_json(p.chains[0]), to_json(p.chains[1])}},
               {"histogram", {{"bins", p.histogram_bins}, {"half_range", p.histogram_half_range}, {"pairs", pairs}}},
               {"write_records", p.write_records}};
        } else {
          j = {{"sweep_kind", p.sweep_kind},
               {"f_hz", p.f_hz},
               {"bw_hz", p.bw_hz},
               {"input_csv", p.input_csv},
               {"g_sys_linear", p.synthetic_g_sys},
               {"n_sys", p.synthetic_n_sys},
               {"noise_fraction_linear", p.noise_fraction}};
          if (p.series_g_sys_top) {
            j["series"] = {{"g_sys_top_linear", *p.series_g_sys_top},
                           {"g_sys_bottom_linear", *p.series_g_sys_bottom},
                           {"n_sys_top", p.series_n_sys_top},
                           {"coupling_db", p.coupling_db}};
          }
        }
        return j;
      },
      params);
}

}  // namespace

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kTmsq: return "tmsq";
    case ScenarioKind::kTeleport: return "teleport";
    case ScenarioKind::kEntswap: return "entswap";
    case ScenarioKind::kReconstruct: return "reconstruct";
    case ScenarioKind::kCalibrate: return "calibrate";
  }
  return "unknown";
}

nlohmann::json Scenario::resolved() const {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  j["name"] = name;
  j["seed"] = seed;
  j["output"] = {{"prefix", output_prefix}};
  if (!sweep.variable.empty()) j["sweep"] = {{"variable", sweep.variable}, {"values", sweep.values}};
  j[to_string(kind)] = params_json(params);
  return j;
}

Scenario load_scenario(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError(path + ": cannot read scenario file");
  } catch (const YAML::ParserException& e) {
    std::ostringstream msg;
    msg << path << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": syntax error: " << e.msg;
    throw ConfigError(msg.str());
  }
  Scenario sc;
  sc.source_path = path;
  Section top(root, "", path);
  if (!top.present()) throw ConfigError(path + ": scenario must be a mapping");

  const std::string kind = top.text("kind", "");
  if (kind == "tmsq") sc.kind = ScenarioKind::kTmsq;
  else if (kind == "teleport") sc.kind = ScenarioKind::kTeleport;
  else if (kind == "entswap") sc.kind = ScenarioKind::kEntswap;
  else if (kind == "reconstruct") sc.kind = ScenarioKind::kReconstruct;
  else if (kind == "calibrate") sc.kind = ScenarioKind::kCalibrate;
  else top.fail("kind", "expected one of {tmsq, teleport, entswap, reconstruct, calibrate}, got '" + kind + "'");

  sc.name = top.text("name", std::filesystem::path(path).stem().string());
  const double seed = top.number("seed", 0);
  if (!(seed >= 0.0) || seed != std::floor(seed) || seed > 9.007199254740992e15) {
    top.fail("seed", "must be a non-negative integer");
  }
  sc.seed = static_cast<std::uint64_t>(seed);

  Section out(top.child("output"), "output", path);
  sc.output_prefix = out.text("prefix", sc.name);
  out.finish();

  // Every kind section must exist only for the chosen kind.
  for (const char* other : {"tmsq", "teleport", "entswap", "reconstruct", "calibrate"}) {
    if (other != kind && top.has(other)) top.fail(other, "section does not match kind '" + kind + "'");
  }
  Section params(top.child(kind), kind, path);

  switch (sc.kind) {
    case ScenarioKind::kTmsq:
      sc.sweep = parse_sweep(top, {"gain_db", "phase_deg"}, true);
      sc.params = parse_tmsq(params, sc);
      break;
    case ScenarioKind::kTeleport: {
      const std::string mode = params.text("mode", "fidelity_vs_gain");
      sc.sweep = parse_sweep(top, {mode == "bob_noise" ? "phi_ea_deg" : "entangler_gain_db"}, true);
      sc.params = parse_teleport(params, sc);
      break;
    }
    case ScenarioKind::kEntswap: {
      const std::string mode = params.text("mode", "gain_sweep");
      sc.sweep = parse_sweep(top, {mode == "phase_sweep" ? "delta_phi_deg" : "g2_db"}, true);
      sc.params = parse_entswap(params);
      break;
    }
    case ScenarioKind::kReconstruct:
      if (top.has("sweep")) top.fail("sweep", "reconstruct scenarios take no sweep");
      sc.params = parse_reconstruct(params);
      break;
    case ScenarioKind::kCalibrate:
      sc.sweep = parse_sweep(top, {"jm_gain_db", "temperature_mk"}, false);
      sc.params = parse_calibrate(params, sc);
      break;
  }
  params.finish();
  top.finish();
  return sc;
}

}  // namespace cvnet
