#include "cvnet/runner.hpp"

#include "cvnet/calibrate.hpp"
#include "cvnet/entswap.hpp"
#include "cvnet/errors.hpp"
#include "cvnet/output.hpp"
#include "cvnet/tmsq.hpp"
#include "cvnet/units.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace cvnet {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Emitter {
 public:
  Emitter(const Scenario& sc, const RunOptions& opt, RunResult& result) : sc_(sc), opt_(opt), result_(result) {}

  std::string path(const std::string& suffix, const std::string& ext) const {
    return (std::filesystem::path(opt_.out_dir) / (sc_.output_prefix + suffix + ext)).string();
  }

  CsvWriter table(const std::string& suffix, const std::vector<std::string>& columns) {
    const std::string p = path(suffix, ".csv");
    result_.files.push_back(p);
    return CsvWriter(p, columns);
  }

  void record(const std::string& p) { result_.files.push_back(p); }

  // Sidecar next to a table; `summary` carries run-specific results.
  void sidecar(const CsvWriter& csv, const std::vector<std::string>& columns, const nlohmann::json& summary) {
    std::filesystem::path p(csv.path());
    p.replace_extension(".json");
    nlohmann::json j;
    j["scenario"] = sc_.resolved();
    j["table"] = p.filename().replace_extension(".csv").string();
    j["columns"] = columns;
    j["rows"] = csv.rows();
    if (!summary.is_null()) j["summary"] = summary;
    write_json(p.string(), j);
    result_.files.push_back(p.string());
  }

 private:
  const Scenario& sc_;
  const RunOptions& opt_;
  RunResult& result_;
};

template <typename F>
auto at_point(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const NumericalError& e) {
    throw NumericalError(what + ": " + e.what());
  }
}

std::string point(const std::string& op, const std::string& var, double v) {
  std::ostringstream s;
  s << op << " at " << var << "=" << v;
  return s.str();
}

double eof_or_nan(const EntanglementReport& r) { return r.eof ? *r.eof : kNaN; }

void run_tmsq(const Scenario& sc, const TmsqScenario& t, Emitter& em) {
  if (sc.sweep.variable == "gain_db") {
    const std::vector<std::string> cols = {"g_db",          "e_n",      "e_f",          "purity",
                                           "duan_db",       "duan_plus_db", "delta_s", "nu_minus",
                                           "bandwidth_hz",  "ebit_rate_hz"};
    CsvWriter csv = em.table("", cols);
    nlohmann::json best = {{"max_e_n", 0.0}, {"g_db_at_max_e_n", nullptr}};
    for (double g : sc.sweep.values) {
      const auto row = at_point(point("tmsq report", "gain_db", g), [&] {
        const double r = gain_db_to_squeeze(g);
        const Cov4 v = lossy_tmsq_cov(r, t.alpha_bar, t.beta_bar);
        const double bw = dynamical_bandwidth(t.gamma_a_hz, t.gamma_b_hz, db_to_ratio(g));
        return std::make_pair(entanglement_report(v, bw, t.eof_policy), bw);
      });
      const EntanglementReport& rep = row.first;
      if (rep.log_negativity > best["max_e_n"].get<double>()) {
        best["max_e_n"] = rep.log_negativity;
        best["g_db_at_max_e_n"] = g;
      }
      csv.row({g, rep.log_negativity, eof_or_nan(rep), rep.purity, rep.duan.minus_db(), rep.duan.plus_db(),
               rep.simon.delta_s, rep.nu_minus, row.second, rep.ebit_rate_hz ? *rep.ebit_rate_hz : kNaN});
    }
    em.sidecar(csv, cols, best);
  } else {
    const std::vector<std::string> cols = {"phase_deg", "var_minus", "var_plus", "var_minus_db"};
    CsvWriter csv = em.table("", cols);
    const double r = gain_db_to_squeeze(t.gain_db);
    for (double phi : sc.sweep.values) {
      const EprVariances e = epr_variance_vs_phase(r, t.alpha_bar, t.beta_bar, deg_to_rad(phi), deg_to_rad(t.pump_phase_deg));
      csv.row({phi, e.minus, e.plus, ratio_to_db(e.minus / 0.5)});
    }
    em.sidecar(csv, cols, nullptr);
  }
}

TeleportConfig teleport_config(const TeleportScenario& t, double alpha_bar, double beta_bar, double beta_f_bar) {
  TeleportConfig cfg = TeleportConfig::with_losses(alpha_bar, beta_bar, beta_f_bar, t.beta_c);
  cfg.convention = t.convention;
  cfg.n_th_a = t.n_th_a;
  cfg.n_th_b = t.n_th_b;
  cfg.n_input = t.n_input;
  cfg.n_s = t.n_s;
  cfg.theta_s = deg_to_rad(t.theta_s_deg);
  cfg.r_E = gain_db_to_squeeze(t.entangler_gain_db);
  if (t.unity_feedforward) {
    const double bf = t.convention == FeedforwardConvention::kIncludeFeedforwardLoss ? beta_f_bar : 1.0;
    cfg.r_A = unity_feedforward_r_A(t.beta_c, bf);
  } else {
    cfg.r_A = gain_db_to_squeeze(t.amplifier_gain_db);
  }
  return cfg;
}

void run_teleport(const Scenario& sc, const TeleportScenario& t, Emitter& em) {
  if (t.mode == TeleportMode::kFidelityVsGain) {
    const std::vector<std::string> cols = {"g_e_db", "f_q", "f_q_lossless", "f_q_lossless_closed", "k",
                                           "tel_var_x", "tel_var_p"};
    CsvWriter csv = em.table("", cols);
    double f_max = 0.0, g_at_max = kNaN;
    for (double g : sc.sweep.values) {
      TeleportScenario tt = t;
      tt.entangler_gain_db = g;
      TeleportConfig lossy = teleport_config(tt, t.alpha_bar, t.beta_bar, t.beta_f_bar);
      TeleportScenario ideal = tt;
      ideal.n_th_a = ideal.n_th_b = 0.0;
      TeleportConfig lossless = teleport_config(ideal, 1.0, 1.0, 1.0);
      const auto values = at_point(point("teleport fidelity", "entangler_gain_db", g), [&] {
        const GaussianState out = teleported_state(lossy);
        return std::vector<double>{g,
                                   teleport_fidelity(lossy),
                                   teleport_fidelity(lossless),
                                   1.0 / (std::exp(-2.0 * lossy.r_E) + 1.0),
                                   lossy.k(),
                                   out.cov(0, 0),
                                   out.cov(1, 1)};
      });
      if (values[1] > f_max) {
        f_max = values[1];
        g_at_max = g;
      }
      csv.row(values);
    }
    em.sidecar(csv, cols, {{"max_f_q", f_max}, {"g_e_db_at_max_f_q", g_at_max}});
  } else {
    const std::vector<std::string> cols = {"alpha_bar", "phi_ea_deg", "noise_photons", "f_q"};
    CsvWriter csv = em.table("", cols);
    for (double ab : t.alpha_bar_family) {
      for (double phi : sc.sweep.values) {
        BobNoiseParams p;
        p.r_E = gain_db_to_squeeze(t.entangler_gain_db);
        p.alpha_bar = ab;
        p.beta_bar = t.beta_bar;
        p.n_input = t.n_input;
        p.n_entangler_a = p.n_bath_a = t.n_th_a;
        p.n_entangler_b = p.n_bath_b = t.n_th_b;
        TeleportConfig cfg = teleport_config(t, ab, t.beta_bar, t.beta_f_bar);
        cfg.phi_E = 0.0;
        cfg.phi_A = deg_to_rad(phi);
        const double f = at_point(point("teleport fidelity", "phi_ea_deg", phi), [&] { return teleport_fidelity(cfg); });
        csv.row({ab, phi, bob_noise_photons(p, deg_to_rad(phi)), f});
      }
    }
    em.sidecar(csv, cols, nullptr);
  }
}

SwapConfig swap_config(const EntswapScenario& e) {
  SwapConfig c;
  c.alpha_bar_1 = e.alpha_bar_1;
  c.alpha_bar_2 = e.alpha_bar_2;
  c.beta_bar_1 = e.beta_bar_1;
  c.beta_bar_2 = e.beta_bar_2;
  c.alpha_bar_f = e.alpha_bar_f;
  c.beta_c = e.beta_c;
  c.r_1 = gain_db_to_squeeze(e.g1_db);
  c.r_2 = gain_db_to_squeeze(e.g2_db);
  c.r_3 = unity_claire_r3(e.beta_c, e.alpha_bar_f);
  return c;
}

void run_entswap(const Scenario& sc, const EntswapScenario& e, Emitter& em) {
  const SwapConfig base = swap_config(e);
  if (e.mode == EntswapMode::kGainSweep) {
    const std::vector<std::string> cols = {"g2_db", "delta_epr_minus_db", "e_n", "e_f", "purity", "delta_s",
                                           "delta_epr_plus_db", "nu_minus"};
    CsvWriter csv = em.table("", cols);
    double min_duan = std::numeric_limits<double>::infinity(), g_min = kNaN, max_en = 0.0, g_en = kNaN;
    for (double g : sc.sweep.values) {
      const auto pts = at_point(point("entswap report", "g2_db", g), [&] { return swap_report_vs_gain(base, {g}, e.eof_policy); });
      const EntanglementReport& rep = pts.front().report;
      if (rep.duan.minus_db() < min_duan) {
        min_duan = rep.duan.minus_db();
        g_min = g;
      }
      if (rep.log_negativity > max_en) {
        max_en = rep.log_negativity;
        g_en = g;
      }
      csv.row({g, rep.duan.minus_db(), rep.log_negativity, eof_or_nan(rep), rep.purity, rep.simon.delta_s,
               rep.duan.plus_db(), rep.nu_minus});
    }
    const auto lossless = swap_threshold_lossless_db(base.r_1);
    const auto lossy = swap_threshold_db(base);
    em.sidecar(csv, cols,
               {{"min_delta_epr_minus_db", min_duan},
                {"g2_db_at_min", g_min},
                {"max_e_n", max_en},
                {"g2_db_at_max_e_n", g_en},
                {"threshold_g2_db_lossless", lossless ? nlohmann::json(*lossless) : nlohmann::json(nullptr)},
                {"threshold_g2_db_lossy", lossy ? nlohmann::json(*lossy) : nlohmann::json(nullptr)}});
  } else {
    const std::vector<std::string> cols = {"delta_phi_deg", "var_minus", "var_plus"};
    CsvWriter csv = em.table("", cols);
    std::vector<double> rad;
    for (double d : sc.sweep.values) rad.push_back(deg_to_rad(d));
    const auto pts = at_point("entswap phase sweep", [&] { return swap_phase_sweep(base, rad); });
    for (std::size_t i = 0; i < pts.size(); ++i) csv.row({sc.sweep.values[i], pts[i].var_minus, pts[i].var_plus});
    em.sidecar(csv, cols, nullptr);
  }
}

int column_index(const std::string& name) {
  static const char* names[] = {"x1", "p1", "x2", "p2"};
  for (int i = 0; i < 4; ++i)
    if (name == names[i]) return i;
  throw ConfigError("unknown quadrature column " + name);
}

void run_reconstruct(const Scenario& sc, const ReconstructScenario& r, const RunOptions& opt, Emitter& em) {
  const double sq = gain_db_to_squeeze(r.gain_db);
  const GaussianState truth = lossy_tmsq_state(sq, 0.0, r.alpha_bar, r.beta_bar);
  SampleOptions so;
  so.threads = opt.threads;
  so.label = "pump-on";
  const QuadratureRecord on = at_point("sample_records (pump on)", [&] { return sample_records(truth, r.chains, r.samples, sc.seed, so); });
  so.label = "pump-off";
  const QuadratureRecord off =
      at_point("sample_records (pump off)", [&] { return sample_records(GaussianState::vacuum(2), r.chains, r.samples, sc.seed, so); });
  const CovEstimate est = reconstruct_cov(on, off);
  const WorstCaseReport wc = at_point("worst_case_report", [&] { return worst_case_report(est, r.vacuum_fraction); });

  const std::vector<std::string> cols = {"i", "j", "v_hat", "stat_std", "truth"};
  CsvWriter csv = em.table("_cov", cols);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) csv.row({double(i), double(j), est.v_hat(i, j), std::sqrt(est.stat_var(i, j)), truth.cov(i, j)});
  nlohmann::json summary;
  summary["reconstructed"] = to_json(wc);
  summary["truth"] = to_json(entanglement_report(truth.cov, std::nullopt, EofPolicy::kAlwaysFormula));
  summary["samples"] = r.samples;
  em.sidecar(csv, cols, summary);

  for (const auto& h : r.histograms) {
    const Hist2D d = histogram_difference(on, off, column_index(h.x), column_index(h.y), r.histogram_bins,
                                          -r.histogram_half_range, r.histogram_half_range);
    const std::vector<std::string> hc = {h.x, h.y, "density_difference"};
    CsvWriter hist = em.table("_hist_" + h.x + "_" + h.y, hc);
    for (int ix = 0; ix < d.bins; ++ix)
      for (int iy = 0; iy < d.bins; ++iy) hist.row({d.center(ix), d.center(iy), d.at(ix, iy)});
    em.sidecar(hist, hc, {{"bins", d.bins}, {"bin_width", d.bin_width()}});
  }
  if (r.write_records) {
    for (const auto* rec : {&on, &off}) {
      const std::string p = em.path("_record_" + rec->label, ".csv");
      write_record_csv(p, *rec);
      em.record(p);
      em.record(p + ".json");
    }
  }
}

NoiseSweep read_sweep_csv(const std::string& path, SweepKind kind, double omega, double bw) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("x,power_w", 0) != 0) throw ConfigError(path + ": expected header x,power_w");
  NoiseSweep s;
  s.kind = kind;
  s.omega = omega;
  s.bw_hz = bw;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    try {
      s.x.push_back(std::stod(a));
      s.power.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected two numbers");
    }
  }
  return s;
}

void run_calibrate(const Scenario& sc, const CalibrateScenario& c, Emitter& em) {
  const SweepKind kind = c.sweep_kind == "jm_gain" ? SweepKind::kJmGain : SweepKind::kTemperature;
  const double omega = 2.0 * kPi * c.f_hz;
  NoiseSweep sweep;
  if (!c.input_csv.empty()) {
    sweep = read_sweep_csv(c.input_csv, kind, omega, c.bw_hz);
  } else {
    std::vector<double> x;
    for (double v : sc.sweep.values) x.push_back(kind == SweepKind::kJmGain ? db_to_ratio(v) : v * 1e-3);
    sweep = synthetic_sweep(kind, x, c.synthetic_g_sys, c.synthetic_n_sys, omega, c.bw_hz, c.noise_fraction, sc.seed);
  }
  const FitResult fit = at_point("fit_chain", [&] { return fit_chain(sweep); });

  const std::vector<std::string> cols = {"x", "power_w", "model_w", "photons", "model_photons", "snr_improvement"};
  CsvWriter csv = em.table("", cols);
  const double scale = c.bw_hz * kHbar * omega;
  for (std::size_t i = 0; i < sweep.x.size(); ++i) {
    const double x = sweep.x[i];
    const double model = kind == SweepKind::kJmGain ? noise_power_vs_gain(x, fit.g_sys, fit.n_sys, omega, c.bw_hz)
                                                    : noise_power_vs_temperature(x, fit.g_sys, fit.n_sys, omega, c.bw_hz);
    const double snr = kind == SweepKind::kJmGain ? snr_improvement(x, fit.t_sys_kelvin, omega) : kNaN;
    csv.row({x, sweep.power[i], model, sweep.power[i] / (fit.g_sys * scale), model / (fit.g_sys * scale), snr});
  }
  nlohmann::json summary;
  summary["fit"] = to_json(fit);
  if (c.input_csv.empty()) summary["truth"] = {{"g_sys_linear", c.synthetic_g_sys}, {"n_sys", c.synthetic_n_sys}};
  if (c.series_g_sys_top) {
    const IntermediateLoss loss = intermediate_loss_from_series(*c.series_g_sys_top, *c.series_g_sys_bottom, c.series_n_sys_top);
    nlohmann::json s = {{"eta_linear", loss.eta}, {"loss_db", loss.loss_db}, {"n_sys_bottom", loss.n_sys_bottom}};
    if (c.coupling_db > 0.0) {
      const double t = transmission_after_coupling(loss.eta, c.coupling_db);
      s["after_coupling_linear"] = t;
      s["after_coupling_db"] = ratio_to_db(t);
    }
    if (!loss.warning.empty()) s["warning"] = loss.warning;
    summary["series"] = s;
  }
  em.sidecar(csv, cols, summary);
}

}  // namespace

RunResult run_scenario(Scenario scenario, const RunOptions& options) {
  if (options.seed) scenario.seed = *options.seed;
  std::filesystem::create_directories(options.out_dir);
  RunResult result;
  Emitter em(scenario, options, result);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TmsqScenario>) run_tmsq(scenario, p, em);
        else if constexpr (std::is_same_v<T, TeleportScenario>) run_teleport(scenario, p, em);
        else if constexpr (std::is_same_v<T, EntswapScenario>) run_entswap(scenario, p, em);
        else if constexpr (std::is_same_v<T, ReconstructScenario>) run_reconstruct(scenario, p, options, em);
        else run_calibrate(scenario, p, em);
      },
      scenario.params);
  return result;
}

}  // namespace cvnet
