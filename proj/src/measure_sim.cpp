#include "cvnet/measure_sim.hpp"

#include "cvnet/errors.hpp"
#include "cvnet/rng.hpp"
#include "cvnet/units.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cvnet {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

Mat covariance_root(const Cov4& v) {
  Eigen::SelfAdjointEigenSolver<Cov4> es(v);
  Eigen::Vector4d lam = es.eigenvalues();
  for (int i = 0; i < 4; ++i) {
    if (lam(i) < -1e-10) {
      std::ostringstream msg;
      msg << "sample_records: total covariance is not positive semidefinite (eigenvalue " << lam(i) << ")";
      throw NumericalError(msg.str());
    }
    lam(i) = std::sqrt(std::max(0.0, lam(i)));
  }
  return es.eigenvectors() * lam.asDiagonal();
}

}  // namespace

void OutputChain::validate() const {
  auto positive = [this](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError("output chain '" + name + "': " + field + " must be positive");
    }
  };
  positive(g_sys, "g_sys");
  positive(omega, "omega");
  positive(t_int_s, "t_int_s");
  positive(r_load_ohm, "r_load_ohm");
  if (!(n_sys >= 0.0)) throw ConfigError("output chain '" + name + "': n_sys must be >= 0");
  if (g_sys_assumed) positive(*g_sys_assumed, "g_sys_assumed");
}

double OutputChain::conversion_factor() const { return t_int_s / (r_load_ohm * kHbar * omega); }

OutputChain OutputChain::make(std::string name, double g_sys, double n_sys, double f_hz, double t_int_s) {
  OutputChain c;
  c.name = std::move(name);
  c.g_sys = g_sys;
  c.n_sys = n_sys;
  c.omega = 2.0 * kPi * f_hz;
  c.t_int_s = t_int_s;
  return c;
}

std::array<OutputChain, 2> tmsq_measurement_chains() {
  return {OutputChain::make("O3,a", 6.8e6, 16.1, 7.231e9), OutputChain::make("O4,b", 1.3e7, 15.7, 9.695e9)};
}

QuadratureRecord sample_records(const GaussianState& state, const std::array<OutputChain, 2>& chains, Eigen::Index n,
                                std::uint64_t seed, const SampleOptions& options) {
  if (state.n_modes() != 2) throw std::invalid_argument("sample_records: two-mode state expected");
  if (n < 2) throw std::invalid_argument("sample_records: need at least 2 samples");
  if (options.chunk < 1) throw std::invalid_argument("sample_records: chunk must be positive");
  for (const auto& c : chains) c.validate();

  Cov4 total = state.cov;
  for (int k = 0; k < 2; ++k) {
    total(2 * k, 2 * k) += chains[k].thermal_variance();
    total(2 * k + 1, 2 * k + 1) += chains[k].thermal_variance();
  }
  const Mat root = covariance_root(total);
  const Eigen::Vector4d mean = state.mean;

  // Forward to raw volts, then back with the assumed gain.
  Eigen::Vector4d to_raw, from_raw;
  for (int k = 0; k < 2; ++k) {
    const double gamma = chains[k].conversion_factor();
    const double up = std::sqrt(chains[k].g_sys / gamma);
    const double down = std::sqrt(gamma / chains[k].referral_gain());
    to_raw.segment<2>(2 * k).setConstant(up);
    from_raw.segment<2>(2 * k).setConstant(down);
  }

  QuadratureRecord rec;
  rec.samples.resize(n, 4);
  rec.seed = seed;
  rec.label = options.label;
  rec.chains = chains;

  const Eigen::Index n_chunks = (n + options.chunk - 1) / options.chunk;
  auto work = [&](Eigen::Index first_chunk, Eigen::Index stride) {
    for (Eigen::Index c = first_chunk; c < n_chunks; c += stride) {
      NormalStream rng(derive_seed(seed, options.label, static_cast<std::uint64_t>(c)));
      const Eigen::Index begin = c * options.chunk;
      const Eigen::Index end = std::min(n, begin + options.chunk);
      Eigen::Vector4d z;
      for (Eigen::Index i = begin; i < end; ++i) {
        for (int j = 0; j < 4; ++j) z(j) = rng();
        const Eigen::Vector4d x = mean + root * z;
        const Eigen::Vector4d raw = x.cwiseProduct(to_raw);
        rec.samples.row(i) = raw.cwiseProduct(from_raw).transpose();
      }
    }
  };

  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(n_chunks)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  return rec;
}

Cov4 sample_covariance(const QuadratureRecord& record) {
  const Eigen::Index n = record.size();
  if (n < 2) throw std::invalid_argument("sample_covariance: need at least 2 samples");
  const Eigen::RowVector4d mean = record.samples.colwise().mean();
  const Mat centered = record.samples.rowwise() - mean;
  Cov4 s = (centered.transpose() * centered) / static_cast<double>(n - 1);
  return 0.5 * (s + s.transpose());
}

Cov4 covariance_sampling_variance(const Cov4& S, Eigen::Index n) {
  Cov4 v;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) v(i, j) = (S(i, i) * S(j, j) + S(i, j) * S(i, j)) / static_cast<double>(n - 1);
  return v;
}

CovEstimate reconstruct_cov(const QuadratureRecord& on, const QuadratureRecord& off) {
  if (on.size() != off.size()) {
    throw std::invalid_argument("reconstruct_cov: on and off records differ in length (" + std::to_string(on.size()) +
                                " vs " + std::to_string(off.size()) + ")");
  }
  const Cov4 s_on = sample_covariance(on);
  const Cov4 s_off = sample_covariance(off);
  CovEstimate est;
  est.n = on.size();
  est.v_hat = s_on - s_off + kVacuumVariance * Cov4::Identity();
  est.stat_var = covariance_sampling_variance(s_on, est.n) + covariance_sampling_variance(s_off, est.n);
  const Cov4 sigma = est.stat_var.cwiseSqrt();
  est.worst_case_lo = est.v_hat - sigma;
  est.worst_case_hi = est.v_hat + sigma;
  return est;
}

Hist2D histogram2d(const QuadratureRecord& record, int col_x, int col_y, int bins, double lo, double hi) {
  if (bins < 8) throw std::invalid_argument("histogram2d: bins must be >= 8");
  if (!(hi > lo)) throw std::invalid_argument("histogram2d: empty range");
  if (col_x < 0 || col_x > 3 || col_y < 0 || col_y > 3) throw std::invalid_argument("histogram2d: column out of range");
  Hist2D h;
  h.bins = bins;
  h.lo = lo;
  h.hi = hi;
  h.density.assign(static_cast<std::size_t>(bins) * bins, 0.0);
  const double w = h.bin_width();
  for (Eigen::Index i = 0; i < record.size(); ++i) {
    const double x = record.samples(i, col_x);
    const double y = record.samples(i, col_y);
    if (x < lo || x >= hi || y < lo || y >= hi) continue;
    const int ix = std::min(bins - 1, static_cast<int>((x - lo) / w));
    const int iy = std::min(bins - 1, static_cast<int>((y - lo) / w));
    h.density[static_cast<std::size_t>(ix) * bins + iy] += 1.0;
    ++h.in_range;
  }
  if (h.in_range > 0) {
    const double norm = 1.0 / (static_cast<double>(h.in_range) * w * w);
    for (double& d : h.density) d *= norm;
  }
  return h;
}

Hist2D histogram_difference(const QuadratureRecord& on, const QuadratureRecord& off, int col_x, int col_y, int bins,
                            double lo, double hi) {
  Hist2D a = histogram2d(on, col_x, col_y, bins, lo, hi);
  const Hist2D b = histogram2d(off, col_x, col_y, bins, lo, hi);
  for (std::size_t i = 0; i < a.density.size(); ++i) a.density[i] -= b.density[i];
  a.in_range = std::min(a.in_range, b.in_range);
  return a;
}

void Interval::include(double v) {
  lo = std::min(lo, v);
  hi = std::max(hi, v);
}

WorstCaseReport worst_case_report(const CovEstimate& est, double vacuum_fraction, EofPolicy policy) {
  if (!(vacuum_fraction >= 0.0 && vacuum_fraction <= 0.5)) {
    throw std::invalid_argument("worst_case_report: vacuum fraction must lie in [0, 0.5]");
  }
  WorstCaseReport out;
  try {
    out.central = entanglement_report(est.v_hat, std::nullopt, policy);
  } catch (const NumericalError& e) {
    out.physical = false;
    out.diagnostic = e.what();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.central.duan = duan_epr(est.v_hat);
    out.central.simon = simon_criterion(est.v_hat);
    out.central.nu_minus = out.central.log_negativity = out.central.purity = nan;
    out.central.eof_diagnostic = "not evaluated: " + out.diagnostic;
  }
  auto take = [&out](const EntanglementReport& r) {
    out.delta_epr_minus.include(r.duan.minus);
    out.delta_epr_plus.include(r.duan.plus);
    out.delta_s.include(r.simon.delta_s);
    out.nu_minus.include(r.nu_minus);
    out.log_negativity.include(r.log_negativity);
    if (r.eof) {
      if (!out.eof) out.eof = Interval{};
      out.eof->include(*r.eof);
    }
    out.purity.include(r.purity);
  };
  if (out.physical) take(out.central);

  const Cov4 sigma = est.stat_var.cwiseSqrt();
  Cov4 local_mask = Cov4::Zero();
  local_mask.block<2, 2>(0, 0).setOnes();
  local_mask.block<2, 2>(2, 2).setOnes();
  const Cov4 cross_mask = Cov4::Ones() - local_mask;
  const Cov4 vac = kVacuumVariance * Cov4::Identity();

  for (int sl : {-1, 1}) {
    for (int sc : {-1, 1}) {
      for (int sv : {-1, 1}) {
        const Cov4 shifted =
            est.v_hat + sl * sigma.cwiseProduct(local_mask) + sc * sigma.cwiseProduct(cross_mask);
        const Cov4 v = vac + (shifted - vac) / (1.0 + sv * vacuum_fraction);
        try {
          take(entanglement_report(v, std::nullopt, policy));
          ++out.corners_used;
        } catch (const NumericalError&) {
        }
      }
    }
  }
  return out;
}

nlohmann::json to_json(const OutputChain& chain) {
  nlohmann::json j;
  j["name"] = chain.name;
  j["g_sys_linear"] = chain.g_sys;
  j["n_sys"] = chain.n_sys;
  j["f_hz"] = chain.omega / (2.0 * kPi);
  j["t_int_s"] = chain.t_int_s;
  j["r_load_ohm"] = chain.r_load_ohm;
  if (chain.g_sys_assumed) j["g_sys_assumed_linear"] = *chain.g_sys_assumed;
  return j;
}

nlohmann::json to_json(const WorstCaseReport& report) {
  auto iv = [](const Interval& i) {
    return i.empty() ? nlohmann::json(nullptr) : nlohmann::json{{"lo", i.lo}, {"hi", i.hi}};
  };
  nlohmann::json j = to_json(report.central);
  j["physical"] = report.physical;
  if (!report.physical) {
    j["diagnostic"] = report.diagnostic;
    for (const char* k : {"nu_minus", "e_n", "purity"}) j[k] = nullptr;
  }
  j["corners_used"] = report.corners_used;
  j["bounds"] = {{"delta_epr_minus", iv(report.delta_epr_minus)},
                 {"delta_epr_plus", iv(report.delta_epr_plus)},
                 {"delta_s", iv(report.delta_s)},
                 {"nu_minus", iv(report.nu_minus)},
                 {"e_n", iv(report.log_negativity)},
                 {"e_f", report.eof ? iv(*report.eof) : nlohmann::json(nullptr)},
                 {"purity", iv(report.purity)}};
  return j;
}

void write_record_csv(const std::string& path, const QuadratureRecord& record) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "x1,p1,x2,p2\n";
  for (Eigen::Index i = 0; i < record.size(); ++i) {
    out << fmt(record.samples(i, 0)) << ',' << fmt(record.samples(i, 1)) << ',' << fmt(record.samples(i, 2)) << ','
        << fmt(record.samples(i, 3)) << '\n';
  }
  nlohmann::json side;
  side["seed"] = record.seed;
  side["label"] = record.label;
  side["n"] = record.size();
  side["chains"] = {to_json(record.chains[0]), to_json(record.chains[1])};
  std::ofstream meta(path + ".json");
  meta << side.dump(2) << '\n';
}

QuadratureRecord read_record_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("x1,p1,x2,p2", 0) != 0) throw std::runtime_error(path + ": expected header x1,p1,x2,p2");
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int cols = 0;
    while (std::getline(ss, cell, ',')) {
      values.push_back(std::stod(cell));
      ++cols;
    }
    if (cols != 4) throw std::runtime_error(path + ": expected 4 columns per row");
  }
  QuadratureRecord rec;
  const Eigen::Index n = static_cast<Eigen::Index>(values.size() / 4);
  rec.samples = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, 4, Eigen::RowMajor>>(values.data(), n, 4);

  std::ifstream meta(path + ".json");
  if (meta) {
    const nlohmann::json side = nlohmann::json::parse(meta);
    rec.seed = side.value("seed", std::uint64_t{0});
    rec.label = side.value("label", std::string{});
    if (side.contains("chains")) {
      for (int k = 0; k < 2; ++k) {
        const auto& c = side["chains"][k];
        rec.chains[k] = OutputChain::make(c.value("name", std::string{}), c.at("g_sys_linear").get<double>(),
                                          c.at("n_sys").get<double>(), c.at("f_hz").get<double>(),
                                          c.value("t_int_s", 1e-6));
        if (c.contains("g_sys_assumed_linear")) rec.chains[k].g_sys_assumed = c["g_sys_assumed_linear"].get<double>();
      }
    }
  }
  return rec;
}

void write_histogram_csv(const std::string& path, const Hist2D& hist, const std::string& x_name,
                         const std::string& y_name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << x_name << ',' << y_name << ",density\n";
  for (int ix = 0; ix < hist.bins; ++ix)
    for (int iy = 0; iy < hist.bins; ++iy) out << fmt(hist.center(ix)) << ',' << fmt(hist.center(iy)) << ',' << fmt(hist.at(ix, iy)) << '\n';
}

}  // namespace cvnet
