// cvnet: run, validate and list scenario files.
//
// Exit status: 0 success, 1 configuration error, 2 numerical failure.
// Environment overrides (flags win over env, env wins over the file):
//   CVNET_SEED, CVNET_OUT_DIR, CVNET_THREADS

#include "cvnet/errors.hpp"
#include "cvnet/runner.hpp"
#include "cvnet/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#ifndef CVNET_SCENARIO_DIR
#define CVNET_SCENARIO_DIR "scenarios"
#endif

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size() || text.front() == '-') throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw cvnet::ConfigError(what + ": expected a non-negative integer, got '" + text + "'");
  }
}

void print_warnings(const cvnet::Scenario& sc) {
  for (const auto& w : sc.warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-state models for microwave CV networks"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string seed_flag, out_dir_flag;
  int threads_flag = 0;

  auto* run = app.add_subcommand("run", "execute a scenario and write CSV/JSON results");
  run->add_option("scenario", scenario_path, "scenario file (.yaml)")->required();
  run->add_option("--seed", seed_flag, "override the scenario seed");
  run->add_option("--out-dir", out_dir_flag, "output directory (default: current directory)");
  run->add_option("--threads", threads_flag, "worker threads for Monte-Carlo sampling")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "check a scenario without running it");
  validate->add_option("scenario", scenario_path, "scenario file (.yaml)")->required();

  std::string examples_dir = CVNET_SCENARIO_DIR;
  auto* list = app.add_subcommand("list-examples", "list bundled example scenarios");
  list->add_option("--dir", examples_dir, "directory to scan");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      std::vector<std::filesystem::path> files;
      if (std::filesystem::is_directory(examples_dir))
        for (const auto& e : std::filesystem::directory_iterator(examples_dir))
          if (e.path().extension() == ".yaml") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        const cvnet::Scenario sc = cvnet::load_scenario(f.string());
        std::cout << f.string() << "  " << cvnet::to_string(sc.kind) << "  " << sc.name << '\n';
      }
      return 0;
    }

    cvnet::Scenario sc = cvnet::load_scenario(scenario_path);
    print_warnings(sc);
    if (validate->parsed()) {
      std::cout << "ok\n";
      return 0;
    }

    cvnet::RunOptions opt;
    if (auto v = env("CVNET_SEED")) opt.seed = parse_u64(*v, "CVNET_SEED");
    if (auto v = env("CVNET_OUT_DIR")) opt.out_dir = *v;
    if (auto v = env("CVNET_THREADS")) opt.threads = static_cast<int>(std::max<std::uint64_t>(1, parse_u64(*v, "CVNET_THREADS")));
    if (!seed_flag.empty()) opt.seed = parse_u64(seed_flag, "--seed");
    if (!out_dir_flag.empty()) opt.out_dir = out_dir_flag;
    if (threads_flag > 0) opt.threads = threads_flag;

    const cvnet::RunResult res = cvnet::run_scenario(std::move(sc), opt);
    for (const auto& f : res.files) std::cout << f << '\n';
    return 0;
  } catch (const cvnet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const cvnet::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
