#pragma once

#include "cvnet/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cvnet {

struct RunOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

struct RunResult {
  std::vector<std::string> files;
};

// Executes a loaded scenario and writes CSV tables plus JSON sidecars into
// out_dir. NumericalError messages name the failing operation and point.
RunResult run_scenario(Scenario scenario, const RunOptions& options);

}  // namespace cvnet
