#pragma once

// Seed derivation for reproducible parallel sampling. Every chunk of work
// gets its own engine whose seed depends only on (master seed, label,
// index), so results do not depend on how chunks are scheduled.

#include <cstdint>
#include <random>
#include <string_view>

namespace cvnet {

std::uint64_t splitmix64(std::uint64_t& state);

std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index);

class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return dist_(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace cvnet
