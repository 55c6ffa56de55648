#include "cvnet/rng.hpp"

namespace cvnet {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index) {
  // FNV-1a over the label keeps streams with different labels apart.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t state = master ^ h;
  splitmix64(state);
  state ^= index * 0xd1b54a32d192ed03ULL;
  return splitmix64(state);
}

}  // namespace cvnet
