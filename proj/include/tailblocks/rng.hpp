#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tailblocks {

// splitmix64 finalizer; used to derive independent stream seeds
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x51ed2701ULL));
}

// mt19937_64 with explicit mappings so that draws are identical on every
// platform (the std distributions are not pinned by the standard)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform on [0, 1)
  double uniform01() { return double(gen_() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1]
  double uniform01_open_left() { return 1.0 - uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// inverse-CDF standard Pareto draw, support [1, inf)
inline double pareto_from_uniform(double u, double alpha) {
  return std::pow(u, -1.0 / alpha);
}

inline double pareto_sample(double alpha, Rng& rng) {
  return pareto_from_uniform(rng.uniform01_open_left(), alpha);
}

}  // namespace tailblocks
