#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace rms {

// Deterministic random source. The engine is std::mt19937_64 (whose output
// sequence is fixed by the standard); the distributions are implemented here
// because the std:: ones are implementation-defined and would make run logs
// differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n);

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Uniform in [0, 1) with 53 random bits.
  double uniform01();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; one spare value is cached.
  double normal();

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  const T& pick(std::span<const T> items) {
    return items[uniform_index(items.size())];
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Seed derivation for labeled streams:
//
//   h    = FNV-1a-64(label bytes)        offset 0xcbf29ce484222325,
//                                        prime  0x00000100000001b3
//   seed = splitmix64(master ^ splitmix64(h))
//
// where splitmix64(z) is the standard finalizer
//   z += 0x9e3779b97f4a7c15;
//   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9;
//   z = (z ^ (z >> 27)) * 0x94d049bb133111eb;
//   return z ^ (z >> 31);
//
// This function is part of the run-log reproducibility contract; changing it
// changes every recorded run.
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view label);

std::uint64_t splitmix64(std::uint64_t z);
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace rms
