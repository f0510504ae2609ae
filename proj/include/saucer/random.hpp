#pragma once

#include <cstdint>
#include <random>

namespace saucer {

inline constexpr std::uint64_t kDefaultSeed = 0x5A0CE2;

/// Seeded source for reproducible sampling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace saucer
