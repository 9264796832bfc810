#pragma once

#include <cstdint>
#include <random>

namespace fpaft {

/// SplitMix64 step: advances `state` and returns the next output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of substream `index` under `base_seed`. Replicate r of a study always draws from
/// substream r, so results do not depend on which worker ran it.
std::uint64_t substream_seed(std::uint64_t base_seed, std::uint64_t index);

/// Explicitly seeded 64-bit Mersenne Twister with the few draws the generators need.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  static Rng substream(std::uint64_t base_seed, std::uint64_t index) {
    return Rng(substream_seed(base_seed, index));
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform_open(); }
  bool bernoulli(double p) { return uniform_open() < p; }
  double normal() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace fpaft
