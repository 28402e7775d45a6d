#pragma once

// Deterministic PRNG for simulation runs: xoshiro256++ seeded through
// splitmix64. Substreams derived from (seed, index) give collision-free
// independent streams for parallel trials, so results never depend on
// scheduling order.

#include <cstdint>

namespace aqt {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += kGoldenGamma);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& lane : state_) lane = splitmix64_next(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1); safe to feed through an inverse CDF.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  std::uint64_t seed() const { return seed_; }

  /// Independent stream for a parallel unit of work. Distinct indices map to
  /// distinct seeds for any fixed parent seed.
  Rng substream(std::uint64_t index) const {
    std::uint64_t s = seed_ + (index + 1) * kGoldenGamma;
    std::uint64_t derived = splitmix64_next(s);
    derived ^= splitmix64_next(s);
    return Rng(derived);
  }

  std::uint64_t substream_seed(std::uint64_t index) const {
    return substream(index).seed();
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::uint64_t state_[4] = {};
  std::uint64_t seed_ = 0;
};

}  // namespace aqt
