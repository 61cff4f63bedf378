#pragma once

#include <cstdint>
#include <random>

namespace leaplab {

// Deterministic random stream: mt19937_64 plus hand-rolled uniform/normal
// mappings so draws are identical across standard-library implementations.
// State serializes as (seed, draw count); restore re-seeds and skips ahead.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(seed) {}

  uint64_t seed() const { return seed_; }
  uint64_t draws() const { return draws_; }

  uint64_t next_u64() {
    ++draws_;
    return gen_();
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; two u64 draws per sample, nothing cached.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Uniform integer in [lo, hi] inclusive. Modulo mapping; the bias is
  // negligible for the small ranges used here.
  int64_t integer(int64_t lo, int64_t hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(next_u64() % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Child stream with a decorrelated seed; used to give each rollout its own
  // reproducible stream regardless of evaluation order.
  Rng spawn() {
    const uint64_t s = next_u64() ^ 0x9e3779b97f4a7c15ull;
    return Rng(s);
  }

  static Rng restore(uint64_t seed, uint64_t draws) {
    Rng r(seed);
    r.gen_.discard(draws);
    r.draws_ = draws;
    return r;
  }

 private:
  uint64_t seed_;
  uint64_t draws_ = 0;
  std::mt19937_64 gen_;
};

}  // namespace leaplab
