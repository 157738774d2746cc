#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace levykde {

// SplitMix64 finalizer. Bijective on 64-bit words, used to turn (seed, stream)
// pairs into well-spread xoshiro state.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with all variate transforms written out by hand. The standard
// library distributions are implementation-defined, so relying on them would
// make paths differ between toolchains; everything below is pinned to the
// bit level given a seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept {
    std::uint64_t sm = mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL);
    for (auto& word : state_) {
      sm += 0x9e3779b97f4a7c15ULL;
      word = mix64(sm);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next_u64() noexcept {
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

  // Uniform on (0, 1]; 53 random bits, never returns 0 so logs are safe.
  double uniform() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1).
  double uniform_open() noexcept {
    double u;
    do {
      u = uniform();
    } while (u == 1.0);
    return u;
  }

  double exponential() noexcept { return -std::log(uniform()); }

  // Box-Muller, cosine branch only; consumes exactly two uniforms per call.
  double normal() noexcept {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * 3.14159265358979323846 * uniform();
    return r * std::cos(theta);
  }

  // Knuth's product method, splitting large means so exp(-mean) stays
  // representable. Draw count varies with the variate, which is fine: the
  // stream is owned by a single consumer.
  std::uint64_t poisson(double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be >= 0");
    if (mean == 0.0) return 0;
    std::uint64_t total = 0;
    while (mean > 30.0) {
      total += poisson_knuth(15.0);
      mean -= 15.0;
    }
    return total + poisson_knuth(mean);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t poisson_knuth(double mean) noexcept {
    const double floor = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > floor);
    return k - 1;
  }

  std::uint64_t state_[4];
};

}  // namespace levykde
