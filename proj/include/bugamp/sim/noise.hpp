#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bugamp {

/// SplitMix64 finalizer; used for all seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds a list of components into one seed. Order matters.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x51ed270b27a3c1f5ULL;
  for (auto p : parts) h = mix64(h ^ mix64(p));
  return h;
}

/// Deterministic PRNG stream. Draws are built from raw mt19937_64 output
/// so that sequences are identical across standard libraries.
class NoiseSource {
public:
  explicit NoiseSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    // Lemire-style rejection keeps the result exact.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % n;
  }

  /// Standard normal via Box-Muller; consumes two draws.
  double gaussian();

  /// Satisfies UniformRandomBitGenerator so std::shuffle etc. work.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Random perturbation added to every delay: uniform on [0, amplitude).
/// Consumes exactly one draw, even when amplitude is zero.
double distortion(NoiseSource& noise, double amplitude);

}  // namespace bugamp
