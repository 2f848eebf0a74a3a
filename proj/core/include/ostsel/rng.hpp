#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace ostsel {

/// 64-bit finalizer used for seed derivation (splitmix64 step function).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a child seed from a parent seed and a stream index. Used to give
/// per-trial generators stable seeds so parallel and serial runs agree.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Seeded random stream with hand-rolled distributions.
///
/// The standard library does not pin down distribution algorithms, so all
/// sampling here is implemented on top of the fully specified mt19937_64
/// engine: results depend only on the seed, never on the standard library
/// vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n);

  /// Uniform double in [0, 1), 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; the paired sample is cached.
  double normal();

  /// Complex Gaussian with E|z|^2 = variance (real and imaginary parts
  /// independent N(0, variance/2)).
  std::complex<double> complex_normal(double variance);

  /// Random sign, +1 or -1.
  double sign() { return (next() & 1ULL) ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ostsel
