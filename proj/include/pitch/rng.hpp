#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace pitch {

/// Counter-based pseudo-random stream (SplitMix64 core).
///
/// Output i is a pure function of (key, i), so independent streams can be
/// derived per (base seed, sweep index, trial index, purpose) and the draws
/// are identical no matter how trials are scheduled across threads.
class RngStream {
public:
  explicit RngStream(std::uint64_t key) : state_(mix(key ^ kInit)) {}

  /// Hash a base seed and a path of indices into a stream key.
  static std::uint64_t derive_key(std::uint64_t base,
                                  std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix(base + kGamma);
    for (std::uint64_t p : path) h = mix(h ^ mix(p + kGamma));
    return h;
  }

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform on [0,1) with 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  /// Standard normal deviate (Box-Muller). Deviates come in pairs; the spare
  /// is cached, so the draw sequence depends on call order. Use one stream per
  /// purpose when the layout must stay stable across code changes.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Circularly symmetric complex Gaussian with E|z|^2 = var.
  std::complex<double> complex_normal(double var) {
    const double s = std::sqrt(var / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kInit = 0x6A09E667F3BCC909ull;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pitch
