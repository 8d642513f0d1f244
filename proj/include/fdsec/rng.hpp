// Per-trial random streams. Stream (seed, id) is a SplitMix64 sequence whose
// start is a hash of the pair, so any trial can be regenerated on its own and
// results do not depend on which worker ran it or in what order.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace fdsec {

struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class StreamRng {
 public:
  explicit constexpr StreamRng(RngSpec spec)
      : state_(mix64(spec.seed ^ mix64(spec.stream_id + kGamma))) {}

  constexpr std::uint64_t next_u64() {
    state_ += kGamma;
    return mix64(state_);
  }

  /// Uniform on (0, 1], 53-bit resolution.
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  /// Standard normal (Box-Muller; the second variate is cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_gaussian(double variance) {
    const double s = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fdsec
