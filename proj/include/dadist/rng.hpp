#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "dadist/errors.hpp"

namespace dadist {

/// Deterministic splitmix64 generator. Unlike std:: engines/distributions, the
/// full pipeline here is bitwise reproducible across platforms, and
/// stream(seed, i) gives independent streams for per-draw seeding.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    Rng base(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uint64_t s = base.next_u64();
    for (std::uint64_t k = 0; k <= index % 7; ++k) s = mix(s + index * 0xbf58476d1ce4e5b9ULL);
    return Rng(mix(s ^ (index + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform on (0, 1): never returns 0 or 1.
  double uniform() {
    const double u = (next_u64() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (one value per call; the pair is not cached
  /// so the draw count stays predictable).
  double normal() {
    const double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Gamma(shape, scale = 1) by Marsaglia-Tsang; shape < 1 via the boost trick.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw domain_error("rng gamma: shape must be positive");
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double gamma(double shape, double scale) { return gamma(shape) * scale; }

  double chi2(double dof) { return gamma(dof / 2.0, 2.0); }

  double beta(double a, double b) {
    const double x = gamma(a), y = gamma(b);
    return x / (x + y);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

}  // namespace dadist
