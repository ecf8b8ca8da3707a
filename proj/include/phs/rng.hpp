#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace phs {

/// Seeded draws used by sampling-based checks and random initial conditions.
/// Gaussians go through Box-Muller on raw engine output instead of
/// std::normal_distribution, whose sequence is implementation-defined; runs
/// that record a seed stay reproducible across standard libraries this way.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    double u = uniform();
    while (u == 0.0) u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
  }

  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
};

}  // namespace phs
