#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mzfid {

// std::mt19937_64 output is fixed by the standard, but the distributions in <random>
// are not. These conversions keep seeded runs identical across standard libraries.

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Standard normal deviate by Box-Muller (one value per call).
inline double standard_normal(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace mzfid
