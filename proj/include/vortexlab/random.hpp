/// @file random.hpp
/// @brief Small deterministic RNG used for seeded experiment corpora.
///
/// std::mt19937 plus the std distributions would work, but the distribution
/// implementations are not pinned by the standard; frozen calibration
/// constants in the test suite depend on the generated corpora being stable,
/// so the generator and the uniform/normal transforms are spelled out here.
#pragma once

#include <cmath>
#include <cstdint>

#include "vortexlab/geometry.hpp"

namespace vortexlab {

/// splitmix64: tiny, well-mixed, and trivially reproducible everywhere.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t uniform_index(std::uint64_t n) { return next() % n; }

    /// Box-Muller; one value per call, no cached spare (determinism over speed).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

  private:
    std::uint64_t state_;
};

} // namespace vortexlab
