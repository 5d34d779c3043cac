#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace qdecay {

/// Deterministic random source shared by every sampler in the library.
///
/// Engine: std::mt19937_64 seeded with the 64-bit seed directly (its output
/// sequence is fixed by the C++ standard). Uniforms use the top 53 bits,
/// u = (x >> 11) * 2^-53 in [0, 1). Normals use the Box-Muller transform on
/// (1 - u1, u2): r = sqrt(-2 ln(1 - u1)), returning r cos(2 pi u2) first and
/// r sin(2 pi u2) on the next call. std::normal_distribution is avoided
/// because its algorithm is implementation defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(angle);
        has_spare_ = true;
        return r * std::cos(angle);
    }

    /// Complex Gaussian with E|z|^2 = 1 (real and imaginary parts of variance 1/2).
    std::complex<double> complex_normal() {
        constexpr double s = 0.70710678118654752440;
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Independent stream seed for member `stream` of an ensemble (splitmix64 finalizer).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace qdecay
