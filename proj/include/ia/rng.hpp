#ifndef IAKIT_RNG_HPP
#define IAKIT_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace ia {

// splitmix64 finalizer (Steele, Lea, Flood; same constants as java.util.SplittableRandom).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Derives an independent substream key from a base seed and a stream index.
/// Substreams indexed this way are what make Monte-Carlo runs reproducible
/// regardless of the number of worker threads.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index * 0xD1B54A32D192ED03ull + 1));
}

/// Deterministic random source. mt19937_64 is fully specified by the standard,
/// and all distributions below are implemented here, so a given seed yields the
/// same draws on every platform and at every thread count.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1]; never returns zero, safe under log().
    double uniform_pos() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    /// Circularly-symmetric complex Gaussian with unit total variance
    /// (each real component has variance 1/2): radius^2 ~ Exp(1), phase uniform.
    std::complex<double> complex_gaussian() {
        const double r = std::sqrt(-std::log(uniform_pos()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        return {r * std::cos(theta), r * std::sin(theta)};
    }

private:
    std::mt19937_64 engine_;
};

} // namespace ia

#endif
