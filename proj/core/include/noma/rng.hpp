#ifndef NOMA_RNG_HPP
#define NOMA_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace noma {

/// splitmix64 mix step; used both as a seed scrambler and to derive
/// independent substream seeds from (root, stream-id) pairs.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
    return mix64(mix64(root) ^ mix64(stream + 0x5851f42d4c957f2dULL));
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(root, a), b);
}

/// Deterministic RNG stream. All transforms are written out explicitly
/// (instead of std:: distributions) so sequences are identical across
/// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}
    Rng(std::uint64_t root, std::uint64_t stream) : engine_(derive_seed(root, stream)) {}

    std::uint64_t bits() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(bits() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (no state carried between calls).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Exponential with the given mean.
    double exponential(double mean) {
        double u = uniform();
        while (u >= 1.0) u = uniform();
        return -mean * std::log1p(-u);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace noma

#endif
