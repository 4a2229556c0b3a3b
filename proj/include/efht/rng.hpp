#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace efht {

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Hashes an ordered list of integers into a single stream seed.
/// stream_seed({seed, n, t, i}) names probe i of generation t at dimension n.
inline std::uint64_t stream_seed(std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = 0x6a09e667f3bcc908ULL;
    for (auto p : parts) h = mix64(h ^ mix64(p));
    return h;
}

/// Portable random stream. The engine is std::mt19937_64; the uniform and
/// integer draws are done by hand so the sequence does not depend on the
/// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound). Rejection sampling avoids modulo bias.
    std::size_t below(std::size_t bound) {
        const std::uint64_t b = bound;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % b;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return static_cast<std::size_t>(v % b);
    }

    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace efht
