#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace irts {

/// Deterministic generator with platform-independent conversions (the
/// standard distributions are implementation-defined, the engine is not).
class Rng {
public:
    /// Independent substream `stream` of `seed`.
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(mix(mix(seed) ^ (stream + 1))) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace irts
