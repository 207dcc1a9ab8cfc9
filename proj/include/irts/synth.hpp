#pragma once

#include "irts/dataset.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace irts {

/// Alembics-Bowls-Flasks: three classes that differ only in how the time axis
/// is sampled. Every instance has the same value shape (a standardized lower
/// semicircle); the class lives in the timestamps.
struct AbfConfig {
    std::uint64_t seed = 0;
    std::size_t per_class_train = 10;
    std::size_t per_class_test = 300;
    std::size_t series_length = 128;
    /// gamma > 0. Alembic samples t = u^gamma, Flask t = 1 - (1 - u)^(1 + 1/gamma), Bowl t = u.
    double skew_strength = 3.0;
    /// Width of the uniform jitter of each sample inside its 1/L stratum, in [0, 1).
    double jitter = 0.25;

    /// Throws ArgumentError on an invalid configuration.
    void validate() const;
};

inline constexpr std::array<std::string_view, 3> kAbfClasses = {"alembic", "bowl", "flask"};

/// Instances are ordered train then test, and by class within each split.
/// Deterministic for a fixed configuration.
IrregularDataset generate_abf(const AbfConfig& cfg);

}  // namespace irts
