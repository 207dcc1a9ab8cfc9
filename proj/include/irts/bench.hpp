#pragma once

#include "irts/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace irts {

struct BenchReport {
    std::string name;
    double load_seconds = 0.0;
    double convert_seconds = 0.0;
    std::uint64_t disk_bytes = 0;
    std::uint64_t sparse_bytes = 0;
    std::uint64_t dense_min_bytes = 0;
    std::uint64_t dense_full_bytes = 0;
};

/// Median wall-clock of `repetitions` loads and minimally ragged conversions
/// of the `.irts` file at `path`. Throws ArgumentError if repetitions is 0.
BenchReport run_bench(const std::filesystem::path& path, std::size_t repetitions);

/// Median wall-clock seconds of `repetitions` calls to to_dense_min_ragged.
double time_conversion(const IrregularDataset& ds, std::size_t repetitions);

double median(std::vector<double> values);

/// Synthetic workload: every instance observes all `signals` on `length`
/// consecutive positions of a shared jittered grid, starting at a random
/// offset, so nnz = instances * signals * length.
struct ScalingConfig {
    std::uint64_t seed = 0;
    std::size_t instances = 1000;
    std::size_t signals = 4;
    std::size_t length = 25;
};

IrregularDataset generate_scaling_dataset(const ScalingConfig& cfg);

}  // namespace irts
