#include "irts/bench.hpp"

#include "irts/densify.hpp"
#include "irts/error.hpp"
#include "irts/persist.hpp"
#include "irts/random.hpp"

#include <algorithm>
#include <chrono>
#include <optional>

namespace irts {

namespace {

template <typename F>
double seconds_of(F&& f) {
    auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

double median(std::vector<double> values) {
    if (values.empty()) {
        throw ArgumentError("median of an empty list");
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double time_conversion(const IrregularDataset& ds, std::size_t repetitions) {
    if (repetitions == 0) {
        throw ArgumentError("repetitions must be at least 1");
    }
    std::vector<double> times;
    for (std::size_t r = 0; r < repetitions; ++r) {
        times.push_back(seconds_of([&] {
            auto view = to_dense_min_ragged(ds);
            if (view.values.size() != view.n * view.d * view.T) {
                throw Error("inconsistent dense view");
            }
        }));
    }
    return median(std::move(times));
}

BenchReport run_bench(const std::filesystem::path& path, std::size_t repetitions) {
    if (repetitions == 0) {
        throw ArgumentError("repetitions must be at least 1");
    }
    BenchReport report;
    report.name = path.stem().string();
    report.disk_bytes = std::filesystem::file_size(path);

    std::vector<double> loads;
    std::optional<IrregularDataset> ds;
    for (std::size_t r = 0; r < repetitions; ++r) {
        loads.push_back(seconds_of([&] { ds.emplace(load(path)); }));
    }
    report.load_seconds = median(std::move(loads));
    report.convert_seconds = time_conversion(*ds, repetitions);
    report.sparse_bytes = memory_estimate(*ds, Representation::sparse);
    report.dense_min_bytes = memory_estimate(*ds, Representation::dense_min);
    report.dense_full_bytes = memory_estimate(*ds, Representation::dense_full);
    return report;
}

IrregularDataset generate_scaling_dataset(const ScalingConfig& cfg) {
    if (cfg.instances == 0 || cfg.signals == 0 || cfg.length == 0) {
        throw ArgumentError("scaling dataset needs positive instances, signals and length");
    }
    Rng rng(cfg.seed);
    const std::size_t grid = 2 * cfg.length;
    std::vector<double> times(grid);
    for (std::size_t k = 0; k < grid; ++k) {
        times[k] = static_cast<double>(k) + 0.5 * rng.uniform();
    }
    auto index = TimestampIndex::from_sorted(std::move(times));

    std::vector<CooEntry> entries;
    entries.reserve(cfg.instances * cfg.signals * cfg.length);
    std::vector<std::string> instance_ids;
    for (std::size_t i = 0; i < cfg.instances; ++i) {
        const std::size_t offset = rng.below(grid - cfg.length + 1);
        for (std::size_t j = 0; j < cfg.signals; ++j) {
            for (std::size_t l = 0; l < cfg.length; ++l) {
                entries.push_back({i, j, offset + l, rng.uniform() - 0.5});
            }
        }
        instance_ids.push_back("s" + std::to_string(i));
    }
    std::vector<std::string> signal_ids;
    for (std::size_t j = 0; j < cfg.signals; ++j) {
        signal_ids.push_back("v" + std::to_string(j));
    }
    Dims dims{cfg.instances, cfg.signals, index.size()};
    return IrregularDataset(SparseIrregularTensor(dims, std::move(entries)), std::move(index), std::move(instance_ids),
                            std::move(signal_ids));
}

}  // namespace irts
