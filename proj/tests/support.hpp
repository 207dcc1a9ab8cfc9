#pragma once

// Shared fixtures for the test binaries: a seeded random dataset generator and
// reference implementations written without reference to the library code.

#include "irts/dataset.hpp"
#include "irts/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

namespace irts::test {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RandomShape {
    std::size_t max_instances = 6;
    std::size_t max_signals = 6;
    std::size_t max_timestamps = 12;
    double nan_rate = 0.15;
    double empty_instance_rate = 0.2;
    bool attributes = true;
};

inline double random_timestamp(Rng& rng) {
    switch (rng.below(4)) {
        case 0:
            return static_cast<double>(rng.below(50));
        case 1:
            return 0.1 * static_cast<double>(rng.below(200)) - 5.0;
        case 2:
            return 1.6e9 + 0.001 * static_cast<double>(rng.below(100000));
        default:
            return rng.uniform() * 100.0;
    }
}

inline double random_value(Rng& rng, double nan_rate) {
    if (rng.uniform() < nan_rate) {
        return kNaN;
    }
    switch (rng.below(3)) {
        case 0:
            return static_cast<double>(rng.below(21)) - 10.0;
        case 1:
            return (rng.uniform() - 0.5) * 1e6;
        default:
            return (rng.uniform() - 0.5) * 1e-3;
    }
}

inline AttributeMap random_attributes(Rng& rng, std::size_t i) {
    AttributeMap attrs;
    if (rng.below(3) != 0) {
        attrs["target"] = std::string(rng.below(2) ? "up" : "down");
    }
    if (rng.below(2) != 0) {
        attrs["split"] = std::string(rng.below(2) ? "train" : "test");
    }
    if (rng.below(2) != 0) {
        attrs["age"] = static_cast<double>(20 + i) + 0.5 * static_cast<double>(rng.below(3));
    }
    if (rng.below(4) == 0) {
        // numeric-looking text must stay text
        attrs["code"] = std::to_string(rng.below(100));
    }
    if (rng.below(6) == 0) {
        attrs["note"] = std::string("a, \"quoted\" note");
    }
    return attrs;
}

/// Random dataset with explicit NaNs, empty instances, unused timestamps and
/// signals that may never be observed.
inline IrregularDataset random_dataset(Rng& rng, const RandomShape& shape = {}) {
    const std::size_t n = rng.below(shape.max_instances + 1);
    const std::size_t d = rng.below(shape.max_signals + 1);
    std::vector<double> raw;
    const std::size_t want = rng.below(shape.max_timestamps + 1);
    while (raw.size() < want) {
        double t = random_timestamp(rng);
        if (std::find(raw.begin(), raw.end(), t) == raw.end()) {
            raw.push_back(t);
        }
    }
    auto index = TimestampIndex::build(raw);
    const std::size_t T = index.size();

    std::vector<CooEntry> entries;
    std::vector<std::string> instance_ids;
    std::vector<AttributeMap> attributes;
    for (std::size_t i = 0; i < n; ++i) {
        instance_ids.push_back("case-" + std::to_string(i * 7 + rng.below(7)));
        attributes.push_back(shape.attributes ? random_attributes(rng, i) : AttributeMap{});
        if (rng.uniform() < shape.empty_instance_rate) {
            continue;
        }
        const double density = rng.uniform();
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < T; ++k) {
                if (rng.uniform() < density) {
                    entries.push_back({i, j, k, random_value(rng, shape.nan_rate)});
                }
            }
        }
    }
    std::vector<std::string> signal_ids;
    for (std::size_t j = 0; j < d; ++j) {
        signal_ids.push_back(j % 3 == 2 ? "sig " + std::to_string(j) : "s" + std::to_string(j));
    }
    // shuffle entry order; the tensor must sort them
    for (std::size_t q = entries.size(); q > 1; --q) {
        std::swap(entries[q - 1], entries[rng.below(q)]);
    }
    Dims dims{n, d, T};
    return IrregularDataset(SparseIrregularTensor(dims, std::move(entries)), std::move(index),
                            std::move(instance_ids), std::move(signal_ids), std::move(attributes));
}

/// Full n x d x T_global tensor, then drop time columns that hold no stored
/// entry for any signal of the instance. Returns [i][j][slot].
struct CompactOracle {
    std::vector<std::vector<std::vector<double>>> values;
    std::vector<std::vector<double>> slot_times;
    std::size_t T = 0;
};

inline CompactOracle compact_oracle(const IrregularDataset& ds) {
    const std::size_t n = ds.n_instances(), d = ds.n_signals(), TT = ds.n_timestamps();
    std::vector<double> full(n * d * TT, kNaN);
    std::vector<char> stored(n * d * TT, 0);
    for (const auto& e : ds.tensor().entries()) {
        full[(e.instance * d + e.signal) * TT + e.time] = e.value;
        stored[(e.instance * d + e.signal) * TT + e.time] = 1;
    }
    CompactOracle out;
    out.values.resize(n);
    out.slot_times.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> keep;
        for (std::size_t k = 0; k < TT; ++k) {
            bool any = false;
            for (std::size_t j = 0; j < d; ++j) {
                any = any || stored[(i * d + j) * TT + k];
            }
            if (any) {
                keep.push_back(k);
            }
        }
        out.values[i].resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            for (auto k : keep) {
                out.values[i][j].push_back(full[(i * d + j) * TT + k]);
            }
        }
        for (auto k : keep) {
            out.slot_times[i].push_back(ds.timestamps().values()[k]);
        }
        out.T = std::max(out.T, keep.size());
    }
    return out;
}

// Minimum cost over every monotone warping path that keeps |ia - ib| <= band.
inline double dtw_by_paths(const std::vector<double>& a, const std::vector<double>& b, std::size_t band) {
    const long n = static_cast<long>(a.size()), m = static_cast<long>(b.size());
    const long w = std::max(static_cast<long>(band), std::abs(n - m));
    double best = std::numeric_limits<double>::infinity();
    std::function<void(long, long, double)> walk = [&](long i, long j, double cost) {
        if (std::abs(i - j) > w) {
            return;
        }
        cost += std::abs(a[i] - b[j]);
        if (i == n - 1 && j == m - 1) {
            best = std::min(best, cost);
            return;
        }
        if (i + 1 < n) {
            walk(i + 1, j, cost);
        }
        if (j + 1 < m) {
            walk(i, j + 1, cost);
        }
        if (i + 1 < n && j + 1 < m) {
            walk(i + 1, j + 1, cost);
        }
    };
    walk(0, 0, 0.0);
    return best;
}

inline bool same_double(double a, double b) {
    return a == b || (std::isnan(a) && std::isnan(b));
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("irts_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace irts::test
