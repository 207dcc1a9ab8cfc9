#include "irts/densify.hpp"

#include "irts/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace irts {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t checked_product(std::initializer_list<std::uint64_t> factors) {
    std::uint64_t total = 1;
    for (auto f : factors) {
        if (f != 0 && total > std::numeric_limits<std::uint64_t>::max() / f) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        total *= f;
    }
    return total;
}

// Sorted unique time positions of one instance's entries.
void union_positions(std::span<const CooEntry> entries, std::vector<std::uint64_t>& ks) {
    ks.clear();
    for (const auto& e : entries) {
        ks.push_back(e.time);
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
}

}  // namespace

std::vector<double> DenseView::observed_values(std::size_t i, std::size_t j) const {
    std::vector<double> out;
    const double* row = values.data() + (i * d + j) * T;
    for (std::size_t r = 0; r < T; ++r) {
        if (!std::isnan(row[r])) {
            out.push_back(row[r]);
        }
    }
    return out;
}

std::vector<double> DenseView::instance_timestamps(std::size_t i) const {
    const double* row = slot_timestamps.data() + i * T;
    return std::vector<double>(row, row + lengths[i]);
}

std::map<std::uint64_t, std::uint64_t> rank_positions(std::span<const std::uint64_t> ks) {
    std::map<std::uint64_t, std::uint64_t> ranks;
    for (std::size_t r = 0; r < ks.size(); ++r) {
        if (r > 0 && !(ks[r - 1] < ks[r])) {
            throw ArgumentError("positions must be strictly increasing");
        }
        ranks.emplace_hint(ranks.end(), ks[r], r + 1);
    }
    return ranks;
}

std::size_t max_instance_length(const IrregularDataset& ds) {
    std::size_t longest = 0;
    std::vector<std::uint64_t> ks;
    for (std::size_t i = 0; i < ds.n_instances(); ++i) {
        union_positions(ds.tensor().instance_entries(i), ks);
        longest = std::max(longest, ks.size());
    }
    return longest;
}

DenseView to_dense_min_ragged(const IrregularDataset& ds) {
    DenseView view;
    view.n = ds.n_instances();
    view.d = ds.n_signals();
    view.lengths.resize(view.n);

    std::vector<std::vector<std::uint64_t>> per_instance(view.n);
    for (std::size_t i = 0; i < view.n; ++i) {
        union_positions(ds.tensor().instance_entries(i), per_instance[i]);
        view.lengths[i] = per_instance[i].size();
        view.T = std::max(view.T, view.lengths[i]);
    }

    view.values.assign(view.n * view.d * view.T, kNaN);
    view.slot_timestamps.assign(view.n * view.T, kNaN);
    const auto times = ds.timestamps().values();

    for (std::size_t i = 0; i < view.n; ++i) {
        const auto& ks = per_instance[i];
        for (std::size_t r = 0; r < ks.size(); ++r) {
            view.slot_timestamps[i * view.T + r] = times[ks[r]];
        }
        for (const auto& e : ds.tensor().instance_entries(i)) {
            auto rank = static_cast<std::size_t>(std::lower_bound(ks.begin(), ks.end(), e.time) - ks.begin());
            view.values[(i * view.d + e.signal) * view.T + rank] = e.value;
        }
    }
    return view;
}

FullDenseTensor to_dense_full(const IrregularDataset& ds, std::uint64_t max_cells) {
    const auto& dims = ds.tensor().dims();
    auto cells = checked_product({dims.instances, dims.signals, dims.timestamps});
    if (cells > max_cells) {
        throw CapacityError(cells);
    }
    FullDenseTensor full;
    full.n = dims.instances;
    full.d = dims.signals;
    full.T = dims.timestamps;
    full.values.assign(cells, kNaN);
    for (const auto& e : ds.tensor().entries()) {
        full.values[(e.instance * full.d + e.signal) * full.T + e.time] = e.value;
    }
    return full;
}

std::uint64_t memory_estimate(const IrregularDataset& ds, Representation repr) {
    constexpr std::uint64_t scalar = sizeof(double);
    switch (repr) {
        case Representation::sparse:
            return checked_product({4, ds.nnz(), scalar});
        case Representation::dense_min:
            return checked_product({ds.n_instances(), ds.n_signals(), max_instance_length(ds), scalar});
        case Representation::dense_full:
            return checked_product({ds.n_instances(), ds.n_signals(), ds.n_timestamps(), scalar});
    }
    return 0;
}

}  // namespace irts
