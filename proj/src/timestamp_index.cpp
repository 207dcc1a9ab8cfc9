#include "irts/timestamp_index.hpp"

#include "irts/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace irts {

namespace {

void require_finite(double t) {
    if (!std::isfinite(t)) {
        throw DataError("timestamp must be finite, got " + std::to_string(t));
    }
}

}  // namespace

TimestampIndex TimestampIndex::build(std::span<const double> raw) {
    std::vector<double> ts(raw.begin(), raw.end());
    std::for_each(ts.begin(), ts.end(), require_finite);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return TimestampIndex(std::move(ts));
}

TimestampIndex TimestampIndex::from_sorted(std::vector<double> sorted) {
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        require_finite(sorted[k]);
        if (k > 0 && !(sorted[k - 1] < sorted[k])) {
            throw DataError("timestamps must be strictly increasing (position " + std::to_string(k) + ")");
        }
    }
    return TimestampIndex(std::move(sorted));
}

std::optional<std::size_t> TimestampIndex::find(double t) const noexcept {
    auto it = std::lower_bound(timestamps_.begin(), timestamps_.end(), t);
    if (it == timestamps_.end() || *it != t) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - timestamps_.begin());
}

std::size_t TimestampIndex::position_of(double t) const {
    if (auto k = find(t)) {
        return *k;
    }
    throw NotFoundError("timestamp " + std::to_string(t) + " not in index");
}

double TimestampIndex::timestamp_of(std::size_t k) const {
    if (k >= timestamps_.size()) {
        throw IndexError("time position " + std::to_string(k) + " out of range (size " +
                         std::to_string(timestamps_.size()) + ")");
    }
    return timestamps_[k];
}

std::pair<std::size_t, std::size_t> TimestampIndex::range_of(double t_min, double t_max) const noexcept {
    auto first = std::lower_bound(timestamps_.begin(), timestamps_.end(), t_min);
    auto last = std::upper_bound(first, timestamps_.end(), t_max);
    return {static_cast<std::size_t>(first - timestamps_.begin()),
            static_cast<std::size_t>(last - timestamps_.begin())};
}

}  // namespace irts
