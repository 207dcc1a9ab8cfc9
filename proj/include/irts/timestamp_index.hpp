#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace irts {

/// Sorted, deduplicated global timestamp vector and its bidirectional
/// timestamp <-> position mapping. Timestamp identity is exact float equality.
class TimestampIndex {
public:
    TimestampIndex() = default;

    /// Sorts and deduplicates `raw`. Throws DataError on NaN or infinite input.
    static TimestampIndex build(std::span<const double> raw);

    /// Adopts an already strictly increasing, finite vector. Throws DataError otherwise.
    static TimestampIndex from_sorted(std::vector<double> sorted);

    std::size_t size() const noexcept { return timestamps_.size(); }
    bool empty() const noexcept { return timestamps_.empty(); }
    std::span<const double> values() const noexcept { return timestamps_; }

    /// Position k of timestamp t. Throws NotFoundError if t is absent.
    std::size_t position_of(double t) const;
    std::optional<std::size_t> find(double t) const noexcept;

    /// Timestamp at position k. Throws IndexError if k >= size().
    double timestamp_of(std::size_t k) const;

    /// Half-open position range [first, last) of timestamps inside [t_min, t_max].
    std::pair<std::size_t, std::size_t> range_of(double t_min, double t_max) const noexcept;

    bool operator==(const TimestampIndex&) const = default;

private:
    explicit TimestampIndex(std::vector<double> ts) : timestamps_(std::move(ts)) {}

    std::vector<double> timestamps_;
};

}  // namespace irts
