#pragma once

#include "irts/dataset.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace irts {

/// Relative tolerance for comparing sampling intervals.
inline constexpr double kDefaultRelTol = 1e-9;

/// The strictly increasing timestamps of one signal (or of an instance's union).
class SignalTimestamps {
public:
    SignalTimestamps() = default;
    /// Throws ArgumentError unless `ts` is finite and strictly increasing.
    explicit SignalTimestamps(std::vector<double> ts);

    std::size_t size() const noexcept { return ts_.size(); }
    bool empty() const noexcept { return ts_.empty(); }
    std::span<const double> values() const noexcept { return ts_; }
    double front() const { return ts_.front(); }
    double back() const { return ts_.back(); }

    /// Successive differences; length max(size - 1, 0).
    std::vector<double> deltas() const;

private:
    std::vector<double> ts_;
};

struct RaggednessFlags {
    bool ragged_length = false;
    bool shift = false;
    bool ragged_sampling = false;

    bool operator==(const RaggednessFlags&) const = default;
};

struct IrregularityProfile {
    bool unevenly_sampled = false;
    bool partially_observed = false;
    bool ragged_length = false;
    bool shift = false;
    bool ragged_sampling = false;

    // supporting statistics
    std::size_t unevenly_sampled_instances = 0;
    std::size_t explicit_missing_entries = 0;
    /// Cross-instance checks compared rank sequences because no timestamp is
    /// shared between instances.
    bool cross_instance_rank_normalized = false;

    /// "US:true PO:false UL:false SH:false RS:false"
    std::string flags_string() const;
};

/// True iff some interval differs from the first by more than rel_tol relative to it.
bool is_unevenly_sampled(const SignalTimestamps& ts, double rel_tol = kDefaultRelTol);

/// True iff any stored entry is NaN.
bool is_partially_observed(const IrregularDataset& ds);

/// Symmetric in its arguments. Intervals are compared only where both signals have one.
RaggednessFlags signal_pair_raggedness(const SignalTimestamps& a, const SignalTimestamps& b,
                                       double rel_tol = kDefaultRelTol);

/// Raggedness of a whole group of signals, equal to the OR of
/// `signal_pair_raggedness` over all pairs, computed without enumerating pairs.
RaggednessFlags group_raggedness(std::span<const SignalTimestamps> group, double rel_tol = kDefaultRelTol);

IrregularityProfile profile(const IrregularDataset& ds, double rel_tol = kDefaultRelTol);

}  // namespace irts
