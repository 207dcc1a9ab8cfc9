#pragma once

#include "irts/timestamp_index.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace irts {

/// One stored COO coordinate. A NaN value is an explicit missing observation.
struct CooEntry {
    std::uint64_t instance = 0;
    std::uint64_t signal = 0;
    std::uint64_t time = 0;
    double value = 0.0;

    /// Coordinate equality plus value equality where any two NaNs compare equal.
    bool same_as(const CooEntry& other) const noexcept;
};

struct Dims {
    std::uint64_t instances = 0;
    std::uint64_t signals = 0;
    std::uint64_t timestamps = 0;

    bool operator==(const Dims&) const = default;
};

enum class DuplicatePolicy { error, last_wins };

/// Sparse n x d x T tensor of COO entries kept sorted by (instance, signal, time).
/// Absent coordinates are implicit missing values (raggedness padding).
class SparseIrregularTensor {
public:
    SparseIrregularTensor() = default;

    /// Sorts `entries`, resolves duplicates per `policy` (in input order) and
    /// validates bounds. Throws IndexError or DataError.
    SparseIrregularTensor(Dims dims, std::vector<CooEntry> entries,
                          DuplicatePolicy policy = DuplicatePolicy::error);

    const Dims& dims() const noexcept { return dims_; }
    std::size_t nnz() const noexcept { return entries_.size(); }
    std::span<const CooEntry> entries() const noexcept { return entries_; }

    /// Contiguous entries of one instance.
    std::span<const CooEntry> instance_entries(std::uint64_t i) const;

    const CooEntry* find(std::uint64_t i, std::uint64_t j, std::uint64_t k) const;

    bool operator==(const SparseIrregularTensor& other) const;

private:
    Dims dims_;
    std::vector<CooEntry> entries_;
    std::vector<std::size_t> instance_offsets_{0};
};

using AttributeValue = std::variant<double, std::string>;
using AttributeMap = std::map<std::string, AttributeValue>;

inline constexpr const char* kTargetKey = "target";
inline constexpr const char* kSplitKey = "split";

/// Renders an attribute as text; numbers use the shortest round-trip form.
std::string attribute_to_string(const AttributeValue& value);

/// Attribute equality where any two NaNs compare equal.
bool same_attribute(const AttributeValue& a, const AttributeValue& b) noexcept;
bool same_attributes(const AttributeMap& a, const AttributeMap& b) noexcept;

class Observation {
public:
    enum class State { observed, explicit_missing, implicit };

    static Observation observed(double x) { return Observation(State::observed, x); }
    static Observation explicit_missing() { return Observation(State::explicit_missing, 0.0); }
    static Observation implicit() { return Observation(State::implicit, 0.0); }

    State state() const noexcept { return state_; }
    bool is_observed() const noexcept { return state_ == State::observed; }
    /// Only meaningful when is_observed().
    double value() const noexcept { return value_; }

private:
    Observation(State s, double x) : state_(s), value_(x) {}
    State state_;
    double value_;
};

/// Sparse tensor plus its timestamp index, identifiers and per-instance static
/// attributes. Immutable once constructed.
class IrregularDataset {
public:
    IrregularDataset() = default;

    /// Validates all cross-field invariants; throws DataError on violation.
    /// An empty `attributes` vector means no attributes for any instance.
    IrregularDataset(SparseIrregularTensor tensor, TimestampIndex timestamps,
                     std::vector<std::string> instance_ids, std::vector<std::string> signal_ids,
                     std::vector<AttributeMap> attributes = {});

    const SparseIrregularTensor& tensor() const noexcept { return tensor_; }
    const TimestampIndex& timestamps() const noexcept { return timestamps_; }
    const std::vector<std::string>& instance_ids() const noexcept { return instance_ids_; }
    const std::vector<std::string>& signal_ids() const noexcept { return signal_ids_; }
    const std::vector<AttributeMap>& attributes() const noexcept { return attributes_; }

    std::size_t n_instances() const noexcept { return instance_ids_.size(); }
    std::size_t n_signals() const noexcept { return signal_ids_.size(); }
    std::size_t n_timestamps() const noexcept { return timestamps_.size(); }
    std::size_t nnz() const noexcept { return tensor_.nnz(); }

    Observation get_value(std::uint64_t i, std::uint64_t j, std::uint64_t k) const;

    /// Sorted time positions observed by instance i; restricted to signal j when given.
    /// Explicit-missing entries count as observed positions.
    std::vector<std::uint64_t> observed_positions(std::uint64_t i,
                                                  std::optional<std::uint64_t> j = std::nullopt) const;

    /// Timestamps of `observed_positions`.
    std::vector<double> observed_timestamps(std::uint64_t i,
                                            std::optional<std::uint64_t> j = std::nullopt) const;

    /// Keeps entries with timestamp in [t_min, t_max]; the index shrinks to
    /// the timestamps in that range. Throws ArgumentError if t_min > t_max.
    IrregularDataset slice_time_range(double t_min, double t_max) const;

    /// Attribute `key` of instance i, if set.
    const AttributeValue* attribute(std::uint64_t i, const std::string& key) const;

    bool operator==(const IrregularDataset& other) const;

private:
    void check_instance(std::uint64_t i) const;
    void check_signal(std::uint64_t j) const;

    SparseIrregularTensor tensor_;
    TimestampIndex timestamps_;
    std::vector<std::string> instance_ids_;
    std::vector<std::string> signal_ids_;
    std::vector<AttributeMap> attributes_;
};

}  // namespace irts
