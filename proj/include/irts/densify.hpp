#pragma once

#include "irts/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace irts {

/// Minimally ragged dense tensor: n x d x T values, T = max_i T_i, where each
/// instance's observed time positions are renumbered to consecutive slots.
/// Missing values and padding are both NaN.
struct DenseView {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t T = 0;
    std::vector<double> values;           // row-major [i][j][r]
    std::vector<double> slot_timestamps;  // row-major [i][r]; NaN past lengths[i]
    std::vector<std::size_t> lengths;     // T_i

    double value(std::size_t i, std::size_t j, std::size_t r) const { return values[(i * d + j) * T + r]; }
    double slot_timestamp(std::size_t i, std::size_t r) const { return slot_timestamps[i * T + r]; }

    /// Signal (i, j) with NaN cells dropped; observation order is kept.
    std::vector<double> observed_values(std::size_t i, std::size_t j) const;
    /// The first lengths[i] slot timestamps of instance i.
    std::vector<double> instance_timestamps(std::size_t i) const;
};

/// Fully ragged dense tensor: n x d x T_global, values at their global position.
struct FullDenseTensor {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t T = 0;
    std::vector<double> values;  // row-major [i][j][k]

    double value(std::size_t i, std::size_t j, std::size_t k) const { return values[(i * d + j) * T + k]; }
};

/// Dense 1-based rank of each position in a strictly increasing list.
/// Throws ArgumentError if `ks` is not strictly increasing.
std::map<std::uint64_t, std::uint64_t> rank_positions(std::span<const std::uint64_t> ks);

DenseView to_dense_min_ragged(const IrregularDataset& ds);

/// Throws CapacityError if n*d*T_global exceeds `max_cells`.
FullDenseTensor to_dense_full(const IrregularDataset& ds, std::uint64_t max_cells);

enum class Representation { sparse, dense_min, dense_full };

/// Bytes needed by a representation, counting 8-byte scalars: sparse stores
/// three coordinates and one value per stored entry.
std::uint64_t memory_estimate(const IrregularDataset& ds, Representation repr);

/// Longest instance (max_i T_i).
std::size_t max_instance_length(const IrregularDataset& ds);

}  // namespace irts
