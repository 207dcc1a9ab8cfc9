#pragma once

#include "irts/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace irts {

/// `.irts` layout, all little-endian:
///
///   "IRTS" | u16 version = 1 | u16 reserved = 0 | u64 n, d, T, nnz
///   u64 instance_idx[nnz] | u64 signal_idx[nnz] | u64 time_idx[nnz]
///   f64 values[nnz] | f64 timestamps[T]
///   u64 metadata_len | metadata (UTF-8 JSON, sorted keys)
///   u32 CRC-32 of every preceding byte
///
/// Entries are written in (i, j, k) order and NaN as the canonical quiet NaN,
/// so identical datasets serialize to identical bytes.
inline constexpr std::uint16_t kIrtsVersion = 1;

std::vector<std::uint8_t> serialize(const IrregularDataset& ds);

/// Throws FormatError (naming the failing section) or IntegrityError.
IrregularDataset deserialize(std::span<const std::uint8_t> bytes);

void save(const IrregularDataset& ds, const std::filesystem::path& path);
IrregularDataset load(const std::filesystem::path& path);

}  // namespace irts
