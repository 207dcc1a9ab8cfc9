#pragma once

#include "irts/dataset.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace irts {

struct DatasetStats {
    std::size_t n_instances = 0;
    std::size_t n_signals = 0;
    std::size_t max_obs = 0;
    /// Present only when every instance carries a "target" attribute.
    std::optional<std::size_t> n_classes;
    std::optional<double> class_unbalance;
    double missing_ratio = 0.0;
    double sampling_cv = 0.0;

    static std::string csv_header();
    std::string csv_row() const;
};

/// NaN cells of the minimally ragged dense tensor over its n*d*T cells.
double missing_ratio(const IrregularDataset& ds);

/// Coefficient of variation of each signal's sampling intervals, averaged over
/// the signals of an instance and then over instances. Signals with fewer than
/// two observations contribute 0.
double sampling_cv(const IrregularDataset& ds);

/// Population standard deviation of the per-class fractions.
/// Throws ArgumentError on an empty label list.
double class_unbalance(std::span<const std::string> labels);

DatasetStats dataset_summary(const IrregularDataset& ds);

}  // namespace irts
