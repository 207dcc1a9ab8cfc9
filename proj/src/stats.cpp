#include "irts/stats.hpp"

#include "irts/densify.hpp"
#include "irts/error.hpp"
#include "irts/text.hpp"

#include <cmath>
#include <map>
#include <set>
#include <vector>

namespace irts {

namespace {

double population_cv(const std::vector<double>& xs) {
    if (xs.empty()) {
        return 0.0;
    }
    double mean = 0.0;
    for (double x : xs) {
        mean += x;
    }
    mean /= static_cast<double>(xs.size());
    if (mean == 0.0) {
        return 0.0;
    }
    double var = 0.0;
    for (double x : xs) {
        var += (x - mean) * (x - mean);
    }
    var /= static_cast<double>(xs.size());
    return std::sqrt(var) / mean;
}

}  // namespace

std::string DatasetStats::csv_header() {
    return "n_instances,n_signals,max_obs,n_classes,class_unbalance,missing_ratio,sampling_cv";
}

std::string DatasetStats::csv_row() const {
    return std::to_string(n_instances) + "," + std::to_string(n_signals) + "," + std::to_string(max_obs) + "," +
           (n_classes ? std::to_string(*n_classes) : "") + "," +
           (class_unbalance ? format_number(*class_unbalance) : "") + "," + format_number(missing_ratio) + "," +
           format_number(sampling_cv);
}

double missing_ratio(const IrregularDataset& ds) {
    // Every dense-min cell is NaN except those holding a finite entry.
    const std::uint64_t cells = static_cast<std::uint64_t>(ds.n_instances()) * ds.n_signals() * max_instance_length(ds);
    if (cells == 0) {
        return 0.0;
    }
    std::uint64_t finite = 0;
    for (const auto& e : ds.tensor().entries()) {
        if (!std::isnan(e.value)) {
            ++finite;
        }
    }
    return static_cast<double>(cells - finite) / static_cast<double>(cells);
}

double sampling_cv(const IrregularDataset& ds) {
    const std::size_t n = ds.n_instances();
    const std::size_t d = ds.n_signals();
    if (n == 0 || d == 0) {
        return 0.0;
    }
    const auto times = ds.timestamps().values();
    double dataset_total = 0.0;
    std::vector<std::vector<double>> deltas(d);
    std::vector<double> last(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& dt : deltas) {
            dt.clear();
        }
        std::vector<bool> started(d, false);
        for (const auto& e : ds.tensor().instance_entries(i)) {
            double t = times[e.time];
            if (started[e.signal]) {
                deltas[e.signal].push_back(t - last[e.signal]);
            }
            started[e.signal] = true;
            last[e.signal] = t;
        }
        double instance_total = 0.0;
        for (const auto& dt : deltas) {
            instance_total += population_cv(dt);
        }
        dataset_total += instance_total / static_cast<double>(d);
    }
    return dataset_total / static_cast<double>(n);
}

double class_unbalance(std::span<const std::string> labels) {
    if (labels.empty()) {
        throw ArgumentError("class_unbalance needs at least one label");
    }
    std::map<std::string, std::size_t> counts;
    for (const auto& label : labels) {
        ++counts[label];
    }
    const double n = static_cast<double>(labels.size());
    const double c = static_cast<double>(counts.size());
    const double mean = 1.0 / c;
    double var = 0.0;
    for (const auto& [_, count] : counts) {
        double frac = static_cast<double>(count) / n;
        var += (frac - mean) * (frac - mean);
    }
    return std::sqrt(var / c);
}

DatasetStats dataset_summary(const IrregularDataset& ds) {
    DatasetStats s;
    s.n_instances = ds.n_instances();
    s.n_signals = ds.n_signals();
    s.max_obs = max_instance_length(ds);
    s.missing_ratio = missing_ratio(ds);
    s.sampling_cv = sampling_cv(ds);

    std::vector<std::string> labels;
    for (std::size_t i = 0; i < ds.n_instances(); ++i) {
        const auto* target = ds.attribute(i, kTargetKey);
        if (target == nullptr) {
            labels.clear();
            break;
        }
        labels.push_back(attribute_to_string(*target));
    }
    if (!labels.empty()) {
        s.class_unbalance = class_unbalance(labels);
        s.n_classes = std::set<std::string>(labels.begin(), labels.end()).size();
    }
    return s;
}

}  // namespace irts
