#pragma once

#include "irts/dataset.hpp"
#include "irts/densify.hpp"
#include "irts/taxonomy.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace irts {

/// Dense view plus per-instance class labels and split names.
struct LabeledDenseSet {
    DenseView dense;
    std::vector<std::string> labels;
    std::vector<std::string> split;

    std::size_t size() const noexcept { return labels.size(); }

    /// Instances whose split equals `name`, in original order.
    LabeledDenseSet subset(const std::string& name) const;
};

/// Densifies `ds`; labels come from "target" and split from "split".
/// Throws DataError if any instance lacks either attribute.
LabeledDenseSet make_labeled_set(const IrregularDataset& ds);

/// Dynamic time warping with absolute-difference cost, the warping path
/// confined to |ia - ib| <= band. The band is widened to |len_a - len_b| when
/// narrower so that a path always exists. Throws ArgumentError on an empty input.
double dtw_distance(std::span<const double> a, std::span<const double> b, std::size_t band);

/// Sum over signals of DTW between the NaN-stripped observation vectors.
/// A signal empty in both instances contributes 0, empty in one contributes +inf.
double instance_dtw(const DenseView& a, std::size_t ia, const DenseView& b, std::size_t ib, std::size_t band);

/// k-nearest-neighbour vote under `instance_dtw`. Vote ties go to the label
/// with the smaller summed neighbour distance, then to the lower train ordinal.
std::vector<std::string> knn_predict(const LabeledDenseSet& train, const LabeledDenseSet& test, std::size_t k,
                                     std::size_t band);

/// Number of random intervals for a series of length T: max(1, ceil(ln T)).
std::size_t default_interval_count(std::size_t length);

/// mean, std, min, max, median, skewness, excess kurtosis of the non-NaN
/// values of `window` (population moments; degenerate moments are 0).
std::array<double, 7> window_statistics(std::span<const double> window);

/// For each of `n_intervals` random intervals: mean, std, min, max, median,
/// skewness, excess kurtosis over the non-NaN values (7 NaNs if there are none).
std::vector<double> interval_features(std::span<const double> series, std::size_t n_intervals,
                                      std::uint64_t seed);

/// 1-NN on concatenated per-signal interval features (Euclidean distance over
/// dimensions finite in both vectors).
std::vector<std::string> interval_feature_predict(const LabeledDenseSet& train, const LabeledDenseSet& test,
                                                  std::uint64_t seed);

/// Sample skewness m3 / m2^1.5 of the sampling intervals; 0 for constant
/// intervals. Throws ArgumentError with fewer than 3 intervals.
double delta_skewness(const SignalTimestamps& ts);

/// One-dimensional rule: classes are ordered by their mean training score and
/// separated by thresholds at the midpoints between adjacent means.
class ThresholdClassifier {
public:
    void fit(std::span<const double> scores, std::span<const std::string> labels);
    std::string predict(double score) const;

    const std::vector<std::string>& ordered_classes() const noexcept { return classes_; }
    const std::vector<double>& thresholds() const noexcept { return thresholds_; }

private:
    std::vector<std::string> classes_;
    std::vector<double> thresholds_;
};

/// Fits a ThresholdClassifier on the Δt-skewness of each training instance's
/// timestamps and predicts the test instances.
std::vector<std::string> skew_rule_predict(const LabeledDenseSet& train, const LabeledDenseSet& test);

/// Unweighted mean over the classes present in y_true of per-class F1.
/// Throws ArgumentError on a length mismatch or empty input.
double f1_macro(std::span<const std::string> y_true, std::span<const std::string> y_pred);

}  // namespace irts
