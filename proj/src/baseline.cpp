#include "irts/baseline.hpp"

#include "irts/error.hpp"
#include "irts/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace irts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Moments {
    double mean = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
};

Moments central_moments(std::span<const double> xs) {
    Moments m;
    const double n = static_cast<double>(xs.size());
    for (double x : xs) {
        m.mean += x;
    }
    m.mean /= n;
    for (double x : xs) {
        double c = x - m.mean;
        m.m2 += c * c;
        m.m3 += c * c * c;
        m.m4 += c * c * c * c;
    }
    m.m2 /= n;
    m.m3 /= n;
    m.m4 /= n;
    return m;
}

// Spread at rounding-noise level relative to the mean counts as zero variance.
bool degenerate(const Moments& m) { return m.m2 <= 1e-24 * m.mean * m.mean; }

double skewness(const Moments& m) { return degenerate(m) ? 0.0 : m.m3 / std::pow(m.m2, 1.5); }

double excess_kurtosis(const Moments& m) { return degenerate(m) ? 0.0 : m.m4 / (m.m2 * m.m2) - 3.0; }

}  // namespace

LabeledDenseSet LabeledDenseSet::subset(const std::string& name) const {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < size(); ++i) {
        if (split[i] == name) {
            keep.push_back(i);
        }
    }
    LabeledDenseSet out;
    DenseView& v = out.dense;
    v.n = keep.size();
    v.d = dense.d;
    v.T = dense.T;
    const std::size_t row = dense.d * dense.T;
    for (auto i : keep) {
        v.values.insert(v.values.end(), dense.values.begin() + i * row, dense.values.begin() + (i + 1) * row);
        v.slot_timestamps.insert(v.slot_timestamps.end(), dense.slot_timestamps.begin() + i * dense.T,
                                 dense.slot_timestamps.begin() + (i + 1) * dense.T);
        v.lengths.push_back(dense.lengths[i]);
        out.labels.push_back(labels[i]);
        out.split.push_back(split[i]);
    }
    return out;
}

LabeledDenseSet make_labeled_set(const IrregularDataset& ds) {
    LabeledDenseSet set;
    set.dense = to_dense_min_ragged(ds);
    for (std::size_t i = 0; i < ds.n_instances(); ++i) {
        const auto* target = ds.attribute(i, kTargetKey);
        const auto* split = ds.attribute(i, kSplitKey);
        if (target == nullptr || split == nullptr) {
            throw DataError("instance '" + ds.instance_ids()[i] + "' lacks a target or split attribute");
        }
        set.labels.push_back(attribute_to_string(*target));
        set.split.push_back(attribute_to_string(*split));
    }
    return set;
}

double dtw_distance(std::span<const double> a, std::span<const double> b, std::size_t band) {
    if (a.empty() || b.empty()) {
        throw ArgumentError("dtw_distance requires non-empty sequences");
    }
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    const std::size_t w = std::max(band, n > m ? n - m : m - n);

    // cost[j] holds the cumulative cost of cell (i, j) in 1-based DP coordinates
    std::vector<double> prev(m + 1, kInf);
    std::vector<double> curr(m + 1, kInf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        std::fill(curr.begin(), curr.end(), kInf);
        const std::size_t lo = i > w ? i - w : 1;
        const std::size_t hi = std::min(m, i + w);
        for (std::size_t j = lo; j <= hi; ++j) {
            double best = std::min({prev[j], curr[j - 1], prev[j - 1]});
            curr[j] = std::abs(a[i - 1] - b[j - 1]) + best;
        }
        std::swap(prev, curr);
    }
    return prev[m];
}

double instance_dtw(const DenseView& a, std::size_t ia, const DenseView& b, std::size_t ib, std::size_t band) {
    double total = 0.0;
    for (std::size_t j = 0; j < a.d; ++j) {
        auto xa = a.observed_values(ia, j);
        auto xb = b.observed_values(ib, j);
        if (xa.empty() && xb.empty()) {
            continue;
        }
        if (xa.empty() || xb.empty()) {
            return kInf;
        }
        total += dtw_distance(xa, xb, band);
    }
    return total;
}

std::vector<std::string> knn_predict(const LabeledDenseSet& train, const LabeledDenseSet& test, std::size_t k,
                                     std::size_t band) {
    if (train.size() == 0) {
        throw ArgumentError("knn_predict requires a non-empty training set");
    }
    if (k == 0) {
        throw ArgumentError("knn_predict requires k >= 1");
    }
    if (train.dense.d != test.dense.d) {
        throw ArgumentError("train and test signal counts differ");
    }
    const std::size_t kk = std::min(k, train.size());
    std::vector<std::string> predictions;
    predictions.reserve(test.size());
    std::vector<std::pair<double, std::size_t>> neighbours(train.size());

    for (std::size_t t = 0; t < test.size(); ++t) {
        for (std::size_t r = 0; r < train.size(); ++r) {
            neighbours[r] = {instance_dtw(test.dense, t, train.dense, r, band), r};
        }
        std::partial_sort(neighbours.begin(), neighbours.begin() + kk, neighbours.end());

        struct Vote {
            std::size_t count = 0;
            double distance = 0.0;
            std::size_t first = std::numeric_limits<std::size_t>::max();
        };
        std::map<std::string, Vote> votes;
        for (std::size_t q = 0; q < kk; ++q) {
            auto& v = votes[train.labels[neighbours[q].second]];
            ++v.count;
            v.distance += neighbours[q].first;
            v.first = std::min(v.first, neighbours[q].second);
        }
        auto best = std::min_element(votes.begin(), votes.end(), [](const auto& x, const auto& y) {
            return std::make_tuple(-static_cast<long long>(x.second.count), x.second.distance, x.second.first) <
                   std::make_tuple(-static_cast<long long>(y.second.count), y.second.distance, y.second.first);
        });
        predictions.push_back(best->first);
    }
    return predictions;
}

std::size_t default_interval_count(std::size_t length) {
    if (length <= 1) {
        return 1;
    }
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(length)))));
}

std::array<double, 7> window_statistics(std::span<const double> window) {
    std::vector<double> xs;
    for (double x : window) {
        if (!std::isnan(x)) {
            xs.push_back(x);
        }
    }
    if (xs.empty()) {
        return {kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
    }
    std::sort(xs.begin(), xs.end());
    if (xs.front() == xs.back()) {
        return {xs.front(), 0.0, xs.front(), xs.front(), xs.front(), 0.0, 0.0};
    }
    auto m = central_moments(xs);
    const std::size_t mid = xs.size() / 2;
    double median = xs.size() % 2 == 1 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
    return {m.mean, std::sqrt(m.m2), xs.front(), xs.back(), median, skewness(m), excess_kurtosis(m)};
}

std::vector<double> interval_features(std::span<const double> series, std::size_t n_intervals,
                                      std::uint64_t seed) {
    std::vector<double> features;
    features.reserve(7 * n_intervals);
    const std::size_t T = series.size();
    Rng rng(seed);
    for (std::size_t q = 0; q < n_intervals; ++q) {
        std::array<double, 7> stats{kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
        if (T > 0) {
            const std::size_t min_len = std::min<std::size_t>(3, T);
            const std::size_t start = rng.below(T - min_len + 1);
            const std::size_t len = min_len + rng.below(T - start - min_len + 1);
            stats = window_statistics(series.subspan(start, len));
        }
        features.insert(features.end(), stats.begin(), stats.end());
    }
    return features;
}

std::vector<std::string> interval_feature_predict(const LabeledDenseSet& train, const LabeledDenseSet& test,
                                                  std::uint64_t seed) {
    if (train.size() == 0) {
        throw ArgumentError("interval_feature_predict requires a non-empty training set");
    }
    if (train.dense.d != test.dense.d || train.dense.T != test.dense.T) {
        throw ArgumentError("train and test dense shapes differ");
    }
    const std::size_t T = train.dense.T;
    const std::size_t n_intervals = default_interval_count(T);
    auto featurize = [&](const DenseView& v, std::size_t i) {
        std::vector<double> f;
        for (std::size_t j = 0; j < v.d; ++j) {
            std::span<const double> row(v.values.data() + (i * v.d + j) * T, T);
            auto part = interval_features(row, n_intervals, Rng::mix(seed + j));
            f.insert(f.end(), part.begin(), part.end());
        }
        return f;
    };
    std::vector<std::vector<double>> train_features;
    for (std::size_t r = 0; r < train.size(); ++r) {
        train_features.push_back(featurize(train.dense, r));
    }

    std::vector<std::string> predictions;
    for (std::size_t t = 0; t < test.size(); ++t) {
        auto f = featurize(test.dense, t);
        double best = kInf;
        std::size_t best_r = 0;
        for (std::size_t r = 0; r < train.size(); ++r) {
            double dist = 0.0;
            std::size_t shared = 0;
            for (std::size_t q = 0; q < f.size(); ++q) {
                if (std::isfinite(f[q]) && std::isfinite(train_features[r][q])) {
                    dist += (f[q] - train_features[r][q]) * (f[q] - train_features[r][q]);
                    ++shared;
                }
            }
            if (shared == 0) {
                dist = kInf;
            }
            if (dist < best) {
                best = dist;
                best_r = r;
            }
        }
        predictions.push_back(train.labels[best_r]);
    }
    return predictions;
}

double delta_skewness(const SignalTimestamps& ts) {
    auto dt = ts.deltas();
    if (dt.size() < 3) {
        throw ArgumentError("delta_skewness requires at least 3 intervals");
    }
    return skewness(central_moments(dt));
}

void ThresholdClassifier::fit(std::span<const double> scores, std::span<const std::string> labels) {
    if (scores.empty() || scores.size() != labels.size()) {
        throw ArgumentError("ThresholdClassifier::fit needs equally many scores and labels");
    }
    std::map<std::string, std::pair<double, std::size_t>> sums;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        auto& [sum, count] = sums[labels[i]];
        sum += scores[i];
        ++count;
    }
    std::vector<std::pair<double, std::string>> means;
    for (const auto& [label, acc] : sums) {
        means.emplace_back(acc.first / static_cast<double>(acc.second), label);
    }
    std::sort(means.begin(), means.end());
    classes_.clear();
    thresholds_.clear();
    for (std::size_t c = 0; c < means.size(); ++c) {
        classes_.push_back(means[c].second);
        if (c + 1 < means.size()) {
            thresholds_.push_back(0.5 * (means[c].first + means[c + 1].first));
        }
    }
}

std::string ThresholdClassifier::predict(double score) const {
    if (classes_.empty()) {
        throw ArgumentError("ThresholdClassifier used before fit");
    }
    for (std::size_t c = 0; c < thresholds_.size(); ++c) {
        if (score < thresholds_[c]) {
            return classes_[c];
        }
    }
    return classes_.back();
}

std::vector<std::string> skew_rule_predict(const LabeledDenseSet& train, const LabeledDenseSet& test) {
    auto score = [](const DenseView& v, std::size_t i) {
        return delta_skewness(SignalTimestamps(v.instance_timestamps(i)));
    };
    std::vector<double> train_scores;
    for (std::size_t r = 0; r < train.size(); ++r) {
        train_scores.push_back(score(train.dense, r));
    }
    ThresholdClassifier rule;
    rule.fit(train_scores, train.labels);
    std::vector<std::string> predictions;
    for (std::size_t t = 0; t < test.size(); ++t) {
        predictions.push_back(rule.predict(score(test.dense, t)));
    }
    return predictions;
}

double f1_macro(std::span<const std::string> y_true, std::span<const std::string> y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw ArgumentError("f1_macro: y_true and y_pred lengths differ");
    }
    if (y_true.empty()) {
        throw ArgumentError("f1_macro: empty input");
    }
    std::set<std::string> classes(y_true.begin(), y_true.end());
    double total = 0.0;
    for (const auto& c : classes) {
        double tp = 0.0;
        double fp = 0.0;
        double fn = 0.0;
        for (std::size_t i = 0; i < y_true.size(); ++i) {
            bool is_true = y_true[i] == c;
            bool is_pred = y_pred[i] == c;
            tp += is_true && is_pred;
            fp += !is_true && is_pred;
            fn += is_true && !is_pred;
        }
        double precision = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
        double recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
        total += precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    }
    return total / static_cast<double>(classes.size());
}

}  // namespace irts
