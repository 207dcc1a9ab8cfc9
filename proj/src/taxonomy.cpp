#include "irts/taxonomy.hpp"

#include "irts/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace irts {

namespace {

// For 0 < lo <= hi: the two intervals differ beyond the tolerance.
bool intervals_differ(double lo, double hi, double rel_tol) { return (hi - lo) > rel_tol * hi; }

bool pair_intervals_differ(double a, double b, double rel_tol) {
    return a < b ? intervals_differ(a, b, rel_tol) : intervals_differ(b, a, rel_tol);
}

const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace

SignalTimestamps::SignalTimestamps(std::vector<double> ts) : ts_(std::move(ts)) {
    for (std::size_t k = 0; k < ts_.size(); ++k) {
        if (!std::isfinite(ts_[k]) || (k > 0 && !(ts_[k - 1] < ts_[k]))) {
            throw ArgumentError("signal timestamps must be finite and strictly increasing");
        }
    }
}

std::vector<double> SignalTimestamps::deltas() const {
    std::vector<double> out;
    if (ts_.size() < 2) {
        return out;
    }
    out.reserve(ts_.size() - 1);
    for (std::size_t k = 0; k + 1 < ts_.size(); ++k) {
        out.push_back(ts_[k + 1] - ts_[k]);
    }
    return out;
}

std::string IrregularityProfile::flags_string() const {
    return std::string("US:") + flag(unevenly_sampled) + " PO:" + flag(partially_observed) +
           " UL:" + flag(ragged_length) + " SH:" + flag(shift) + " RS:" + flag(ragged_sampling);
}

bool is_unevenly_sampled(const SignalTimestamps& ts, double rel_tol) {
    auto dt = ts.deltas();
    if (dt.size() < 2) {
        return false;
    }
    const double first = dt.front();
    return std::any_of(dt.begin() + 1, dt.end(),
                       [&](double x) { return std::abs(x - first) > rel_tol * std::abs(first); });
}

bool is_partially_observed(const IrregularDataset& ds) {
    auto entries = ds.tensor().entries();
    return std::any_of(entries.begin(), entries.end(), [](const CooEntry& e) { return std::isnan(e.value); });
}

RaggednessFlags signal_pair_raggedness(const SignalTimestamps& a, const SignalTimestamps& b, double rel_tol) {
    RaggednessFlags flags;
    flags.ragged_length = a.size() != b.size();
    if (!a.empty() && !b.empty()) {
        flags.shift = (a.front() < b.front() && a.back() < b.back()) ||
                      (b.front() < a.front() && b.back() < a.back());
    }
    auto da = a.deltas();
    auto db = b.deltas();
    for (std::size_t k = 0; k < std::min(da.size(), db.size()); ++k) {
        if (pair_intervals_differ(da[k], db[k], rel_tol)) {
            flags.ragged_sampling = true;
            break;
        }
    }
    return flags;
}

RaggednessFlags group_raggedness(std::span<const SignalTimestamps> group, double rel_tol) {
    RaggednessFlags flags;
    if (group.size() < 2) {
        return flags;
    }
    flags.ragged_length = std::any_of(group.begin(), group.end(),
                                      [&](const SignalTimestamps& s) { return s.size() != group.front().size(); });

    // shift: some a with start_a < start_b and end_a < end_b
    std::vector<std::pair<double, double>> spans;
    for (const auto& s : group) {
        if (!s.empty()) {
            spans.emplace_back(s.front(), s.back());
        }
    }
    std::sort(spans.begin(), spans.end());
    double min_end_before = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < spans.size() && !flags.shift;) {
        std::size_t h = g;
        while (h < spans.size() && spans[h].first == spans[g].first) {
            if (min_end_before < spans[h].second) {
                flags.shift = true;
            }
            ++h;
        }
        for (; g < h; ++g) {
            min_end_before = std::min(min_end_before, spans[g].second);
        }
    }

    // ragged sampling: the extreme intervals at some position differ
    std::vector<std::vector<double>> deltas;
    std::size_t longest = 0;
    for (const auto& s : group) {
        deltas.push_back(s.deltas());
        longest = std::max(longest, deltas.back().size());
    }
    for (std::size_t k = 0; k < longest && !flags.ragged_sampling; ++k) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        std::size_t present = 0;
        for (const auto& dt : deltas) {
            if (k < dt.size()) {
                lo = std::min(lo, dt[k]);
                hi = std::max(hi, dt[k]);
                ++present;
            }
        }
        flags.ragged_sampling = present >= 2 && intervals_differ(lo, hi, rel_tol);
    }
    return flags;
}

IrregularityProfile profile(const IrregularDataset& ds, double rel_tol) {
    IrregularityProfile out;
    const std::size_t n = ds.n_instances();
    const std::size_t d = ds.n_signals();
    const auto times = ds.timestamps().values();

    for (const auto& e : ds.tensor().entries()) {
        if (std::isnan(e.value)) {
            ++out.explicit_missing_entries;
        }
    }
    out.partially_observed = out.explicit_missing_entries > 0;

    auto merge = [](RaggednessFlags& into, const RaggednessFlags& from) {
        into.ragged_length |= from.ragged_length;
        into.shift |= from.shift;
        into.ragged_sampling |= from.ragged_sampling;
    };

    RaggednessFlags ragged;
    std::vector<SignalTimestamps> unions(n);
    std::vector<unsigned> owners(ds.n_timestamps(), 0);
    std::vector<std::vector<double>> per_signal(d);

    for (std::size_t i = 0; i < n; ++i) {
        for (auto& ts : per_signal) {
            ts.clear();
        }
        auto entries = ds.tensor().instance_entries(i);
        std::vector<std::uint64_t> ks;
        for (const auto& e : entries) {
            per_signal[e.signal].push_back(times[e.time]);
            ks.push_back(e.time);
        }
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

        std::vector<double> union_ts;
        union_ts.reserve(ks.size());
        for (auto k : ks) {
            union_ts.push_back(times[k]);
            ++owners[k];
        }
        unions[i] = SignalTimestamps(std::move(union_ts));
        if (is_unevenly_sampled(unions[i], rel_tol)) {
            ++out.unevenly_sampled_instances;
        }

        std::vector<SignalTimestamps> signals;
        signals.reserve(d);
        for (auto& ts : per_signal) {
            signals.emplace_back(ts);
        }
        merge(ragged, group_raggedness(signals, rel_tol));
    }
    out.unevenly_sampled = out.unevenly_sampled_instances > 0;

    if (n >= 2) {
        bool shared = std::any_of(owners.begin(), owners.end(), [](unsigned c) { return c > 1; });
        if (!shared) {
            // instances on disjoint clocks: compare only their rank structure
            out.cross_instance_rank_normalized = true;
            for (auto& u : unions) {
                std::vector<double> ranks(u.size());
                std::iota(ranks.begin(), ranks.end(), 0.0);
                u = SignalTimestamps(std::move(ranks));
            }
        }
        merge(ragged, group_raggedness(unions, rel_tol));
    }

    out.ragged_length = ragged.ragged_length;
    out.shift = ragged.shift;
    out.ragged_sampling = ragged.ragged_sampling;
    return out;
}

}  // namespace irts
