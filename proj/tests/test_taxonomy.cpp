#include "irts/error.hpp"
#include "irts/ingest.hpp"
#include "irts/taxonomy.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace irts;
using test::kNaN;

namespace {

SignalTimestamps st(std::vector<double> ts) { return SignalTimestamps(std::move(ts)); }

// One instance, two signals a and b; optional NaN at a's second observation.
IrregularDataset two_signals(std::vector<double> a, std::vector<double> b, bool nan_in_a = false) {
    std::vector<double> all(a);
    all.insert(all.end(), b.begin(), b.end());
    auto index = TimestampIndex::build(all);
    std::vector<CooEntry> entries;
    for (std::size_t q = 0; q < a.size(); ++q) {
        entries.push_back({0, 0, index.position_of(a[q]), nan_in_a && q == 1 ? kNaN : 1.0});
    }
    for (double t : b) {
        entries.push_back({0, 1, index.position_of(t), 2.0});
    }
    Dims dims{1, 2, index.size()};
    return IrregularDataset(SparseIrregularTensor(dims, entries), std::move(index), {"X"}, {"a", "b"});
}

}  // namespace

TEST(SignalTimestamps, Validation) {
    EXPECT_THROW(st({1, 1}), ArgumentError);
    EXPECT_THROW(st({2, 1}), ArgumentError);
    EXPECT_THROW(st({0, kNaN}), ArgumentError);
    EXPECT_EQ(st({0, 1, 3}).deltas(), (std::vector<double>{1, 2}));
    EXPECT_TRUE(st({5}).deltas().empty());
    EXPECT_TRUE(st({}).deltas().empty());
}

TEST(UnevenSampling, Examples) {
    EXPECT_FALSE(is_unevenly_sampled(st({0, 1, 2, 3})));
    EXPECT_TRUE(is_unevenly_sampled(st({0, 1, 3})));
    EXPECT_FALSE(is_unevenly_sampled(st({5})));
    EXPECT_FALSE(is_unevenly_sampled(st({5, 9})));
    EXPECT_FALSE(is_unevenly_sampled(st({0.1, 0.2, 0.3, 0.4})));  // rounding noise stays within tolerance
    EXPECT_TRUE(is_unevenly_sampled(st({0.1, 0.2, 0.3, 0.4}), 1e-17));
}

TEST(PartialObservation, Examples) {
    EXPECT_TRUE(is_partially_observed(two_signals({0, 1, 2}, {0, 1, 2}, true)));
    EXPECT_FALSE(is_partially_observed(two_signals({0, 1, 2}, {0, 1, 2})));
    EXPECT_FALSE(is_partially_observed(IrregularDataset{}));
}

TEST(PairRaggedness, Examples) {
    EXPECT_EQ(signal_pair_raggedness(st({1, 2}), st({2, 3})), (RaggednessFlags{false, true, false}));
    EXPECT_EQ(signal_pair_raggedness(st({0, 1}), st({0, 1, 2})), (RaggednessFlags{true, false, false}));
    EXPECT_EQ(signal_pair_raggedness(st({0, 1}), st({0, 2})), (RaggednessFlags{false, false, true}));
    EXPECT_EQ(signal_pair_raggedness(st({1, 2}), st({2, 4})), (RaggednessFlags{false, true, true}));
    EXPECT_EQ(signal_pair_raggedness(st({}), st({1})), (RaggednessFlags{true, false, false}));
    EXPECT_EQ(signal_pair_raggedness(st({3}), st({1})), (RaggednessFlags{false, true, false}));
}

// Each construction sets its own flag and none of the flags shown independent of it.
TEST(IndependenceMatrix, UnevenSampling) {
    auto p = profile(two_signals({0, 1, 3}, {0, 1, 3}));
    EXPECT_TRUE(p.unevenly_sampled);
    EXPECT_FALSE(p.partially_observed);
    EXPECT_FALSE(p.ragged_length);
    EXPECT_FALSE(p.shift);
    EXPECT_FALSE(p.ragged_sampling);
}

TEST(IndependenceMatrix, PartialObservation) {
    auto p = profile(two_signals({0, 1, 2}, {0, 1, 2}, true));
    EXPECT_TRUE(p.partially_observed);
    EXPECT_FALSE(p.unevenly_sampled);
    EXPECT_FALSE(p.ragged_length);
    EXPECT_FALSE(p.shift);
    EXPECT_FALSE(p.ragged_sampling);
}

TEST(IndependenceMatrix, RaggedLength) {
    auto p = profile(two_signals({0, 1}, {0, 1, 2}));
    EXPECT_TRUE(p.ragged_length);
    EXPECT_FALSE(p.unevenly_sampled);
    EXPECT_FALSE(p.partially_observed);
    EXPECT_FALSE(p.shift);
    EXPECT_FALSE(p.ragged_sampling);
}

TEST(IndependenceMatrix, Shift) {
    auto p = profile(two_signals({0, 1}, {1, 2}));
    EXPECT_TRUE(p.shift);
    EXPECT_FALSE(p.unevenly_sampled);
    EXPECT_FALSE(p.partially_observed);
    EXPECT_FALSE(p.ragged_length);
    EXPECT_FALSE(p.ragged_sampling);
}

TEST(IndependenceMatrix, RaggedSampling) {
    auto p = profile(two_signals({0, 1}, {0, 2}));
    EXPECT_TRUE(p.ragged_sampling);
    EXPECT_FALSE(p.unevenly_sampled);
    EXPECT_FALSE(p.partially_observed);
    EXPECT_FALSE(p.ragged_length);
    EXPECT_FALSE(p.shift);
}

TEST(Profile, RegularGridAllFalse) {
    std::vector<double> ts{0, 1, 2, 3};
    std::vector<CooEntry> entries;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t k = 0; k < 4; ++k) {
                entries.push_back({i, j, k, 1.0});
            }
        }
    }
    IrregularDataset ds(SparseIrregularTensor({3, 2, 4}, entries), TimestampIndex::build(ts), {"a", "b", "c"},
                        {"x", "y"});
    auto p = profile(ds);
    EXPECT_EQ(p.flags_string(), "US:false PO:false UL:false SH:false RS:false");
    EXPECT_FALSE(p.cross_instance_rank_normalized);
}

TEST(Profile, InterleavedSignalsAreRaggedlySampled) {
    // a at 0, 1, 3 and b at 0, 2, 3: same length, same span, different intervals
    auto p = profile(two_signals({0, 1, 3}, {0, 2, 3}));
    EXPECT_TRUE(p.ragged_sampling);
    EXPECT_FALSE(p.ragged_length);
    EXPECT_FALSE(p.shift);
}

TEST(Profile, CrossInstanceShift) {
    std::vector<double> ts{0, 1, 2};
    IrregularDataset ds(SparseIrregularTensor({2, 1, 3}, {{0, 0, 0, 1}, {0, 0, 1, 1}, {1, 0, 1, 1}, {1, 0, 2, 1}}),
                        TimestampIndex::build(ts), {"a", "b"}, {"x"});
    auto p = profile(ds);
    EXPECT_TRUE(p.shift);
    EXPECT_FALSE(p.cross_instance_rank_normalized);
}

TEST(Profile, DisjointClocksCompareRanks) {
    std::vector<double> ts{0, 1, 2, 10, 13, 17};
    IrregularDataset ds(SparseIrregularTensor({2, 1, 6}, {{0, 0, 0, 1}, {0, 0, 1, 1}, {0, 0, 2, 1}, {1, 0, 3, 1},
                                                          {1, 0, 4, 1}, {1, 0, 5, 1}}),
                        TimestampIndex::build(ts), {"a", "b"}, {"x"});
    auto p = profile(ds);
    EXPECT_TRUE(p.cross_instance_rank_normalized);
    EXPECT_EQ(p.flags_string(), "US:true PO:false UL:false SH:false RS:false");
    EXPECT_EQ(p.unevenly_sampled_instances, 1u);
}

TEST(PairRaggednessProperty, Symmetric) {
    Rng rng(51);
    auto random_ts = [&] {
        std::vector<double> ts;
        double t = static_cast<double>(rng.below(5));
        for (std::size_t q = rng.below(6); q > 0; --q) {
            ts.push_back(t);
            t += 1.0 + static_cast<double>(rng.below(3));
        }
        return st(ts);
    };
    for (int trial = 0; trial < 500; ++trial) {
        auto a = random_ts(), b = random_ts();
        ASSERT_EQ(signal_pair_raggedness(a, b), signal_pair_raggedness(b, a));
    }
}

TEST(GroupRaggednessProperty, EqualsOrOverPairs) {
    Rng rng(52);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<SignalTimestamps> group;
        for (std::size_t g = rng.below(6); g > 0; --g) {
            std::vector<double> ts;
            double t = static_cast<double>(rng.below(4));
            for (std::size_t q = rng.below(5); q > 0; --q) {
                ts.push_back(t);
                t += 1.0 + static_cast<double>(rng.below(2));
            }
            group.push_back(st(ts));
        }
        RaggednessFlags brute;
        for (std::size_t a = 0; a < group.size(); ++a) {
            for (std::size_t b = a + 1; b < group.size(); ++b) {
                auto f = signal_pair_raggedness(group[a], group[b]);
                brute.ragged_length |= f.ragged_length;
                brute.shift |= f.shift;
                brute.ragged_sampling |= f.ragged_sampling;
            }
        }
        ASSERT_EQ(group_raggedness(group), brute) << "trial " << trial;
    }
}
