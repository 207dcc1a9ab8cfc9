#include "irts/synth.hpp"

#include "irts/error.hpp"
#include "irts/random.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_set>
#include <vector>

namespace irts {

namespace {

struct AbfInstance {
    std::vector<double> timestamps;
    std::vector<double> values;
};

double warp(std::string_view cls, double u, double gamma) {
    if (cls == "alembic") {
        return std::pow(u, gamma);
    }
    if (cls == "flask") {
        return 1.0 - std::pow(1.0 - u, 1.0 + 1.0 / gamma);
    }
    return u;
}

AbfInstance draw_instance(Rng& rng, std::string_view cls, const AbfConfig& cfg) {
    const std::size_t L = cfg.series_length;
    AbfInstance out;
    out.timestamps.resize(L);
    out.values.resize(L);

    std::vector<double> u(L);
    for (std::size_t l = 0; l < L; ++l) {
        u[l] = (static_cast<double>(l) + 0.5 + cfg.jitter * (rng.uniform() - 0.5)) / static_cast<double>(L);
        out.timestamps[l] = warp(cls, u[l], cfg.skew_strength);
        double c = 2.0 * u[l] - 1.0;
        out.values[l] = -std::sqrt(1.0 - c * c);
    }

    double mean = 0.0;
    for (double x : out.values) {
        mean += x;
    }
    mean /= static_cast<double>(L);
    double var = 0.0;
    for (double x : out.values) {
        var += (x - mean) * (x - mean);
    }
    double sd = std::sqrt(var / static_cast<double>(L));
    for (double& x : out.values) {
        x = (x - mean) / sd;
    }
    return out;
}

bool strictly_increasing(const std::vector<double>& ts) {
    for (std::size_t l = 1; l < ts.size(); ++l) {
        if (!(ts[l - 1] < ts[l])) {
            return false;
        }
    }
    return true;
}

}  // namespace

void AbfConfig::validate() const {
    if (series_length < 3) {
        throw ArgumentError("ABF series_length must be at least 3");
    }
    if (!(skew_strength > 0.0) || !std::isfinite(skew_strength)) {
        throw ArgumentError("ABF skew_strength must be positive");
    }
    if (!(jitter >= 0.0 && jitter < 1.0)) {
        throw ArgumentError("ABF jitter must lie in [0, 1)");
    }
}

IrregularDataset generate_abf(const AbfConfig& cfg) {
    cfg.validate();
    std::vector<std::string> ids;
    std::vector<AttributeMap> attributes;
    std::vector<AbfInstance> instances;
    std::unordered_set<double> used;

    for (const char* split : {"train", "test"}) {
        const std::size_t per_class = std::string_view(split) == "train" ? cfg.per_class_train : cfg.per_class_test;
        for (auto cls : kAbfClasses) {
            for (std::size_t r = 0; r < per_class; ++r) {
                const std::size_t ordinal = instances.size();
                Rng rng(cfg.seed, ordinal);
                AbfInstance inst;
                // redraw on the (vanishingly rare) float collision
                for (;;) {
                    inst = draw_instance(rng, cls, cfg);
                    bool clash = !strictly_increasing(inst.timestamps);
                    for (double t : inst.timestamps) {
                        clash = clash || used.count(t) != 0;
                    }
                    if (!clash) {
                        break;
                    }
                }
                used.insert(inst.timestamps.begin(), inst.timestamps.end());

                char id[32];
                std::snprintf(id, sizeof(id), "abf_%04zu", ordinal);
                ids.emplace_back(id);
                attributes.push_back({{kTargetKey, std::string(cls)}, {kSplitKey, std::string(split)}});
                instances.push_back(std::move(inst));
            }
        }
    }

    std::vector<double> all(used.begin(), used.end());
    auto index = TimestampIndex::build(all);
    std::vector<CooEntry> entries;
    entries.reserve(all.size());
    for (std::size_t i = 0; i < instances.size(); ++i) {
        for (std::size_t l = 0; l < instances[i].timestamps.size(); ++l) {
            entries.push_back({i, 0, index.position_of(instances[i].timestamps[l]), instances[i].values[l]});
        }
    }
    Dims dims{instances.size(), 1, index.size()};
    return IrregularDataset(SparseIrregularTensor(dims, std::move(entries)), std::move(index), std::move(ids),
                            {"x"}, std::move(attributes));
}

}  // namespace irts
