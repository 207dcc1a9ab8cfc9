#include "irts/dataset.hpp"

#include "irts/error.hpp"
#include "irts/text.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <unordered_set>

namespace irts {

namespace {

auto coordinate(const CooEntry& e) { return std::tie(e.instance, e.signal, e.time); }

std::string coord_string(const CooEntry& e) {
    return "(" + std::to_string(e.instance) + ", " + std::to_string(e.signal) + ", " + std::to_string(e.time) + ")";
}

void require_unique(const std::vector<std::string>& ids, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& id : ids) {
        if (!seen.insert(id).second) {
            throw DataError(std::string("duplicate ") + what + " id '" + id + "'");
        }
    }
}

}  // namespace

bool CooEntry::same_as(const CooEntry& other) const noexcept {
    if (coordinate(*this) != coordinate(other)) {
        return false;
    }
    if (std::isnan(value) || std::isnan(other.value)) {
        return std::isnan(value) && std::isnan(other.value);
    }
    return value == other.value;
}

SparseIrregularTensor::SparseIrregularTensor(Dims dims, std::vector<CooEntry> entries, DuplicatePolicy policy)
    : dims_(dims), entries_(std::move(entries)) {
    for (const auto& e : entries_) {
        if (e.instance >= dims_.instances || e.signal >= dims_.signals || e.time >= dims_.timestamps) {
            throw IndexError("entry " + coord_string(e) + " outside tensor bounds");
        }
    }
    // stable so that "last wins" means last in input order
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const CooEntry& a, const CooEntry& b) { return coordinate(a) < coordinate(b); });

    std::size_t out = 0;
    for (std::size_t in = 0; in < entries_.size(); ++in) {
        if (out > 0 && coordinate(entries_[out - 1]) == coordinate(entries_[in])) {
            if (policy == DuplicatePolicy::error) {
                throw DataError("duplicate entry at " + coord_string(entries_[in]));
            }
            entries_[out - 1] = entries_[in];
            continue;
        }
        entries_[out++] = entries_[in];
    }
    entries_.resize(out);

    instance_offsets_.assign(dims_.instances + 1, 0);
    for (const auto& e : entries_) {
        ++instance_offsets_[e.instance + 1];
    }
    for (std::size_t i = 0; i < dims_.instances; ++i) {
        instance_offsets_[i + 1] += instance_offsets_[i];
    }
}

std::span<const CooEntry> SparseIrregularTensor::instance_entries(std::uint64_t i) const {
    if (i >= dims_.instances) {
        throw IndexError("instance " + std::to_string(i) + " out of range");
    }
    return std::span<const CooEntry>(entries_).subspan(instance_offsets_[i],
                                                       instance_offsets_[i + 1] - instance_offsets_[i]);
}

const CooEntry* SparseIrregularTensor::find(std::uint64_t i, std::uint64_t j, std::uint64_t k) const {
    CooEntry key{i, j, k, 0.0};
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const CooEntry& a, const CooEntry& b) { return coordinate(a) < coordinate(b); });
    if (it == entries_.end() || coordinate(*it) != coordinate(key)) {
        return nullptr;
    }
    return &*it;
}

bool SparseIrregularTensor::operator==(const SparseIrregularTensor& other) const {
    return dims_ == other.dims_ &&
           std::equal(entries_.begin(), entries_.end(), other.entries_.begin(), other.entries_.end(),
                      [](const CooEntry& a, const CooEntry& b) { return a.same_as(b); });
}

std::string attribute_to_string(const AttributeValue& value) {
    if (const auto* s = std::get_if<std::string>(&value)) {
        return *s;
    }
    return format_number(std::get<double>(value));
}

bool same_attribute(const AttributeValue& a, const AttributeValue& b) noexcept {
    const auto* x = std::get_if<double>(&a);
    const auto* y = std::get_if<double>(&b);
    if (x && y) {
        return *x == *y || (std::isnan(*x) && std::isnan(*y));
    }
    return a == b;
}

bool same_attributes(const AttributeMap& a, const AttributeMap& b) noexcept {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const auto& p, const auto& q) {
        return p.first == q.first && same_attribute(p.second, q.second);
    });
}

IrregularDataset::IrregularDataset(SparseIrregularTensor tensor, TimestampIndex timestamps,
                                   std::vector<std::string> instance_ids, std::vector<std::string> signal_ids,
                                   std::vector<AttributeMap> attributes)
    : tensor_(std::move(tensor)),
      timestamps_(std::move(timestamps)),
      instance_ids_(std::move(instance_ids)),
      signal_ids_(std::move(signal_ids)),
      attributes_(std::move(attributes)) {
    const Dims& dims = tensor_.dims();
    if (dims.instances != instance_ids_.size() || dims.signals != signal_ids_.size() ||
        dims.timestamps != timestamps_.size()) {
        throw DataError("tensor dimensions do not match ids/timestamps");
    }
    require_unique(instance_ids_, "instance");
    require_unique(signal_ids_, "signal");
    if (attributes_.empty()) {
        attributes_.resize(instance_ids_.size());
    }
    if (attributes_.size() != instance_ids_.size()) {
        throw DataError("static attributes must have one map per instance");
    }
    for (const auto& attrs : attributes_) {
        auto split = attrs.find(kSplitKey);
        if (split == attrs.end()) {
            continue;
        }
        const auto* s = std::get_if<std::string>(&split->second);
        if (s == nullptr || (*s != "train" && *s != "test")) {
            throw DataError("split attribute must be \"train\" or \"test\"");
        }
    }
}

void IrregularDataset::check_instance(std::uint64_t i) const {
    if (i >= n_instances()) {
        throw IndexError("instance " + std::to_string(i) + " out of range (n=" + std::to_string(n_instances()) + ")");
    }
}

void IrregularDataset::check_signal(std::uint64_t j) const {
    if (j >= n_signals()) {
        throw IndexError("signal " + std::to_string(j) + " out of range (d=" + std::to_string(n_signals()) + ")");
    }
}

Observation IrregularDataset::get_value(std::uint64_t i, std::uint64_t j, std::uint64_t k) const {
    check_instance(i);
    check_signal(j);
    if (k >= n_timestamps()) {
        throw IndexError("time position " + std::to_string(k) + " out of range");
    }
    const CooEntry* e = tensor_.find(i, j, k);
    if (e == nullptr) {
        return Observation::implicit();
    }
    if (std::isnan(e->value)) {
        return Observation::explicit_missing();
    }
    return Observation::observed(e->value);
}

std::vector<std::uint64_t> IrregularDataset::observed_positions(std::uint64_t i,
                                                                std::optional<std::uint64_t> j) const {
    check_instance(i);
    if (j) {
        check_signal(*j);
    }
    std::vector<std::uint64_t> ks;
    for (const auto& e : tensor_.instance_entries(i)) {
        if (!j || e.signal == *j) {
            ks.push_back(e.time);
        }
    }
    if (!j) {
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    }
    return ks;
}

std::vector<double> IrregularDataset::observed_timestamps(std::uint64_t i, std::optional<std::uint64_t> j) const {
    auto ks = observed_positions(i, j);
    std::vector<double> ts(ks.size());
    std::transform(ks.begin(), ks.end(), ts.begin(), [&](std::uint64_t k) { return timestamps_.values()[k]; });
    return ts;
}

IrregularDataset IrregularDataset::slice_time_range(double t_min, double t_max) const {
    if (!(t_min <= t_max)) {
        throw ArgumentError("slice_time_range requires t_min <= t_max");
    }
    auto [first, last] = timestamps_.range_of(t_min, t_max);
    auto all = timestamps_.values();
    auto index = TimestampIndex::from_sorted(std::vector<double>(all.begin() + first, all.begin() + last));

    std::vector<CooEntry> kept;
    for (const auto& e : tensor_.entries()) {
        if (e.time >= first && e.time < last) {
            kept.push_back({e.instance, e.signal, e.time - first, e.value});
        }
    }
    Dims dims = tensor_.dims();
    dims.timestamps = index.size();
    return IrregularDataset(SparseIrregularTensor(dims, std::move(kept)), std::move(index), instance_ids_,
                            signal_ids_, attributes_);
}

const AttributeValue* IrregularDataset::attribute(std::uint64_t i, const std::string& key) const {
    check_instance(i);
    auto it = attributes_[i].find(key);
    return it == attributes_[i].end() ? nullptr : &it->second;
}

bool IrregularDataset::operator==(const IrregularDataset& other) const {
    return tensor_ == other.tensor_ && timestamps_ == other.timestamps_ && instance_ids_ == other.instance_ids_ &&
           signal_ids_ == other.signal_ids_ &&
           std::equal(attributes_.begin(), attributes_.end(), other.attributes_.begin(), other.attributes_.end(),
                      same_attributes);
}

}  // namespace irts
