#include "irts/persist.hpp"

#include "irts/error.hpp"

#include "json.hpp"
#include <zlib.h>

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>

namespace irts {

namespace {

constexpr std::uint64_t kCanonicalNaN = 0x7FF8000000000000ULL;
constexpr char kMagic[4] = {'I', 'R', 'T', 'S'};

class Writer {
public:
    void bytes(const void* data, std::size_t size) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        buf_.insert(buf_.end(), p, p + size);
    }
    template <typename T>
    void uint(T value) {
        for (std::size_t b = 0; b < sizeof(T); ++b) {
            buf_.push_back(static_cast<std::uint8_t>(value >> (8 * b)));
        }
    }
    void f64(double value) {
        uint<std::uint64_t>(std::isnan(value) ? kCanonicalNaN : std::bit_cast<std::uint64_t>(value));
    }
    std::vector<std::uint8_t>& buffer() { return buf_; }

private:
    std::vector<std::uint8_t> buf_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    void need(std::uint64_t count, std::uint64_t width, const char* section) const {
        if (width != 0 && count > remaining() / width) {
            throw FormatError(section, "truncated");
        }
    }
    template <typename T>
    T uint(const char* section) {
        need(1, sizeof(T), section);
        T value = 0;
        for (std::size_t b = 0; b < sizeof(T); ++b) {
            value |= static_cast<T>(static_cast<T>(bytes_[pos_ + b]) << (8 * b));
        }
        pos_ += sizeof(T);
        return value;
    }
    double f64(const char* section) { return std::bit_cast<double>(uint<std::uint64_t>(section)); }
    std::span<const std::uint8_t> take(std::uint64_t count, const char* section) {
        need(count, 1, section);
        auto out = bytes_.subspan(pos_, count);
        pos_ += count;
        return out;
    }
    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    std::size_t offset = 0;
    while (offset < bytes.size()) {
        auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - offset, std::numeric_limits<uInt>::max()));
        crc = crc32(crc, bytes.data() + offset, chunk);
        offset += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

nlohmann::json metadata_of(const IrregularDataset& ds) {
    nlohmann::json attrs = nlohmann::json::array();
    for (const auto& map : ds.attributes()) {
        nlohmann::json obj = nlohmann::json::object();
        for (const auto& [key, value] : map) {
            if (const auto* s = std::get_if<std::string>(&value)) {
                obj[key] = *s;
            } else {
                obj[key] = std::get<double>(value);
            }
        }
        attrs.push_back(std::move(obj));
    }
    return {
        {"format", "irts"},
        {"instance_ids", ds.instance_ids()},
        {"signal_ids", ds.signal_ids()},
        {"static_attributes", std::move(attrs)},
        {"notes", "coordinates u64, values f64 (NaN = explicit missing), timestamps f64 seconds"},
    };
}

std::vector<std::string> string_list(const nlohmann::json& meta, const char* key, std::uint64_t expected) {
    if (!meta.contains(key) || !meta[key].is_array()) {
        throw FormatError("metadata", std::string("missing '") + key + "'");
    }
    std::vector<std::string> out;
    for (const auto& item : meta[key]) {
        if (!item.is_string()) {
            throw FormatError("metadata", std::string("non-string entry in '") + key + "'");
        }
        out.push_back(item.get<std::string>());
    }
    if (out.size() != expected) {
        throw FormatError("metadata", std::string("'") + key + "' length disagrees with header");
    }
    return out;
}

}  // namespace

std::vector<std::uint8_t> serialize(const IrregularDataset& ds) {
    const auto& dims = ds.tensor().dims();
    const auto entries = ds.tensor().entries();
    Writer w;
    w.bytes(kMagic, sizeof(kMagic));
    w.uint<std::uint16_t>(kIrtsVersion);
    w.uint<std::uint16_t>(0);
    w.uint<std::uint64_t>(dims.instances);
    w.uint<std::uint64_t>(dims.signals);
    w.uint<std::uint64_t>(dims.timestamps);
    w.uint<std::uint64_t>(entries.size());
    for (const auto& e : entries) {
        w.uint<std::uint64_t>(e.instance);
    }
    for (const auto& e : entries) {
        w.uint<std::uint64_t>(e.signal);
    }
    for (const auto& e : entries) {
        w.uint<std::uint64_t>(e.time);
    }
    for (const auto& e : entries) {
        w.f64(e.value);
    }
    for (double t : ds.timestamps().values()) {
        w.f64(t);
    }
    const std::string meta = metadata_of(ds).dump();
    w.uint<std::uint64_t>(meta.size());
    w.bytes(meta.data(), meta.size());
    w.uint<std::uint32_t>(crc32_of(w.buffer()));
    return std::move(w.buffer());
}

IrregularDataset deserialize(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    auto magic = r.take(sizeof(kMagic), "magic");
    if (!std::equal(magic.begin(), magic.end(), kMagic)) {
        throw FormatError("magic", "not an IRTS file");
    }
    auto version = r.uint<std::uint16_t>("header");
    if (version != kIrtsVersion) {
        throw FormatError("header", "unsupported version " + std::to_string(version));
    }
    if (r.uint<std::uint16_t>("header") != 0) {
        throw FormatError("header", "reserved field must be zero");
    }
    Dims dims;
    dims.instances = r.uint<std::uint64_t>("header");
    dims.signals = r.uint<std::uint64_t>("header");
    dims.timestamps = r.uint<std::uint64_t>("header");
    const auto nnz = r.uint<std::uint64_t>("header");

    std::vector<CooEntry> entries;
    r.need(nnz, 8, "instance_idx");
    entries.resize(nnz);
    for (auto& e : entries) {
        e.instance = r.uint<std::uint64_t>("instance_idx");
    }
    r.need(nnz, 8, "signal_idx");
    for (auto& e : entries) {
        e.signal = r.uint<std::uint64_t>("signal_idx");
    }
    r.need(nnz, 8, "time_idx");
    for (auto& e : entries) {
        e.time = r.uint<std::uint64_t>("time_idx");
    }
    r.need(nnz, 8, "values");
    for (auto& e : entries) {
        e.value = r.f64("values");
    }
    r.need(dims.timestamps, 8, "timestamps");
    std::vector<double> timestamps(dims.timestamps);
    for (auto& t : timestamps) {
        t = r.f64("timestamps");
    }
    const auto meta_len = r.uint<std::uint64_t>("metadata");
    auto meta_bytes = r.take(meta_len, "metadata");

    const std::size_t crc_offset = r.position();
    const auto stored_crc = r.uint<std::uint32_t>("checksum");
    if (r.remaining() != 0) {
        throw FormatError("checksum", "trailing bytes after checksum");
    }
    if (crc32_of(bytes.first(crc_offset)) != stored_crc) {
        throw IntegrityError("CRC-32 mismatch");
    }

    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(meta_bytes.begin(), meta_bytes.end());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("metadata", e.what());
    }
    if (!meta.is_object()) {
        throw FormatError("metadata", "not a JSON object");
    }
    auto instance_ids = string_list(meta, "instance_ids", dims.instances);
    auto signal_ids = string_list(meta, "signal_ids", dims.signals);

    std::vector<AttributeMap> attributes(dims.instances);
    if (meta.contains("static_attributes")) {
        const auto& attrs = meta["static_attributes"];
        if (!attrs.is_array() || attrs.size() != dims.instances) {
            throw FormatError("metadata", "'static_attributes' must hold one object per instance");
        }
        for (std::size_t i = 0; i < attrs.size(); ++i) {
            if (!attrs[i].is_object()) {
                throw FormatError("metadata", "static attribute entry is not an object");
            }
            for (const auto& [key, value] : attrs[i].items()) {
                if (value.is_string()) {
                    attributes[i][key] = value.get<std::string>();
                } else if (value.is_number()) {
                    attributes[i][key] = value.get<double>();
                } else if (value.is_null()) {
                    attributes[i][key] = std::numeric_limits<double>::quiet_NaN();
                } else {
                    throw FormatError("metadata", "attribute '" + key + "' is neither number nor string");
                }
            }
        }
    }

    for (std::size_t q = 1; q < entries.size(); ++q) {
        const auto& a = entries[q - 1];
        const auto& b = entries[q];
        if (!(std::tie(a.instance, a.signal, a.time) < std::tie(b.instance, b.signal, b.time))) {
            throw FormatError("entries", "coordinates not strictly sorted");
        }
    }
    TimestampIndex index;
    try {
        index = TimestampIndex::from_sorted(std::move(timestamps));
    } catch (const Error& e) {
        throw FormatError("timestamps", e.what());
    }
    SparseIrregularTensor tensor;
    try {
        tensor = SparseIrregularTensor(dims, std::move(entries));
    } catch (const Error& e) {
        throw FormatError("entries", e.what());
    }
    try {
        return IrregularDataset(std::move(tensor), std::move(index), std::move(instance_ids), std::move(signal_ids),
                                std::move(attributes));
    } catch (const Error& e) {
        throw FormatError("metadata", e.what());
    }
}

void save(const IrregularDataset& ds, const std::filesystem::path& path) {
    auto bytes = serialize(ds);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw DataError("write failed for '" + path.string() + "'");
    }
}

IrregularDataset load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

}  // namespace irts
