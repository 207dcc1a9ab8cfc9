#include "irts/ingest.hpp"

#include "irts/error.hpp"
#include "irts/text.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace irts {

namespace {

struct CsvField {
    std::string text;
    bool quoted = false;
};

std::vector<CsvField> split_fields(std::string_view line, char delimiter) {
    std::vector<CsvField> fields;
    CsvField current;
    bool in_quotes = false;
    for (std::size_t pos = 0; pos < line.size(); ++pos) {
        char c = line[pos];
        if (in_quotes) {
            if (c == '"') {
                if (pos + 1 < line.size() && line[pos + 1] == '"') {
                    current.text.push_back('"');
                    ++pos;
                } else {
                    in_quotes = false;
                }
            } else {
                current.text.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
            current.quoted = true;
        } else if (c == delimiter) {
            fields.push_back(std::move(current));
            current = CsvField{};
        } else {
            current.text.push_back(c);
        }
    }
    if (in_quotes) {
        throw DataError("unterminated quoted field");
    }
    fields.push_back(std::move(current));
    return fields;
}

std::string quote_field(const std::string& text, char delimiter, bool force) {
    bool needs = force || text.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string::npos;
    if (!needs) {
        return text;
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string at_line(std::size_t line, const std::string& message) {
    return "line " + std::to_string(line) + ": " + message;
}

double parse_iso8601(const std::string& text) {
    static const std::regex pattern(
        R"(^(\d{4})-(\d{2})-(\d{2})(?:[T ](\d{2}):(\d{2})(?::(\d{2})(\.\d+)?)?)?(Z|[+-]\d{2}:?\d{2})?$)");
    std::smatch m;
    if (!std::regex_match(text, m, pattern)) {
        throw DataError("unparseable timestamp '" + text + "'");
    }
    using namespace std::chrono;
    year_month_day date{year{std::stoi(m[1])}, month{static_cast<unsigned>(std::stoi(m[2]))},
                        day{static_cast<unsigned>(std::stoi(m[3]))}};
    if (!date.ok()) {
        throw DataError("invalid calendar date in '" + text + "'");
    }
    int hh = m[4].matched ? std::stoi(m[4]) : 0;
    int mm = m[5].matched ? std::stoi(m[5]) : 0;
    int ss = m[6].matched ? std::stoi(m[6]) : 0;
    if (hh > 23 || mm > 59 || ss > 60) {
        throw DataError("invalid time of day in '" + text + "'");
    }
    double fraction = m[7].matched ? std::stod("0" + m[7].str()) : 0.0;

    long offset_seconds = 0;
    if (m[8].matched && m[8].str() != "Z") {
        std::string zone = m[8].str();
        zone.erase(std::remove(zone.begin(), zone.end(), ':'), zone.end());
        long zh = std::stol(zone.substr(1, 2));
        long zm = std::stol(zone.substr(3, 2));
        offset_seconds = (zh * 3600 + zm * 60) * (zone[0] == '-' ? -1 : 1);
    }
    auto days = sys_days{date}.time_since_epoch().count();
    auto whole = static_cast<long long>(days) * 86400LL + hh * 3600LL + mm * 60LL + ss - offset_seconds;
    return static_cast<double>(whole) + fraction;
}

double quantize(double t, const std::optional<int>& decimals) {
    if (!decimals) {
        return t;
    }
    double scale = std::pow(10.0, *decimals);
    return std::round(t * scale) / scale;
}

enum class RowKind { observation, instance_declaration, signal_declaration, timestamp_declaration };

RowKind classify(const LongRow& row) {
    bool has_time = !std::holds_alternative<std::monostate>(row.timestamp);
    bool has_instance = !row.instance_id.empty();
    bool has_signal = !row.signal_id.empty();
    if (has_time && has_instance && has_signal) {
        return RowKind::observation;
    }
    if (!has_time && has_instance && !has_signal) {
        return RowKind::instance_declaration;
    }
    if (!has_time && !has_instance && has_signal) {
        return RowKind::signal_declaration;
    }
    if (has_time && !has_instance && !has_signal) {
        return RowKind::timestamp_declaration;
    }
    if (!has_time) {
        throw DataError("observation row has no timestamp");
    }
    throw DataError(has_instance ? "row has an empty signal id" : "row has an empty instance id");
}

class IdTable {
public:
    std::size_t intern(const std::string& id) {
        auto [it, inserted] = ordinals_.try_emplace(id, ids_.size());
        if (inserted) {
            ids_.push_back(id);
        }
        return it->second;
    }
    std::size_t at(const std::string& id) const { return ordinals_.at(id); }
    const std::string& id(std::size_t ordinal) const { return ids_[ordinal]; }
    std::vector<std::string> take() { return std::move(ids_); }
    std::size_t size() const noexcept { return ids_.size(); }

private:
    std::unordered_map<std::string, std::size_t> ordinals_;
    std::vector<std::string> ids_;
};

}  // namespace

void CsvSchema::validate() const {
    std::set<std::string> roles{instance_column, signal_column, timestamp_column, value_column};
    if (roles.size() != 4) {
        throw ArgumentError("instance, signal, timestamp and value columns must be distinct");
    }
}

void VectorRowSource::for_each(const Visitor& visit) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        visit(rows_[r], r + 1);
    }
}

std::vector<std::string> split_csv_line(std::string_view line, char delimiter) {
    std::vector<std::string> out;
    for (auto& f : split_fields(line, delimiter)) {
        out.push_back(std::move(f.text));
    }
    return out;
}

CsvRowSource::CsvRowSource(std::filesystem::path path, CsvSchema schema)
    : path_(std::move(path)), schema_(std::move(schema)) {
    schema_.validate();
    std::ifstream in(path_);
    if (!in) {
        throw DataError("cannot open '" + path_.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError("'" + path_.string() + "' has no header line");
    }
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) {
        line.erase(0, 3);
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    header_ = split_csv_line(line, schema_.delimiter);

    auto locate = [&](const std::string& name) {
        auto it = std::find(header_.begin(), header_.end(), name);
        if (it == header_.end()) {
            throw SchemaError("missing column '" + name + "' in '" + path_.string() + "'");
        }
        return static_cast<std::size_t>(it - header_.begin());
    };
    instance_col_ = locate(schema_.instance_column);
    signal_col_ = locate(schema_.signal_column);
    timestamp_col_ = locate(schema_.timestamp_column);
    value_col_ = locate(schema_.value_column);
}

void CsvRowSource::for_each(const Visitor& visit) const {
    std::ifstream in(path_);
    if (!in) {
        throw DataError("cannot open '" + path_.string() + "'");
    }
    const auto& missing = schema_.missing_tokens;
    std::string line;
    std::getline(in, line);  // header
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<CsvField> fields;
        try {
            fields = split_fields(line, schema_.delimiter);
        } catch (const DataError& e) {
            throw DataError(at_line(line_no, e.what()));
        }
        if (fields.size() != header_.size()) {
            throw DataError(at_line(line_no, "expected " + std::to_string(header_.size()) + " fields, found " +
                                                 std::to_string(fields.size())));
        }

        LongRow row;
        row.instance_id = fields[instance_col_].text;
        row.signal_id = fields[signal_col_].text;

        const auto& ts = fields[timestamp_col_].text;
        if (!ts.empty()) {
            try {
                row.timestamp = parse_timestamp(ts);
            } catch (const DataError& e) {
                throw DataError(at_line(line_no, e.what()));
            }
        }

        const auto& value = fields[value_col_].text;
        if (std::find(missing.begin(), missing.end(), value) == missing.end()) {
            auto x = parse_number(value);
            if (!x) {
                throw DataError(at_line(line_no, "bad value '" + value + "'"));
            }
            row.value = *x;
        }

        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (c == instance_col_ || c == signal_col_ || c == timestamp_col_ || c == value_col_) {
                continue;
            }
            const auto& f = fields[c];
            if (f.quoted) {
                row.extras[header_[c]] = f.text;
            } else if (!f.text.empty()) {
                if (auto x = parse_number(f.text)) {
                    row.extras[header_[c]] = *x;
                } else {
                    row.extras[header_[c]] = f.text;
                }
            }
        }
        visit(row, line_no);
    }
}

CsvRowSource read_long_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    return CsvRowSource(path, schema);
}

double parse_timestamp(const std::string& text) {
    if (auto x = parse_number(text)) {
        if (!std::isfinite(*x)) {
            throw DataError("timestamp must be finite, got '" + text + "'");
        }
        return *x;
    }
    return parse_iso8601(std::string(trim(text)));
}

double parse_timestamp(const TimestampCell& cell) {
    if (const auto* x = std::get_if<double>(&cell)) {
        if (!std::isfinite(*x)) {
            throw DataError("timestamp must be finite");
        }
        return *x;
    }
    if (const auto* s = std::get_if<std::string>(&cell)) {
        return parse_timestamp(*s);
    }
    throw DataError("missing timestamp");
}

IrregularDataset ingest_long(const RowSource& rows, const CsvSchema& schema) {
    schema.validate();
    IdTable instances;
    IdTable signals;
    std::unordered_set<double> seen_times;
    std::vector<double> times;
    std::vector<AttributeMap> attributes;

    auto merge_extras = [&](std::size_t i, const AttributeMap& extras, std::size_t line) {
        if (attributes.size() <= i) {
            attributes.resize(i + 1);
        }
        for (const auto& [key, value] : extras) {
            auto [it, inserted] = attributes[i].try_emplace(key, value);
            if (!inserted && !same_attribute(it->second, value)) {
                throw DataError(at_line(line, "static attribute '" + key + "' of instance '" + instances.id(i) +
                                                  "' is not constant"));
            }
        }
    };

    // pass 1: ordinals, timestamp set, static attributes
    rows.for_each([&](const LongRow& row, std::size_t line) {
        try {
            switch (classify(row)) {
                case RowKind::observation: {
                    auto i = instances.intern(row.instance_id);
                    signals.intern(row.signal_id);
                    double t = quantize(parse_timestamp(row.timestamp), schema.quantize_decimals);
                    if (seen_times.insert(t).second) {
                        times.push_back(t);
                    }
                    merge_extras(i, row.extras, line);
                    break;
                }
                case RowKind::instance_declaration:
                    merge_extras(instances.intern(row.instance_id), row.extras, line);
                    break;
                case RowKind::signal_declaration:
                    signals.intern(row.signal_id);
                    break;
                case RowKind::timestamp_declaration: {
                    double t = quantize(parse_timestamp(row.timestamp), schema.quantize_decimals);
                    if (seen_times.insert(t).second) {
                        times.push_back(t);
                    }
                    break;
                }
            }
        } catch (const DataError& e) {
            std::string what = e.what();
            throw DataError(what.rfind("line ", 0) == 0 ? what : at_line(line, what));
        }
    });

    auto index = TimestampIndex::build(times);
    attributes.resize(instances.size());

    // pass 2: one entry per observation row
    std::vector<CooEntry> entries;
    rows.for_each([&](const LongRow& row, std::size_t) {
        if (classify(row) != RowKind::observation) {
            return;
        }
        double t = quantize(parse_timestamp(row.timestamp), schema.quantize_decimals);
        double x = row.value.value_or(std::numeric_limits<double>::quiet_NaN());
        entries.push_back({instances.at(row.instance_id), signals.at(row.signal_id), index.position_of(t), x});
    });

    Dims dims{instances.size(), signals.size(), index.size()};
    SparseIrregularTensor tensor(dims, std::move(entries), schema.duplicates);
    return IrregularDataset(std::move(tensor), std::move(index), instances.take(), signals.take(),
                            std::move(attributes));
}

std::vector<LongRow> export_long(const IrregularDataset& ds) {
    std::vector<LongRow> rows;
    const auto& tensor = ds.tensor();
    const auto times = ds.timestamps().values();

    std::vector<std::uint64_t> signal_order;
    std::vector<bool> signal_seen(ds.n_signals(), false);
    std::vector<bool> time_used(ds.n_timestamps(), false);
    for (const auto& e : tensor.entries()) {
        if (!signal_seen[e.signal]) {
            signal_seen[e.signal] = true;
            signal_order.push_back(e.signal);
        }
        time_used[e.time] = true;
    }

    bool natural_order = signal_order.size() == ds.n_signals();
    for (std::size_t j = 0; natural_order && j < signal_order.size(); ++j) {
        natural_order = signal_order[j] == j;
    }
    if (!natural_order) {
        for (const auto& id : ds.signal_ids()) {
            rows.push_back(LongRow{"", id, std::monostate{}, std::nullopt, {}});
        }
    }
    for (std::size_t k = 0; k < time_used.size(); ++k) {
        if (!time_used[k]) {
            rows.push_back(LongRow{"", "", times[k], std::nullopt, {}});
        }
    }

    for (std::size_t i = 0; i < ds.n_instances(); ++i) {
        const auto& id = ds.instance_ids()[i];
        const auto& attrs = ds.attributes()[i];
        auto entries = tensor.instance_entries(i);
        if (entries.empty()) {
            rows.push_back(LongRow{id, "", std::monostate{}, std::nullopt, attrs});
            continue;
        }
        for (const auto& e : entries) {
            std::optional<double> value;
            if (!std::isnan(e.value)) {
                value = e.value;
            }
            rows.push_back(LongRow{id, ds.signal_ids()[e.signal], times[e.time], value, attrs});
        }
    }
    return rows;
}

void write_long_csv(const IrregularDataset& ds, std::ostream& out, const CsvSchema& schema) {
    schema.validate();
    std::set<std::string> keys;
    for (const auto& attrs : ds.attributes()) {
        for (const auto& [key, _] : attrs) {
            keys.insert(key);
        }
    }
    for (const auto& role : {schema.instance_column, schema.signal_column, schema.timestamp_column,
                             schema.value_column}) {
        if (keys.count(role) != 0) {
            throw ArgumentError("attribute key '" + role + "' collides with a role column");
        }
    }

    const char delim = schema.delimiter;
    out << quote_field(schema.instance_column, delim, false) << delim << quote_field(schema.signal_column, delim, false)
        << delim << quote_field(schema.timestamp_column, delim, false) << delim
        << quote_field(schema.value_column, delim, false);
    for (const auto& key : keys) {
        out << delim << quote_field(key, delim, false);
    }
    out << '\n';

    for (const auto& row : export_long(ds)) {
        out << quote_field(row.instance_id, delim, false) << delim << quote_field(row.signal_id, delim, false) << delim;
        if (const auto* t = std::get_if<double>(&row.timestamp)) {
            out << format_number(*t);
        }
        out << delim;
        bool is_observation = !std::holds_alternative<std::monostate>(row.timestamp) && !row.instance_id.empty();
        if (row.value) {
            out << format_number(*row.value);
        } else if (is_observation) {
            out << "NaN";
        }
        for (const auto& key : keys) {
            out << delim;
            auto it = row.extras.find(key);
            if (it == row.extras.end()) {
                continue;
            }
            if (const auto* s = std::get_if<std::string>(&it->second)) {
                out << quote_field(*s, delim, true);
            } else {
                out << format_number(std::get<double>(it->second));
            }
        }
        out << '\n';
    }
}

void write_long_csv(const IrregularDataset& ds, const std::filesystem::path& path, const CsvSchema& schema) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    write_long_csv(ds, out, schema);
}

}  // namespace irts
