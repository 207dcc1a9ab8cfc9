#pragma once

#include "irts/dataset.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace irts {

/// Timestamp cell of a long-format row: absent, numeric, or text (numeric or ISO-8601).
using TimestampCell = std::variant<std::monostate, double, std::string>;

/// One long-format row (instance, signal, timestamp, value).
///
/// Rows with both ids and a timestamp are observations; a missing `value`
/// (or NaN) becomes an explicit-missing entry. Rows without a timestamp are
/// declarations: an instance id alone declares an instance (and its extras),
/// a signal id alone declares a signal. A timestamp with both ids empty
/// declares a timestamp. `export_long` only emits declarations for
/// instances, signals or timestamps that have no observation.
struct LongRow {
    std::string instance_id;
    std::string signal_id;
    TimestampCell timestamp;
    std::optional<double> value;
    AttributeMap extras;
};

struct CsvSchema {
    std::string instance_column = "ts_id";
    std::string signal_column = "signal_id";
    std::string timestamp_column = "timestamp";
    std::string value_column = "value";
    char delimiter = ',';
    std::vector<std::string> missing_tokens = {"", "NaN", "nan"};
    /// Round timestamps to this many decimals before indexing.
    std::optional<int> quantize_decimals;
    DuplicatePolicy duplicates = DuplicatePolicy::error;

    /// Throws ArgumentError unless the four role columns are distinct.
    void validate() const;
};

/// A row source that can be iterated more than once. The callback receives the
/// row and its 1-based source line number.
class RowSource {
public:
    using Visitor = std::function<void(const LongRow&, std::size_t line)>;

    virtual ~RowSource() = default;
    virtual void for_each(const Visitor& visit) const = 0;
};

class VectorRowSource final : public RowSource {
public:
    explicit VectorRowSource(std::vector<LongRow> rows) : rows_(std::move(rows)) {}

    void for_each(const Visitor& visit) const override;
    const std::vector<LongRow>& rows() const noexcept { return rows_; }

private:
    std::vector<LongRow> rows_;
};

/// Streams rows from a delimited text file, re-reading the file on every pass.
/// The header is validated on construction (SchemaError on a missing column).
/// Columns other than the four role columns are static-attribute extras.
class CsvRowSource final : public RowSource {
public:
    CsvRowSource(std::filesystem::path path, CsvSchema schema);

    void for_each(const Visitor& visit) const override;

private:
    std::filesystem::path path_;
    CsvSchema schema_;
    std::vector<std::string> header_;
    std::size_t instance_col_ = 0;
    std::size_t signal_col_ = 0;
    std::size_t timestamp_col_ = 0;
    std::size_t value_col_ = 0;
};

CsvRowSource read_long_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

/// Converts "1.5", "1e9" or an ISO-8601 date/time to seconds. Throws DataError.
double parse_timestamp(const std::string& text);
double parse_timestamp(const TimestampCell& cell);

/// Two-pass construction: the first pass collects ids (first-appearance order),
/// the timestamp set and static attributes; the second emits one entry per row.
IrregularDataset ingest_long(const RowSource& rows, const CsvSchema& schema = {});

/// One row per stored entry, plus declaration rows where needed so that
/// `ingest_long(export_long(ds))` reproduces `ds` exactly.
std::vector<LongRow> export_long(const IrregularDataset& ds);

/// Writes `export_long(ds)` as CSV; attribute keys become extra columns (sorted).
void write_long_csv(const IrregularDataset& ds, std::ostream& out, const CsvSchema& schema = {});
void write_long_csv(const IrregularDataset& ds, const std::filesystem::path& path, const CsvSchema& schema = {});

/// Splits one delimited line, honouring double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line, char delimiter);

}  // namespace irts
