#include "irts/error.hpp"
#include "irts/ingest.hpp"
#include "irts/taxonomy.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace irts;
using test::kNaN;

namespace {

LongRow row(std::string i, std::string j, double t, std::optional<double> x, AttributeMap extras = {}) {
    return LongRow{std::move(i), std::move(j), t, x, std::move(extras)};
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

IrregularDataset through_csv(const IrregularDataset& ds, const test::TempDir& dir) {
    auto path = dir / "roundtrip.csv";
    write_long_csv(ds, path);
    return ingest_long(read_long_csv(path));
}

}  // namespace

TEST(Ingest, TwoPassHandTrace) {
    VectorRowSource rows({row("A", "s1", 0.0, 1.0), row("A", "s1", 2.0, 3.0), row("B", "s1", 2.0, 7.0)});
    auto ds = ingest_long(rows);
    EXPECT_EQ(ds.n_instances(), 2u);
    EXPECT_EQ(ds.n_signals(), 1u);
    ASSERT_EQ(ds.n_timestamps(), 2u);
    EXPECT_EQ(ds.timestamps().timestamp_of(0), 0.0);
    EXPECT_EQ(ds.timestamps().timestamp_of(1), 2.0);
    std::vector<CooEntry> expected{{0, 0, 0, 1.0}, {0, 0, 1, 3.0}, {1, 0, 1, 7.0}};
    auto got = ds.tensor().entries();
    ASSERT_EQ(got.size(), expected.size());
    for (std::size_t q = 0; q < got.size(); ++q) {
        EXPECT_TRUE(got[q].same_as(expected[q]));
    }
}

TEST(Ingest, FirstAppearanceOrdinals) {
    VectorRowSource rows({row("z", "q", 1, 1.0), row("a", "p", 0, 1.0), row("z", "p", 2, 1.0)});
    auto ds = ingest_long(rows);
    EXPECT_EQ(ds.instance_ids(), (std::vector<std::string>{"z", "a"}));
    EXPECT_EQ(ds.signal_ids(), (std::vector<std::string>{"q", "p"}));
}

TEST(Ingest, MissingValueIsExplicitNaN) {
    VectorRowSource rows({row("A", "s1", 2.0, std::nullopt), row("A", "s1", 3.0, kNaN)});
    auto ds = ingest_long(rows);
    EXPECT_EQ(ds.nnz(), 2u);
    EXPECT_EQ(ds.get_value(0, 0, 0).state(), Observation::State::explicit_missing);
    EXPECT_EQ(ds.get_value(0, 0, 1).state(), Observation::State::explicit_missing);
}

TEST(Ingest, EmptySource) {
    auto ds = ingest_long(VectorRowSource({}));
    EXPECT_EQ(ds.n_instances(), 0u);
    EXPECT_EQ(ds.n_signals(), 0u);
    EXPECT_EQ(ds.n_timestamps(), 0u);
    EXPECT_TRUE(export_long(ds).empty());
}

TEST(Ingest, DuplicatePolicy) {
    VectorRowSource rows({row("A", "s", 1, 1.0), row("A", "s", 1, 2.0)});
    EXPECT_THROW(ingest_long(rows), DataError);
    CsvSchema schema;
    schema.duplicates = DuplicatePolicy::last_wins;
    auto ds = ingest_long(rows, schema);
    EXPECT_EQ(ds.nnz(), 1u);
    EXPECT_EQ(ds.get_value(0, 0, 0).value(), 2.0);
}

TEST(Ingest, StaticAttributesMustBeConstant) {
    VectorRowSource ok({row("A", "s", 1, 1.0, {{"target", std::string("c")}}),
                        row("A", "s", 2, 1.0, {{"target", std::string("c")}})});
    auto ds = ingest_long(ok);
    ASSERT_NE(ds.attribute(0, "target"), nullptr);
    EXPECT_EQ(std::get<std::string>(*ds.attribute(0, "target")), "c");

    VectorRowSource bad({row("A", "s", 1, 1.0, {{"target", std::string("c")}}),
                         row("A", "s", 2, 1.0, {{"target", std::string("d")}})});
    try {
        ingest_long(bad);
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(Ingest, Quantization) {
    VectorRowSource rows({row("A", "s", 1.00000001, 1.0), row("B", "s", 0.99999999, 2.0)});
    EXPECT_EQ(ingest_long(rows).n_timestamps(), 2u);
    CsvSchema schema;
    schema.quantize_decimals = 3;
    EXPECT_EQ(ingest_long(rows, schema).n_timestamps(), 1u);
}

TEST(Ingest, SchemaRolesDistinct) {
    CsvSchema schema;
    schema.value_column = "timestamp";
    EXPECT_THROW(schema.validate(), ArgumentError);
}

TEST(ParseTimestamp, Iso8601) {
    EXPECT_EQ(parse_timestamp(std::string("2007-04-01T00:00:00Z")), 1175385600.0);
    EXPECT_EQ(parse_timestamp(std::string("1970-01-01T00:00:00Z")), 0.0);
    EXPECT_EQ(parse_timestamp(std::string("2007-04-01T02:00:00+02:00")), 1175385600.0);
    EXPECT_EQ(parse_timestamp(std::string("2007-03-31T19:00:00-05:00")), 1175385600.0);
    EXPECT_EQ(parse_timestamp(std::string("2000-02-29")), 951782400.0);
    EXPECT_DOUBLE_EQ(parse_timestamp(std::string("2007-04-01T00:00:00.25Z")), 1175385600.25);
    EXPECT_EQ(parse_timestamp(std::string("12.5")), 12.5);
    EXPECT_THROW(parse_timestamp(std::string("2007-02-30")), DataError);
    EXPECT_THROW(parse_timestamp(std::string("yesterday")), DataError);
    EXPECT_THROW(parse_timestamp(std::string("inf")), DataError);
}

TEST(ParseTimestamp, MatchesCivilDayCount) {
    // days-from-civil, independent of the chrono calendar
    auto days_from_civil = [](long y, unsigned m, unsigned d) {
        y -= m <= 2;
        const long era = (y >= 0 ? y : y - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
        const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return era * 146097 + static_cast<long>(doe) - 719468;
    };
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        long y = 1900 + static_cast<long>(rng.below(200));
        unsigned m = 1 + static_cast<unsigned>(rng.below(12));
        unsigned d = 1 + static_cast<unsigned>(rng.below(28));
        unsigned hh = static_cast<unsigned>(rng.below(24)), mi = static_cast<unsigned>(rng.below(60));
        char text[64];
        std::snprintf(text, sizeof text, "%04ld-%02u-%02uT%02u:%02u:07Z", y, m, d, hh, mi);
        double expected = static_cast<double>(days_from_civil(y, m, d) * 86400 + hh * 3600 + mi * 60 + 7);
        ASSERT_EQ(parse_timestamp(std::string(text)), expected) << text;
    }
}

TEST(Csv, ReadsHeaderAndRows) {
    test::TempDir dir;
    write_file(dir / "a.csv", "ts_id,signal_id,timestamp,value\nA,x,1.5,2\nA,x,2.5,\n");
    auto ds = ingest_long(read_long_csv(dir / "a.csv"));
    EXPECT_EQ(ds.nnz(), 2u);
    EXPECT_EQ(ds.get_value(0, 0, 1).state(), Observation::State::explicit_missing);
}

TEST(Csv, CustomColumnsAndDelimiter) {
    test::TempDir dir;
    write_file(dir / "a.csv", "\xEF\xBB\xBFwhen;who;what;reading;label\r\n"
                              "2007-04-01T00:00:00Z;p1;hr;70;\"sick\"\r\n"
                              "2007-04-01T00:01:00Z;p1;hr;-;\"sick\"\r\n");
    CsvSchema schema;
    schema.instance_column = "who";
    schema.signal_column = "what";
    schema.timestamp_column = "when";
    schema.value_column = "reading";
    schema.delimiter = ';';
    schema.missing_tokens = {"-"};
    auto ds = ingest_long(read_long_csv(dir / "a.csv", schema), schema);
    EXPECT_EQ(ds.timestamps().timestamp_of(0), 1175385600.0);
    EXPECT_EQ(ds.get_value(0, 0, 1).state(), Observation::State::explicit_missing);
    EXPECT_EQ(std::get<std::string>(*ds.attribute(0, "label")), "sick");
}

TEST(Csv, MissingColumnIsSchemaError) {
    test::TempDir dir;
    write_file(dir / "a.csv", "ts_id,signal_id,value\nA,x,1\n");
    EXPECT_THROW(read_long_csv(dir / "a.csv"), SchemaError);
}

TEST(Csv, BadValueNamesLine) {
    test::TempDir dir;
    write_file(dir / "a.csv", "ts_id,signal_id,timestamp,value\nA,x,1,2\nA,x,2,abc\n");
    try {
        ingest_long(read_long_csv(dir / "a.csv"));
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(Csv, WrongFieldCountNamesLine) {
    test::TempDir dir;
    write_file(dir / "a.csv", "ts_id,signal_id,timestamp,value\nA,x,1\n");
    try {
        ingest_long(read_long_csv(dir / "a.csv"));
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
}

TEST(Csv, SplitLineHonoursQuotes) {
    EXPECT_EQ(split_csv_line("a,\"b,c\",\"d\"\"e\",", ','),
              (std::vector<std::string>{"a", "b,c", "d\"e", ""}));
    EXPECT_THROW(split_csv_line("a,\"b", ','), DataError);
}

TEST(Export, OneRowPerEntry) {
    VectorRowSource rows({row("A", "s1", 0.0, 1.0), row("A", "s1", 2.0, 3.0), row("B", "s1", 2.0, kNaN)});
    auto ds = ingest_long(rows);
    auto out = export_long(ds);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[2].instance_id, "B");
    EXPECT_FALSE(out[2].value.has_value());
    std::ostringstream csv;
    write_long_csv(ds, csv);
    EXPECT_EQ(csv.str(), "ts_id,signal_id,timestamp,value\nA,s1,0,1\nA,s1,2,3\nB,s1,2,NaN\n");
}

TEST(ExportProperty, IngestInvertsExport) {
    Rng rng(31);
    test::TempDir dir;
    for (int trial = 0; trial < 200; ++trial) {
        auto ds = test::random_dataset(rng);
        ASSERT_EQ(ingest_long(VectorRowSource(export_long(ds))), ds) << "trial " << trial;
        auto back = through_csv(ds, dir);
        ASSERT_EQ(back, ds) << "trial " << trial;
        ASSERT_EQ(profile(back).flags_string(), profile(ds).flags_string());
    }
}

TEST(IngestProperty, IndexIsBuildOverRowTimestamps) {
    Rng rng(32);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<LongRow> rows;
        std::vector<double> all;
        const auto count = rng.below(30);
        for (std::size_t q = 0; q < count; ++q) {
            double t = test::random_timestamp(rng);
            all.push_back(t);
            rows.push_back(row("i" + std::to_string(rng.below(4)), "s" + std::to_string(q), t, 1.0));
        }
        auto ds = ingest_long(VectorRowSource(rows));
        ASSERT_EQ(ds.timestamps(), TimestampIndex::build(all));
        ASSERT_EQ(ds.nnz(), rows.size());
    }
}
