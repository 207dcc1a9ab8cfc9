#include "irts/cli.hpp"

#include "irts/baseline.hpp"
#include "irts/bench.hpp"
#include "irts/densify.hpp"
#include "irts/error.hpp"
#include "irts/ingest.hpp"
#include "irts/persist.hpp"
#include "irts/stats.hpp"
#include "irts/synth.hpp"
#include "irts/taxonomy.hpp"
#include "irts/text.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>

namespace irts {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GlobalOptions {
    bool quiet = false;
    std::optional<std::uint64_t> seed;
    double tol = kDefaultRelTol;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A JSON number, or null for NaN and infinities.
json number_or_null(double x) {
    return std::isfinite(x) ? json(x) : json(nullptr);
}

double sparsity(const IrregularDataset& ds) {
    const double cells = static_cast<double>(ds.n_instances()) * static_cast<double>(ds.n_signals()) *
                         static_cast<double>(ds.n_timestamps());
    return cells == 0.0 ? 0.0 : 1.0 - static_cast<double>(ds.nnz()) / cells;
}

void write_row(std::ostream& os, const double* row, std::size_t count) {
    for (std::size_t c = 0; c < count; ++c) {
        os << (c ? "," : "") << format_number(row[c]);
    }
    os << '\n';
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path);
    if (!os) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    return os;
}

// One n x T matrix per signal, named signal_<j>.csv, plus the slot timestamps.
void write_dense_min(const DenseView& view, const fs::path& dir) {
    for (std::size_t j = 0; j < view.d; ++j) {
        auto os = open_output(dir / ("signal_" + std::to_string(j) + ".csv"));
        for (std::size_t i = 0; i < view.n; ++i) {
            write_row(os, view.values.data() + (i * view.d + j) * view.T, view.T);
        }
    }
    auto ts = open_output(dir / "timestamps.csv");
    for (std::size_t i = 0; i < view.n; ++i) {
        write_row(ts, view.slot_timestamps.data() + i * view.T, view.T);
    }
}

void write_dense_full(const FullDenseTensor& full, const IrregularDataset& ds, const fs::path& dir) {
    for (std::size_t j = 0; j < full.d; ++j) {
        auto os = open_output(dir / ("signal_" + std::to_string(j) + ".csv"));
        for (std::size_t i = 0; i < full.n; ++i) {
            write_row(os, full.values.data() + (i * full.d + j) * full.T, full.T);
        }
    }
    auto ts = open_output(dir / "timestamps.csv");
    write_row(ts, ds.timestamps().values().data(), ds.n_timestamps());
}

LabeledDenseSet split_or_fail(const LabeledDenseSet& all, const std::string& name) {
    auto part = all.subset(name);
    if (part.size() == 0) {
        throw DataError("no instances in split '" + name + "'");
    }
    return part;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Irregular time series datasets: ingest, inspect, densify, classify.", "irts"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_flag("-q,--quiet", global.quiet, "Suppress progress messages");
    app.add_option("--seed", global.seed, "Seed for randomized commands");
    app.add_option("--tol", global.tol, "Relative tolerance for interval comparisons")->check(CLI::PositiveNumber);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Convert a long-format CSV into an .irts file");
    std::string csv_path, ingest_out, dup_policy = "error";
    std::vector<std::string> missing_tokens;
    std::optional<int> quantize;
    std::string delimiter = ",";
    CsvSchema schema;
    ingest->add_option("--csv", csv_path, "Input CSV")->required();
    ingest->add_option("--out", ingest_out, "Output .irts file")->required();
    ingest->add_option("--id-col", schema.instance_column, "Instance id column")->capture_default_str();
    ingest->add_option("--signal-col", schema.signal_column, "Signal id column")->capture_default_str();
    ingest->add_option("--ts-col", schema.timestamp_column, "Timestamp column")->capture_default_str();
    ingest->add_option("--value-col", schema.value_column, "Value column")->capture_default_str();
    ingest->add_option("--delimiter", delimiter, "Field delimiter (one character)")->capture_default_str();
    ingest->add_option("--missing-token", missing_tokens, "Token read as a missing value (repeatable)");
    ingest->add_option("--dup-policy", dup_policy, "Duplicate coordinates")
        ->check(CLI::IsMember({"error", "last_wins"}))
        ->capture_default_str();
    ingest->add_option("--quantize", quantize, "Round timestamps to this many decimals")->check(CLI::Range(0, 15));

    // info / stats / detect
    std::string ds_path;
    bool as_json = false;
    bool as_csv = false;
    auto* info = app.add_subcommand("info", "Dimensions, stored entries and sparsity");
    info->add_option("dataset", ds_path, "Dataset (.irts)")->required();
    info->add_flag("--json", as_json, "Machine-readable output");

    auto* stats = app.add_subcommand("stats", "Dataset statistics");
    stats->add_option("dataset", ds_path, "Dataset (.irts)")->required();
    stats->add_flag("--csv", as_csv, "One CSV header and row");
    stats->add_flag("--json", as_json, "Machine-readable output");

    auto* detect = app.add_subcommand("detect", "Irregularity profile");
    detect->add_option("dataset", ds_path, "Dataset (.irts)")->required();
    detect->add_flag("--json", as_json, "Machine-readable output");

    // densify
    auto* densify = app.add_subcommand("densify", "Write dense matrices as CSV files");
    std::string dense_dir;
    bool full = false;
    std::uint64_t max_cells = 100'000'000;
    densify->add_option("dataset", ds_path, "Dataset (.irts)")->required();
    densify->add_option("--out", dense_dir, "Output directory")->required();
    densify->add_flag("--full", full, "Use global time positions instead of per-instance ranks");
    densify->add_option("--max-cells", max_cells, "Cell limit for --full")->capture_default_str();

    // export
    auto* exporter = app.add_subcommand("export", "Write the dataset as long-format CSV");
    std::string export_out;
    exporter->add_option("dataset", ds_path, "Dataset (.irts)")->required();
    exporter->add_option("--out", export_out, "Output CSV")->required();

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    synth->require_subcommand(1);
    auto* abf = synth->add_subcommand("abf", "Alembics-Bowls-Flasks");
    AbfConfig abf_cfg;
    std::string synth_out;
    abf->add_option("--out", synth_out, "Output .irts file")->required();
    abf->add_option("--gamma", abf_cfg.skew_strength, "Sampling skew strength")->capture_default_str();
    abf->add_option("--train-per-class", abf_cfg.per_class_train)->capture_default_str();
    abf->add_option("--test-per-class", abf_cfg.per_class_test)->capture_default_str();
    abf->add_option("--length", abf_cfg.series_length)->capture_default_str();
    abf->add_option("--jitter", abf_cfg.jitter)->capture_default_str();

    // classify
    auto* classify = app.add_subcommand("classify", "Baseline classifiers; prints macro-F1 on the test split");
    classify->require_subcommand(1);
    std::string train_split = "train", test_split = "test";
    std::size_t k = 1, band = 10;
    auto* knn = classify->add_subcommand("knn", "k-nearest neighbours under banded DTW");
    knn->add_option("dataset", ds_path, "Dataset (.irts)")->required();
    knn->add_option("--train-split", train_split)->capture_default_str();
    knn->add_option("--test-split", test_split)->capture_default_str();
    knn->add_option("--k", k)->check(CLI::PositiveNumber)->capture_default_str();
    knn->add_option("--band", band)->capture_default_str();
    auto* skew = classify->add_subcommand("skew", "Threshold rule on sampling-interval skewness");
    skew->add_option("dataset", ds_path, "Dataset (.irts)")->required();
    skew->add_option("--train-split", train_split)->capture_default_str();
    skew->add_option("--test-split", test_split)->capture_default_str();

    // bench
    auto* bench = app.add_subcommand("bench", "Load and conversion timings, memory footprints");
    std::size_t reps = 3;
    bench->add_option("dataset", ds_path, "Dataset (.irts)")->required();
    bench->add_option("--reps", reps, "Repetitions per timing (median reported)")->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_flag("--json", as_json, "Machine-readable output");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "irts: " << e.what() << "\nRun with --help for usage.\n";
        return kExitUsage;
    }

    auto note = [&](const std::string& msg) {
        if (!global.quiet) {
            err << msg << '\n';
        }
    };

    try {
        if (*ingest) {
            if (delimiter.size() != 1) {
                throw UsageError("--delimiter must be a single character");
            }
            schema.delimiter = delimiter[0];
            if (!missing_tokens.empty()) {
                schema.missing_tokens = missing_tokens;
            }
            schema.quantize_decimals = quantize;
            schema.duplicates = dup_policy == "last_wins" ? DuplicatePolicy::last_wins : DuplicatePolicy::error;
            schema.validate();
            auto ds = ingest_long(read_long_csv(csv_path, schema), schema);
            save(ds, ingest_out);
            note("wrote " + ingest_out + " (" + std::to_string(ds.nnz()) + " entries)");
        } else if (*info) {
            auto ds = load(ds_path);
            if (as_json) {
                out << json{{"instances", ds.n_instances()},
                            {"signals", ds.n_signals()},
                            {"timestamps", ds.n_timestamps()},
                            {"nnz", ds.nnz()},
                            {"max_length", max_instance_length(ds)},
                            {"sparsity", sparsity(ds)}}
                           .dump(2)
                    << '\n';
            } else {
                out << "n=" << ds.n_instances() << " d=" << ds.n_signals() << " T_global=" << ds.n_timestamps()
                    << " T_max=" << max_instance_length(ds) << '\n'
                    << "nnz=" << ds.nnz() << " sparsity=" << format_number(sparsity(ds)) << '\n';
            }
        } else if (*stats) {
            auto s = dataset_summary(load(ds_path));
            if (as_json) {
                json j{{"n_instances", s.n_instances},
                       {"n_signals", s.n_signals},
                       {"max_obs", s.max_obs},
                       {"missing_ratio", number_or_null(s.missing_ratio)},
                       {"sampling_cv", number_or_null(s.sampling_cv)}};
                j["n_classes"] = s.n_classes ? json(*s.n_classes) : json(nullptr);
                j["class_unbalance"] = s.class_unbalance ? number_or_null(*s.class_unbalance) : json(nullptr);
                out << j.dump(2) << '\n';
            } else if (as_csv) {
                out << DatasetStats::csv_header() << '\n' << s.csv_row() << '\n';
            } else {
                out << std::left << std::setw(16) << "instances" << s.n_instances << '\n'
                    << std::setw(16) << "signals" << s.n_signals << '\n'
                    << std::setw(16) << "max_obs" << s.max_obs << '\n'
                    << std::setw(16) << "classes" << (s.n_classes ? std::to_string(*s.n_classes) : "-") << '\n'
                    << std::setw(16) << "class_unbalance"
                    << (s.class_unbalance ? format_number(*s.class_unbalance) : "-") << '\n'
                    << std::setw(16) << "missing_ratio" << format_number(s.missing_ratio) << '\n'
                    << std::setw(16) << "sampling_cv" << format_number(s.sampling_cv) << '\n';
            }
        } else if (*detect) {
            auto p = profile(load(ds_path), global.tol);
            if (as_json) {
                out << json{{"US", p.unevenly_sampled},
                            {"PO", p.partially_observed},
                            {"UL", p.ragged_length},
                            {"SH", p.shift},
                            {"RS", p.ragged_sampling},
                            {"unevenly_sampled_instances", p.unevenly_sampled_instances},
                            {"explicit_missing_entries", p.explicit_missing_entries},
                            {"cross_instance_rank_normalized", p.cross_instance_rank_normalized}}
                           .dump(2)
                    << '\n';
            } else {
                out << p.flags_string() << '\n';
            }
        } else if (*densify) {
            auto ds = load(ds_path);
            fs::create_directories(dense_dir);
            if (full) {
                write_dense_full(to_dense_full(ds, max_cells), ds, dense_dir);
            } else {
                write_dense_min(to_dense_min_ragged(ds), dense_dir);
            }
            note("wrote " + std::to_string(ds.n_signals()) + " signal matrices to " + dense_dir);
        } else if (*exporter) {
            write_long_csv(load(ds_path), fs::path(export_out));
            note("wrote " + export_out);
        } else if (*abf) {
            if (!global.seed) {
                throw UsageError("synth abf requires --seed");
            }
            abf_cfg.seed = *global.seed;
            auto ds = generate_abf(abf_cfg);
            save(ds, synth_out);
            note("wrote " + synth_out + " (" + std::to_string(ds.n_instances()) + " instances)");
        } else if (*knn || *skew) {
            auto all = make_labeled_set(load(ds_path));
            auto train = split_or_fail(all, train_split);
            auto test = split_or_fail(all, test_split);
            auto predicted = *knn ? knn_predict(train, test, k, band) : skew_rule_predict(train, test);
            out << "macro_f1=" << format_number(f1_macro(test.labels, predicted)) << '\n';
        } else if (*bench) {
            auto r = run_bench(ds_path, reps);
            if (as_json) {
                out << json{{"name", r.name},
                            {"load_seconds", r.load_seconds},
                            {"convert_seconds", r.convert_seconds},
                            {"disk_bytes", r.disk_bytes},
                            {"sparse_bytes", r.sparse_bytes},
                            {"dense_min_bytes", r.dense_min_bytes},
                            {"dense_full_bytes", r.dense_full_bytes}}
                           .dump(2)
                    << '\n';
            } else {
                out << "name=" << r.name << '\n'
                    << "load_seconds=" << format_number(r.load_seconds) << '\n'
                    << "convert_seconds=" << format_number(r.convert_seconds) << '\n'
                    << "disk_bytes=" << r.disk_bytes << '\n'
                    << "sparse_bytes=" << r.sparse_bytes << '\n'
                    << "dense_min_bytes=" << r.dense_min_bytes << '\n'
                    << "dense_full_bytes=" << r.dense_full_bytes << '\n';
            }
        }
    } catch (const UsageError& e) {
        err << "irts: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "irts: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

}  // namespace irts
