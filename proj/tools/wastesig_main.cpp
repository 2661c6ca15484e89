// wastesig_main.cpp — command line front end for the trade analytics
// pipeline. Subcommands mirror the pipeline stages plus run-all and a
// synthetic-corpus generator for demos and testing.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wastesig/corpus.hpp"
#include "wastesig/dsv.hpp"
#include "wastesig/pipeline.hpp"

namespace fs = std::filesystem;
using namespace wastesig;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

struct GlobalArgs {
    std::string config_path;
    std::string input_path;
    std::string out_dir = "out";
    std::string format = "csv";  // csv | json | both
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool tab = false;

    AppConfig load() const {
        AppConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
        if (seed_set) {
            cfg.seed = seed;
            cfg.segmentation.seed = seed;
            cfg.forest.seed = seed;
        }
        if (tab) cfg.parse.delimiter = '\t';
        return cfg;
    }
};

void emit(const GlobalArgs& args, const std::string& name_base, const std::string& dsv,
          const std::string& json) {
    const fs::path dir(args.out_dir);
    if (args.format == "csv" || args.format == "both")
        write_file(dir / (name_base + ".csv"), dsv);
    if (args.format == "json" || args.format == "both")
        write_file(dir / (name_base + ".json"), json);
}

void print_parse_report(const ParseReport& report) {
    std::cout << "rows: " << report.rows_total << " accepted: " << report.rows_accepted
              << " padded: " << report.rows_padded << " rejected: " << report.rejected.size()
              << "\n";
    for (const auto& issue : report.rejected)
        std::cout << "  line " << issue.line << ": " << issue.reason << "\n";
}

PipelineResult run_full(const GlobalArgs& args, const AppConfig& cfg) {
    if (args.input_path.empty())
        throw std::runtime_error("--input is required (or use `corpus` to generate one)");
    auto result = run_pipeline_text(read_file(args.input_path), cfg);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    return result;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wastesig: e-waste trade signature analytics"};
    app.require_subcommand(1);

    GlobalArgs args;
    app.add_option("--config", args.config_path, "path to the JSON config file");
    app.add_option("--input", args.input_path, "input trade records (delimiter-separated)");
    app.add_option("--out-dir", args.out_dir, "output directory")->capture_default_str();
    app.add_option("--format", args.format, "output format: csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();
    app.add_option("--seed", args.seed, "override every seed in the config")
        ->each([&](const std::string&) { args.seed_set = true; });
    app.add_flag("--tab", args.tab, "input is tab-separated");

    auto* ingest_cmd = app.add_subcommand("ingest", "parse, clean and dump the product series");
    auto* features_cmd = app.add_subcommand("features", "engineered feature table");
    features_cmd->add_subcommand("export", "write the feature table (default action)");
    auto* segment_cmd = app.add_subcommand("segment", "four-tier market segmentation");
    int k_max = 10;
    int k_override = 0;
    double eps = 0.0;
    int min_pts = 0;
    segment_cmd->add_option("--k-max", k_max, "largest K for the elbow scan")
        ->capture_default_str();
    segment_cmd->add_option("--k", k_override, "manual pass-1 K (skips the elbow)");
    segment_cmd->add_option("--eps", eps, "DBSCAN radius (default: k-distance elbow)");
    segment_cmd->add_option("--min-pts", min_pts, "DBSCAN core threshold");
    auto* score_cmd = app.add_subcommand("score", "waste score, SHAP, quadrants, scrutiny");
    std::string labels_override;
    double l2 = -1.0;
    score_cmd->add_option("--labels", labels_override,
                          "label prefixes as scrap:finished, e.g. 7204,3915:8542");
    score_cmd->add_option("--l2", l2, "L2 penalty for the logistic fit");
    auto* forecast_cmd = app.add_subcommand("forecast", "price forecasts and downtrends");
    int horizon = 0;
    int top_n = 0;
    forecast_cmd->add_option("--horizon", horizon, "forecast horizon year (default 2030)");
    forecast_cmd->add_option("--top", top_n, "downtrend list size (default 6; figs use 6/15)");
    auto* validate_cmd = app.add_subcommand("validate", "tier classifier validation");
    int trees = 0, depth = 0;
    validate_cmd->add_option("--trees", trees, "number of bagged trees (default 25)");
    validate_cmd->add_option("--depth", depth, "max tree depth (default 8)");
    auto* report_cmd = app.add_subcommand("report", "dashboards, hotspots, treemap");
    std::string report_hs;
    bool report_all = false, report_hotspots = false, report_treemap = false;
    report_cmd->add_option("--hs", report_hs, "dashboard for one HS code");
    report_cmd->add_flag("--all", report_all, "dashboards for every modeled product");
    report_cmd->add_flag("--hotspots", report_hotspots, "country hotspot table");
    report_cmd->add_flag("--treemap", report_treemap, "tier proportion table");
    std::string report_format = "json";
    report_cmd->add_option("--format", report_format, "json, svg or both")
        ->check(CLI::IsMember({"json", "svg", "both"}));
    auto* runall_cmd = app.add_subcommand("run-all", "full pipeline, all artifacts");
    auto* corpus_cmd = app.add_subcommand("corpus", "write the synthetic demo corpus");
    std::string corpus_out = "corpus.csv";
    std::string corpus_config_out;
    corpus_cmd->add_option("--out", corpus_out, "records file to write")
        ->capture_default_str();
    corpus_cmd->add_option("--write-config", corpus_config_out,
                           "also write the matching config JSON here");

    // Global flags may appear after the subcommand name.
    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
        for (auto* nested : sub->get_subcommands({})) nested->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        AppConfig cfg = args.load();

        if (corpus_cmd->parsed()) {
            const Corpus corpus = make_synthetic_corpus(args.seed_set ? args.seed : cfg.seed);
            write_file(corpus_out, corpus_to_csv(corpus));
            std::cout << "wrote " << corpus_out << " (" << corpus.records.size()
                      << " records, 200 products + 2 sparse)\n";
            if (!corpus_config_out.empty()) {
                write_file(corpus_config_out, config_to_json(corpus.config));
                std::cout << "wrote " << corpus_config_out << "\n";
            }
            return 0;
        }

        if (ingest_cmd->parsed()) {
            ParseOptions opts = cfg.parse;
            opts.year_window = {cfg.cleaning.window_start, cfg.cleaning.window_end};
            const auto parsed = parse_records(read_file(args.input_path), opts);
            print_parse_report(parsed.report);
            std::vector<std::string> warnings;
            std::vector<ProductSeries> dropped;
            const auto harmonized = harmonize(parsed.records);
            std::vector<TradeRecord> flow_records;
            for (const auto& r : harmonized)
                if (r.flow == cfg.analysis_flow) flow_records.push_back(r);
            const auto cleaned = clean_series(flow_records, cfg, &dropped, &warnings);
            for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
            std::cout << "kept " << cleaned.size() << " series, dropped " << dropped.size()
                      << " sparse\n";
            emit(args, "series", series_to_dsv(cleaned, cfg.parse.delimiter),
                 series_to_json(cleaned));
            return 0;
        }

        if (segment_cmd->parsed()) {
            if (segment_cmd->count("--k-max")) cfg.segmentation.k_max = k_max;
            if (segment_cmd->count("--k")) cfg.segmentation.k_override = k_override;
            if (segment_cmd->count("--eps")) cfg.segmentation.eps = eps;
            if (segment_cmd->count("--min-pts")) cfg.segmentation.min_pts = min_pts;
        }
        if (score_cmd->parsed()) {
            if (l2 >= 0.0) cfg.l2_lambda = l2;
            if (!labels_override.empty()) {
                const auto colon = labels_override.find(':');
                if (colon == std::string::npos)
                    throw std::runtime_error("--labels wants scrap:finished prefix lists");
                cfg.labels.scrap_prefixes.clear();
                cfg.labels.finished_prefixes.clear();
                for (const auto& p :
                     dsv::split_fields(labels_override.substr(0, colon), ','))
                    cfg.labels.scrap_prefixes.insert(p);
                for (const auto& p : dsv::split_fields(labels_override.substr(colon + 1), ','))
                    cfg.labels.finished_prefixes.insert(p);
            }
        }
        if (forecast_cmd->parsed()) {
            if (horizon > 0) cfg.forecast_horizon = horizon;
            if (top_n > 0) cfg.forecast_top = top_n;
        }
        if (validate_cmd->parsed()) {
            if (trees > 0) cfg.forest.n_trees = trees;
            if (depth > 0) cfg.forest.max_depth = depth;
        }

        const PipelineResult result = run_full(args, cfg);
        const char delim = cfg.parse.delimiter;

        if (features_cmd->parsed()) {
            emit(args, "features", features_to_dsv(result.features, delim),
                 std::string("{}\n"));
            for (const auto& [hs, reason] : result.skipped_products)
                std::cerr << "skipped " << hs << ": " << reason << "\n";
            std::cout << "wrote features for " << result.features.size() << " products\n";
        } else if (segment_cmd->parsed()) {
            emit(args, "segments", assignments_to_dsv(result.segmentation.assignments, delim),
                 assignments_to_json(result.segmentation.assignments));
            std::cout << "pass-1 k=" << result.segmentation.pass1_elbow.chosen_k
                      << " eps=" << result.segmentation.eps_used << "\n";
            for (const auto& d : treemap(result.segmentation.assignments))
                std::cout << d.tier << ": " << d.count << " (" << d.share << ")\n";
        } else if (score_cmd->parsed()) {
            emit(args, "risk", risk_table_to_dsv(result, delim), risk_table_to_json(result));
            std::cout << "scored " << result.profiles.size() << " products; trendline slope "
                      << result.trendline.slope << " r2 " << result.trendline.r_squared << "\n";
        } else if (forecast_cmd->parsed()) {
            const auto ranked = rank_downtrends(result.forecasts,
                                                static_cast<std::size_t>(cfg.forecast_top));
            emit(args, "forecasts", forecasts_to_dsv(result.forecasts, delim),
                 forecasts_to_json(result.forecasts));
            std::cout << "steepest downtrends:\n";
            for (const auto& fc : ranked) {
                std::cout << "  " << fc.hs_code << " slope " << fc.slope;
                if (fc.negative_cross_year)
                    std::cout << " negative from " << *fc.negative_cross_year;
                std::cout << "\n";
            }
        } else if (validate_cmd->parsed()) {
            std::cout << validation_summary(result.forest, result.training_eval);
        } else if (report_cmd->parsed()) {
            const auto inputs = result.dashboard_inputs(cfg);
            const fs::path dir(args.out_dir);
            auto write_dashboard = [&](const std::string& hs) {
                const auto d = build_dashboard(hs, inputs);
                if (report_format == "json" || report_format == "both")
                    write_file(dir / ("dashboard_" + hs + ".json"), dashboard_to_json(d));
                if (report_format == "svg" || report_format == "both")
                    write_file(dir / ("dashboard_" + hs + ".svg"), render_svg(d));
            };
            if (!report_hs.empty()) write_dashboard(report_hs);
            if (report_all)
                for (const auto& a : result.segmentation.assignments)
                    write_dashboard(a.hs_code);
            if (report_hotspots) {
                const auto hotspots = country_hotspots(result.profiles, result.records);
                write_file(dir / "hotspots.csv", hotspots_to_dsv(hotspots, delim));
                write_file(dir / "hotspots.json", hotspots_to_json(hotspots));
            }
            if (report_treemap) {
                const auto shares = treemap(result.segmentation.assignments);
                write_file(dir / "treemap.csv", treemap_to_dsv(shares, delim));
                write_file(dir / "treemap.json", treemap_to_json(shares));
            }
            if (report_hs.empty() && !report_all && !report_hotspots && !report_treemap)
                std::cerr << "nothing requested; use --hs, --all, --hotspots or --treemap\n";
        } else if (runall_cmd->parsed()) {
            print_parse_report(result.parse_report);
            const auto files = write_all_outputs(result, cfg, args.out_dir, "both");
            const auto inputs = result.dashboard_inputs(cfg);
            for (const auto& a : result.segmentation.assignments) {
                const auto d = build_dashboard(a.hs_code, inputs);
                write_file(fs::path(args.out_dir) / "dashboards" /
                               ("dashboard_" + a.hs_code + ".json"),
                           dashboard_to_json(d));
                write_file(fs::path(args.out_dir) / "dashboards" /
                               ("dashboard_" + a.hs_code + ".svg"),
                           render_svg(d));
            }
            std::cout << "wrote " << files.size() << " tables and "
                      << result.segmentation.assignments.size() << " dashboards to "
                      << args.out_dir << "\n";
            std::cout << validation_summary(result.forest, result.training_eval);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
