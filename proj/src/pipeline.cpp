#include "wastesig/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "wastesig/dsv.hpp"
#include "wastesig/stats.hpp"

namespace wastesig {

using nlohmann::json;

std::size_t PipelineResult::row_of(const std::string& hs_code) const {
    for (std::size_t i = 0; i < matrix.rows.size(); ++i)
        if (matrix.rows[i] == hs_code) return i;
    return static_cast<std::size_t>(-1);
}

DashboardInputs PipelineResult::dashboard_inputs(const AppConfig& cfg) const {
    return DashboardInputs{segmentation.assignments,
                           profiles,
                           features,
                           matrix.columns,
                           forecasts,
                           records,
                           thresholds,
                           cfg.tariffs,
                           cfg.top_partners,
                           cfg.value_weighted_partners};
}

std::vector<ProductSeries> clean_series(const std::vector<TradeRecord>& harmonized,
                                        const AppConfig& cfg,
                                        std::vector<ProductSeries>* dropped,
                                        std::vector<std::string>* warnings) {
    auto series = aggregate_series(harmonized, cfg.cleaning);
    for (auto& s : series) s = interpolate_gaps(std::move(s), cfg.cleaning);
    auto partition = exclude_sparse(std::move(series), cfg.cleaning);
    if (dropped) *dropped = partition.dropped;
    for (auto& s : partition.kept) s = deflate(std::move(s), cfg.cleaning);
    auto capped = winsorize(std::move(partition.kept), cfg.cleaning, warnings);
    std::sort(capped.begin(), capped.end(), [](const ProductSeries& a, const ProductSeries& b) {
        return a.hs_code < b.hs_code;
    });
    return capped;
}

PipelineResult run_pipeline(const std::vector<TradeRecord>& raw_records, const AppConfig& cfg) {
    PipelineResult res;

    auto harmonized = harmonize(raw_records);
    harmonized.erase(std::remove_if(harmonized.begin(), harmonized.end(),
                                    [&](const TradeRecord& r) {
                                        return r.flow != cfg.analysis_flow;
                                    }),
                     harmonized.end());
    res.records = harmonized;

    res.cleaned = clean_series(harmonized, cfg, &res.dropped_sparse, &res.warnings);
    if (res.cleaned.empty()) throw std::runtime_error("no products survived cleaning");

    FeatureTable table = build_feature_table(res.cleaned);
    res.skipped_products = table.skipped;
    res.features = std::move(table.vectors);
    if (res.features.size() < 8)
        throw std::runtime_error("fewer than 8 modeled products; nothing to segment");

    res.matrix = standardize(res.features, cfg.feature_set);
    res.segmentation = iterative_segment(res.matrix, res.features, cfg.segmentation);
    for (const auto& w : res.segmentation.warnings) res.warnings.push_back(w);

    res.model = fit_waste_model(res.matrix, cfg.labels, cfg.l2_lambda);
    if (!res.model.converged)
        res.warnings.push_back(
            "waste model did not converge; consider l2_lambda > 0 (default 1e-3)");

    res.trendline = fit_trendline(res.features);
    res.thresholds = quadrant_thresholds(res.features);

    const std::size_t pt_col = res.matrix.column_index("price_trend");
    std::map<std::string, const ProductSeries*> series_by_hs;
    for (const auto& s : res.cleaned) series_by_hs[s.hs_code] = &s;

    for (std::size_t i = 0; i < res.features.size(); ++i) {
        const auto& fv = res.features[i];
        RiskProfile p;
        p.hs_code = fv.hs_code;
        p.waste_score = waste_score(res.model, res.matrix.values[i]);
        p.shap = linear_shap(res.model, res.matrix.values[i]);
        p.quadrant = classify_quadrant(fv, res.thresholds);
        double pt_z = 0.0;
        if (pt_col != static_cast<std::size_t>(-1)) {
            pt_z = res.matrix.values[i][pt_col];
        } else {
            // Modeling set without price_trend: z-score it on the side.
            std::vector<double> raw(res.features.size());
            for (std::size_t r = 0; r < res.features.size(); ++r)
                raw[r] = res.features[r].price_trend;
            const double m = stats::mean(raw);
            const double sd = stats::population_stddev(raw);
            pt_z = sd > 0.0 ? (fv.price_trend - m) / sd : 0.0;
        }
        p.scrutiny_score = scrutiny_score(p.waste_score, pt_z);
        p.trendline_residual = trendline_residual(res.trendline, fv);
        res.profiles.push_back(std::move(p));

        const auto it = series_by_hs.find(fv.hs_code);
        if (it == series_by_hs.end()) throw std::logic_error("series lost for " + fv.hs_code);
        auto fc = forecast_price(*it->second, cfg.forecast_horizon);
        if (!fc) throw std::logic_error("unforecastable modeled product " + fv.hs_code);
        res.forecasts.push_back(std::move(*fc));
    }

    std::vector<std::string> tier_labels;
    tier_labels.reserve(res.segmentation.assignments.size());
    for (const auto& a : res.segmentation.assignments) tier_labels.push_back(to_string(a.tier));
    res.forest = fit_forest(res.matrix.values, tier_labels, res.matrix.rows, cfg.forest);
    res.training_eval = evaluate(res.forest, res.matrix.values, tier_labels);

    return res;
}

PipelineResult run_pipeline_text(const std::string& content, const AppConfig& cfg) {
    ParseOptions opts = cfg.parse;
    opts.year_window = {cfg.cleaning.window_start, cfg.cleaning.window_end};
    ParseResult parsed = parse_records(content, opts);
    PipelineResult res = run_pipeline(parsed.records, cfg);
    res.parse_report = std::move(parsed.report);
    return res;
}

namespace {

std::string fmt(double v) { return dsv::format_double(v); }

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

}  // namespace

std::string series_to_dsv(const std::vector<ProductSeries>& series, char delimiter) {
    std::vector<std::string> row{"hs_code", "flow",       "year",
                                 "value_usd", "kg",       "unit_price",
                                 "interpolated", "missing_fraction"};
    std::string out = dsv::join(row, delimiter) + "\n";
    for (const auto& s : series)
        for (const auto& p : s.points) {
            row = {s.hs_code,
                   to_string(s.flow),
                   std::to_string(p.year),
                   fmt(p.value_usd),
                   fmt(p.kg),
                   p.unit_price ? fmt(*p.unit_price) : "",
                   s.interpolated_years.count(p.year) ? "1" : "0",
                   fmt(s.missing_fraction)};
            out += dsv::join(row, delimiter) + "\n";
        }
    return out;
}

std::string series_to_json(const std::vector<ProductSeries>& series) {
    json arr = json::array();
    for (const auto& s : series) {
        json points = json::array();
        for (const auto& p : s.points) {
            json point{{"year", p.year}, {"value_usd", p.value_usd}, {"kg", p.kg}};
            point["unit_price"] = p.unit_price ? json(*p.unit_price) : json(nullptr);
            points.push_back(std::move(point));
        }
        arr.push_back({{"hs_code", s.hs_code},
                       {"flow", to_string(s.flow)},
                       {"points", points},
                       {"missing_fraction", s.missing_fraction},
                       {"interpolated_years", s.interpolated_years}});
    }
    return arr.dump(2) + "\n";
}

std::string features_to_dsv(const std::vector<FeatureVector>& features, char delimiter) {
    std::vector<std::string> row{"hs_code"};
    for (const auto& name : extended_feature_names()) row.push_back(name);
    row.push_back("low_confidence_trend");
    std::string out = dsv::join(row, delimiter) + "\n";
    for (const auto& fv : features) {
        row = {fv.hs_code};
        for (const auto& name : extended_feature_names()) row.push_back(fmt(feature_value(fv, name)));
        row.push_back(fv.low_confidence_trend ? "1" : "0");
        out += dsv::join(row, delimiter) + "\n";
    }
    return out;
}

std::string assignments_to_dsv(const std::vector<SegmentAssignment>& assignments,
                               char delimiter) {
    std::string out = dsv::join({"hs_code", "tier", "pass", "kmeans_cluster", "dbscan_label",
                                 "dual_confirmed_outlier"},
                                delimiter) +
                      "\n";
    for (const auto& a : assignments)
        out += dsv::join({a.hs_code, to_string(a.tier), to_string(a.pass),
                          std::to_string(a.kmeans_cluster), std::to_string(a.dbscan_label),
                          a.dual_confirmed_outlier ? "1" : "0"},
                         delimiter) +
               "\n";
    return out;
}

std::string assignments_to_json(const std::vector<SegmentAssignment>& assignments) {
    json arr = json::array();
    for (const auto& a : assignments)
        arr.push_back({{"hs_code", a.hs_code},
                       {"tier", to_string(a.tier)},
                       {"pass", to_string(a.pass)},
                       {"kmeans_cluster", a.kmeans_cluster},
                       {"dbscan_label", a.dbscan_label},
                       {"dual_confirmed_outlier", a.dual_confirmed_outlier}});
    return arr.dump(2) + "\n";
}

std::string risk_table_to_dsv(const PipelineResult& result, char delimiter) {
    std::string out = dsv::join({"hs_code", "waste_score", "scrutiny_score", "quadrant",
                                 "trendline_residual", "shap_top1", "shap_top2", "shap_top3"},
                                delimiter) +
                      "\n";
    for (std::size_t i = 0; i < result.profiles.size(); ++i) {
        const auto& p = result.profiles[i];
        std::vector<std::size_t> order(p.shap.size());
        for (std::size_t j = 0; j < p.shap.size(); ++j) order[j] = j;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(p.shap[a]) > std::abs(p.shap[b]);
        });
        std::vector<std::string> row{p.hs_code, fmt(p.waste_score), fmt(p.scrutiny_score),
                                     to_string(p.quadrant),
                                     std::isnan(p.trendline_residual)
                                         ? ""
                                         : fmt(p.trendline_residual)};
        for (std::size_t j = 0; j < 3; ++j) {
            if (j < order.size())
                row.push_back(result.matrix.columns[order[j]] + "=" + fmt(p.shap[order[j]]));
            else
                row.push_back("");
        }
        out += dsv::join(row, delimiter) + "\n";
    }
    return out;
}

std::string risk_table_to_json(const PipelineResult& result) {
    json arr = json::array();
    for (std::size_t i = 0; i < result.profiles.size(); ++i) {
        const auto& p = result.profiles[i];
        json shap = json::object();
        for (std::size_t j = 0; j < p.shap.size(); ++j)
            shap[result.matrix.columns[j]] = p.shap[j];
        json obj{{"hs_code", p.hs_code},
                 {"waste_score", p.waste_score},
                 {"scrutiny_score", p.scrutiny_score},
                 {"quadrant", to_string(p.quadrant)},
                 {"shap", shap}};
        obj["trendline_residual"] =
            std::isnan(p.trendline_residual) ? json(nullptr) : json(p.trendline_residual);
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

std::string forecasts_to_dsv(const std::vector<PriceForecast>& forecasts, char delimiter) {
    std::string out = dsv::join({"hs_code", "slope", "intercept", "horizon_year",
                                 "negative_cross_year", "path"},
                                delimiter) +
                      "\n";
    for (const auto& f : forecasts) {
        std::string path;
        for (const auto& [year, price] : f.path) {
            if (!path.empty()) path += ' ';
            path += std::to_string(year) + ":" + fmt(price);
        }
        out += dsv::join({f.hs_code, fmt(f.slope), fmt(f.intercept),
                          std::to_string(f.horizon_year),
                          f.negative_cross_year ? std::to_string(*f.negative_cross_year) : "",
                          path},
                         delimiter) +
               "\n";
    }
    return out;
}

std::string forecasts_to_json(const std::vector<PriceForecast>& forecasts) {
    json arr = json::array();
    for (const auto& f : forecasts) {
        json path = json::array();
        for (const auto& [year, price] : f.path)
            path.push_back({{"year", year}, {"price", price}});
        json obj{{"hs_code", f.hs_code},
                 {"slope", f.slope},
                 {"intercept", f.intercept},
                 {"horizon_year", f.horizon_year},
                 {"path", path}};
        obj["negative_cross_year"] =
            f.negative_cross_year ? json(*f.negative_cross_year) : json(nullptr);
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

std::string hotspots_to_dsv(const std::vector<CountryHotspot>& hotspots, char delimiter) {
    std::string out = dsv::join({"partner", "mean_waste_score", "n_products"}, delimiter) + "\n";
    for (const auto& h : hotspots)
        out += dsv::join({h.partner, fmt(h.mean_waste_score), std::to_string(h.n_products)},
                         delimiter) +
               "\n";
    return out;
}

std::string treemap_to_dsv(const std::vector<TreemapDatum>& data, char delimiter) {
    std::string out = dsv::join({"tier", "count", "share"}, delimiter) + "\n";
    for (const auto& d : data)
        out += dsv::join({d.tier, std::to_string(d.count), fmt(d.share)}, delimiter) + "\n";
    return out;
}

std::string validation_summary(const Forest& forest, const Evaluation& eval) {
    std::string out;
    out += "trees: " + std::to_string(forest.params.n_trees) + "\n";
    out += "training_accuracy: " + fmt(forest.training_accuracy) + "\n";
    out += "oob_accuracy: " + fmt(forest.oob_accuracy) + " (" +
           std::to_string(forest.oob_evaluated) + " samples)\n";
    out += "confusion (rows=true, cols=predicted): " +
           dsv::join(eval.class_names, ' ') + "\n";
    for (std::size_t r = 0; r < eval.confusion.size(); ++r) {
        std::vector<std::string> row{eval.class_names[r]};
        for (const int v : eval.confusion[r]) row.push_back(std::to_string(v));
        out += dsv::join(row, ' ') + "\n";
    }
    return out;
}

std::vector<std::string> write_all_outputs(const PipelineResult& result, const AppConfig& cfg,
                                           const std::string& out_dir,
                                           const std::string& format) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const char delim = cfg.parse.delimiter;
    const bool want_dsv = format == "csv" || format == "both";
    const bool want_json = format == "json" || format == "both";
    std::vector<std::string> written;

    auto emit = [&](const std::string& name, const std::string& content) {
        write_file(fs::path(out_dir) / name, content);
        written.push_back(name);
    };

    if (want_dsv) emit("series.csv", series_to_dsv(result.cleaned, delim));
    if (want_json) emit("series.json", series_to_json(result.cleaned));
    if (want_dsv) emit("features.csv", features_to_dsv(result.features, delim));
    if (want_dsv) emit("segments.csv", assignments_to_dsv(result.segmentation.assignments, delim));
    if (want_json) emit("segments.json", assignments_to_json(result.segmentation.assignments));
    if (want_dsv) emit("risk.csv", risk_table_to_dsv(result, delim));
    if (want_json) emit("risk.json", risk_table_to_json(result));
    if (want_dsv) emit("forecasts.csv", forecasts_to_dsv(result.forecasts, delim));
    if (want_json) emit("forecasts.json", forecasts_to_json(result.forecasts));

    const auto hotspots = country_hotspots(result.profiles, result.records);
    if (want_dsv) emit("hotspots.csv", hotspots_to_dsv(hotspots, delim));
    if (want_json) emit("hotspots.json", hotspots_to_json(hotspots));

    const auto shares = treemap(result.segmentation.assignments);
    if (want_dsv) emit("treemap.csv", treemap_to_dsv(shares, delim));
    if (want_json) emit("treemap.json", treemap_to_json(shares));

    emit("validation.txt", validation_summary(result.forest, result.training_eval));
    return written;
}

}  // namespace wastesig
