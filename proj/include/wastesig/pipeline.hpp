// pipeline.hpp — the four-stage run: clean, featurize, segment, score, plus
// forecasts, validation and report assembly. The CLI's run-all and the
// acceptance suite both go through here.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "wastesig/config.hpp"
#include "wastesig/corpus.hpp"
#include "wastesig/features.hpp"
#include "wastesig/forecast.hpp"
#include "wastesig/ingest.hpp"
#include "wastesig/report.hpp"
#include "wastesig/risk.hpp"
#include "wastesig/segmentation.hpp"
#include "wastesig/validation.hpp"

namespace wastesig {

struct PipelineResult {
    ParseReport parse_report;
    std::vector<TradeRecord> records;        // harmonized, analysis flow only
    std::vector<ProductSeries> cleaned;      // kept, post-winsorize, sorted by hs
    std::vector<ProductSeries> dropped_sparse;
    std::vector<std::pair<std::string, std::string>> skipped_products;  // (hs, reason)
    std::vector<FeatureVector> features;     // modeled products, sorted by hs
    StandardizedMatrix matrix;
    SegmentationResult segmentation;
    WasteModel model;
    TrendlineFit trendline;
    QuadrantThresholds thresholds;
    std::vector<RiskProfile> profiles;       // aligned with features rows
    std::vector<PriceForecast> forecasts;    // aligned with features rows
    Forest forest;
    Evaluation training_eval;
    std::vector<std::string> warnings;

    std::size_t row_of(const std::string& hs_code) const;  // npos when absent
    DashboardInputs dashboard_inputs(const AppConfig& cfg) const;
};

// Cleaning only: harmonize, aggregate, interpolate, exclude, deflate, cap.
std::vector<ProductSeries> clean_series(const std::vector<TradeRecord>& harmonized,
                                        const AppConfig& cfg,
                                        std::vector<ProductSeries>* dropped = nullptr,
                                        std::vector<std::string>* warnings = nullptr);

// Full pipeline from raw (unharmonized) records.
PipelineResult run_pipeline(const std::vector<TradeRecord>& raw_records, const AppConfig& cfg);

// Parse + full pipeline from input file bytes.
PipelineResult run_pipeline_text(const std::string& content, const AppConfig& cfg);

// run-all: every artifact serialized into out_dir with deterministic bytes.
// Returns the list of files written (relative names).
std::vector<std::string> write_all_outputs(const PipelineResult& result, const AppConfig& cfg,
                                           const std::string& out_dir, const std::string& format);

// Serializers shared by the CLI subcommands.
std::string series_to_dsv(const std::vector<ProductSeries>& series, char delimiter);
std::string series_to_json(const std::vector<ProductSeries>& series);
std::string features_to_dsv(const std::vector<FeatureVector>& features, char delimiter);
std::string assignments_to_dsv(const std::vector<SegmentAssignment>& assignments,
                               char delimiter);
std::string assignments_to_json(const std::vector<SegmentAssignment>& assignments);
std::string risk_table_to_dsv(const PipelineResult& result, char delimiter);
std::string risk_table_to_json(const PipelineResult& result);
std::string forecasts_to_dsv(const std::vector<PriceForecast>& forecasts, char delimiter);
std::string forecasts_to_json(const std::vector<PriceForecast>& forecasts);
std::string hotspots_to_dsv(const std::vector<CountryHotspot>& hotspots, char delimiter);
std::string treemap_to_dsv(const std::vector<TreemapDatum>& data, char delimiter);
std::string validation_summary(const Forest& forest, const Evaluation& eval);

}  // namespace wastesig
