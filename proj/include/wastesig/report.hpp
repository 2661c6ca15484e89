// report.hpp — per-product risk dashboards, country hotspot aggregates,
// treemap proportions, and the SVG rendering of the one-page dashboard.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wastesig/features.hpp"
#include "wastesig/forecast.hpp"
#include "wastesig/risk.hpp"
#include "wastesig/segmentation.hpp"
#include "wastesig/types.hpp"

namespace wastesig {

struct Dashboard {
    std::string hs_code;
    Tier tier = Tier::Core;
    Quadrant quadrant = Quadrant::LowVolLowPrice;
    double waste_score = 0.0;
    double scrutiny_score = 0.0;
    PriceForecast forecast;
    std::vector<std::pair<std::string, int>> top_partners;  // (ISO3, record count)
    std::optional<double> tariff_rate;
    std::vector<std::pair<std::string, double>> shap_top;  // top-3 by |attribution|
    // Layout support for the quadrant panel.
    double log_kg = 0.0;
    double log_price = 0.0;
    QuadrantThresholds thresholds;
};

struct DashboardInputs {
    const std::vector<SegmentAssignment>& assignments;
    const std::vector<RiskProfile>& profiles;            // aligned with assignments
    const std::vector<FeatureVector>& features;          // aligned with assignments
    const std::vector<std::string>& model_feature_names;
    const std::vector<PriceForecast>& forecasts;         // any order
    const std::vector<TradeRecord>& records;             // harmonized, analysis flow
    QuadrantThresholds thresholds;
    const std::map<std::string, double>& tariffs;
    int top_partners_n = 5;
    bool value_weighted_partners = false;
};

// Unknown hs_code -> fatal "not modeled".
Dashboard build_dashboard(const std::string& hs_code, const DashboardInputs& in);

struct CountryHotspot {
    std::string partner;
    double mean_waste_score = 0.0;
    int n_products = 0;
};

// Unweighted mean waste score over the distinct modeled products traded with
// each partner, sorted descending (ties by ISO3).
std::vector<CountryHotspot> country_hotspots(const std::vector<RiskProfile>& profiles,
                                             const std::vector<TradeRecord>& records);

struct TreemapDatum {
    std::string tier;
    int count = 0;
    double share = 0.0;
};

// Count and share per tier, zero-count tiers included; shares sum to 1.
// Empty input -> fatal "nothing to report".
std::vector<TreemapDatum> treemap(const std::vector<SegmentAssignment>& assignments);

// One self-contained 960x720 SVG: quadrant panel, score gauges, forecast
// line with the negative region shaded, partner bars. Deterministic output
// with all numbers at 4 decimals.
std::string render_svg(const Dashboard& dashboard);

// JSON emitters (stable schemas, documented in the README).
std::string dashboard_to_json(const Dashboard& dashboard);
std::string hotspots_to_json(const std::vector<CountryHotspot>& hotspots);
std::string treemap_to_json(const std::vector<TreemapDatum>& data);

}  // namespace wastesig
