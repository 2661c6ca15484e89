// config.hpp — one structured config file drives every stage: cleaning
// window, column aliases, label lists, seeds, clustering knobs, the tariff
// table. Every key is optional and falls back to the documented default.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wastesig/ingest.hpp"
#include "wastesig/risk.hpp"
#include "wastesig/segmentation.hpp"
#include "wastesig/types.hpp"
#include "wastesig/validation.hpp"

namespace wastesig {

struct AppConfig {
    CleaningConfig cleaning;
    ParseOptions parse;
    Flow analysis_flow = Flow::exports;
    std::vector<std::string> feature_set;  // defaults to the core five
    LabelConfig labels;
    SegmentationConfig segmentation;
    double l2_lambda = 1e-3;
    int forecast_horizon = 2030;
    int forecast_top = 6;
    ForestParams forest;
    std::map<std::string, double> tariffs;  // hs prefix -> rate
    int top_partners = 5;
    bool value_weighted_partners = false;
    std::uint64_t seed = 42;

    AppConfig();
};

AppConfig default_config();

// Parses the JSON config text; unknown keys are rejected to catch typos.
AppConfig parse_config(const std::string& json_text);

AppConfig load_config(const std::string& path);

std::string config_to_json(const AppConfig& cfg);

// Longest matching tariff prefix for a 6-digit code; negative when absent.
double tariff_for(const std::map<std::string, double>& tariffs, const std::string& hs_code,
                  bool* found = nullptr);

}  // namespace wastesig
