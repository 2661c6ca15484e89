// features.hpp — per-product engineered features and z-score normalization.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wastesig/types.hpp"

namespace wastesig {

struct FeatureVector {
    std::string hs_code;
    double avg_kg = 0.0;            // mean annual volume, kg
    double avg_price = 0.0;         // mean annual unit price, USD/kg
    double price_volatility = 0.0;  // population stddev of annual unit price
    double kg_trend = 0.0;          // OLS slope of kg on calendar year
    double price_trend = 0.0;       // OLS slope of unit price on calendar year
    double log_avg_kg = 0.0;        // ln(1 + avg_kg)
    double log_avg_price = 0.0;     // ln(1 + avg_price)
    double ix_logkg_logprice = 0.0;
    double ix_trends = 0.0;
    bool low_confidence_trend = false;  // slopes fit on exactly 2 points
};

// The five Table-style core features; the extended set adds the log and
// interaction supplements.
const std::vector<std::string>& core_feature_names();
const std::vector<std::string>& extended_feature_names();

// Value of a named feature; throws std::invalid_argument for unknown names.
double feature_value(const FeatureVector& fv, const std::string& name);

// Requires >= 2 priced years; otherwise nullopt (caller excludes the product
// with reason "insufficient history").
std::optional<FeatureVector> compute_features(const ProductSeries& series);

struct FeatureTable {
    std::vector<FeatureVector> vectors;
    std::vector<std::pair<std::string, std::string>> skipped;  // (hs_code, reason)
};

FeatureTable build_feature_table(const std::vector<ProductSeries>& series);

struct StandardizedMatrix {
    std::vector<std::string> rows;     // hs codes, input order
    std::vector<std::string> columns;  // feature names
    std::vector<std::vector<double>> values;  // z-scores, row-major
    std::vector<double> means;
    std::vector<double> stds;  // population; 0 marks a constant column
    std::vector<bool> constant;

    std::size_t column_index(const std::string& name) const;  // npos when absent
    std::vector<double> row(std::size_t i) const { return values[i]; }
};

// z = (x - mean) / std per column (population std). Constant columns are
// emitted as all zeros and flagged. Fewer than 2 vectors -> fatal.
StandardizedMatrix standardize(const std::vector<FeatureVector>& vectors,
                               const std::vector<std::string>& feature_set);

// Maps a raw feature vector into an existing matrix's z-space (for scoring
// products outside the fitted population).
std::vector<double> standardize_row(const StandardizedMatrix& matrix, const FeatureVector& fv);

}  // namespace wastesig
