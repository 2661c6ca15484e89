// risk.hpp — Waste Score logistic model, linear SHAP attributions, the
// price-volume trendline, market quadrants and the Scrutiny Score.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "wastesig/features.hpp"
#include "wastesig/types.hpp"

namespace wastesig {

using Matrix = std::vector<std::vector<double>>;

struct LabelConfig {
    std::set<std::string> scrap_prefixes{"7204"};
    std::set<std::string> finished_prefixes{"8542"};
};

struct TrainingSet {
    Matrix X;                       // standardized rows, training subset
    std::vector<int> y;             // 1 = scrap-matched, 0 = finished-matched
    std::vector<std::string> hs_codes;
    std::vector<std::size_t> row_indices;  // into the source matrix
};

// Prefix-matches hs codes against the label sets. A code matching both sets
// or an empty class is a fatal configuration error. Unmatched products are
// simply not part of the training set (they are scored later).
TrainingSet build_training_set(const StandardizedMatrix& matrix, const LabelConfig& labels);

struct WasteModel {
    std::vector<double> weights;  // log-odds per z-unit
    double intercept = 0.0;
    std::vector<std::string> feature_names;
    std::vector<double> baseline_means;  // training means in standardized space
    double l2_lambda = 0.0;
    bool converged = false;
    int n_iter = 0;
};

// L2-penalized log-likelihood (penalty on weights only, not the intercept).
double logistic_loglik(const Matrix& X, const std::vector<int>& y,
                       const std::vector<double>& weights, double intercept, double l2_lambda);

// Gradient of the penalized log-likelihood; the last entry is d/d intercept.
std::vector<double> logistic_gradient(const Matrix& X, const std::vector<int>& y,
                                      const std::vector<double>& weights, double intercept,
                                      double l2_lambda);

// IRLS (Newton with step halving, so the objective never decreases).
// converged is set when the gradient max-norm drops below tol. Perfect
// separation with l2_lambda = 0 surfaces as converged = false; use
// l2_lambda > 0 (default 1e-3).
WasteModel fit_logistic(const Matrix& X, const std::vector<int>& y, double l2_lambda = 1e-3,
                        int max_iter = 100, double tol = 1e-8);

// Convenience: training set + fit + feature names + SHAP baseline.
WasteModel fit_waste_model(const StandardizedMatrix& matrix, const LabelConfig& labels,
                           double l2_lambda = 1e-3, int max_iter = 100, double tol = 1e-8);

// sigmoid(intercept + weights . z)
double waste_score(const WasteModel& model, const std::vector<double>& z);

// Exact Shapley values for a linear model under feature independence:
// attribution_i = weights_i * (z_i - baseline_means_i).
std::vector<double> linear_shap(const WasteModel& model, const std::vector<double>& z);

struct TrendlineFit {
    double slope = 0.0;      // d ln(price) / d ln(volume)
    double intercept = 0.0;
    double r_squared = 0.0;
    int n = 0;
};

// OLS of ln(avg_price) on ln(avg_kg) across products with positive volume
// and price. Fewer than 3 such products -> fatal.
TrendlineFit fit_trendline(const std::vector<FeatureVector>& features);

// Residual of one product against the fitted trendline, in log space.
// NaN when the product has no positive volume/price.
double trendline_residual(const TrendlineFit& fit, const FeatureVector& fv);

struct QuadrantThresholds {
    double median_log_kg = 0.0;     // median of ln(1 + avg_kg)
    double median_log_price = 0.0;  // median of ln(1 + avg_price)
};

QuadrantThresholds quadrant_thresholds(const std::vector<FeatureVector>& features);

// Points exactly on a median go to the "high" side.
Quadrant classify_quadrant(const FeatureVector& fv, const QuadrantThresholds& thresholds);

// scrutiny = waste * sigmoid(-price_trend_z); in [0, 1].
double scrutiny_score(double waste, double price_trend_z);

struct RiskProfile {
    std::string hs_code;
    double waste_score = 0.0;
    std::vector<double> shap;  // aligned with the model's feature_names
    Quadrant quadrant = Quadrant::LowVolLowPrice;
    double scrutiny_score = 0.0;
    double trendline_residual = 0.0;
};

}  // namespace wastesig
