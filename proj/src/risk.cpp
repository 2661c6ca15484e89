#include "wastesig/risk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wastesig/stats.hpp"

namespace wastesig {

namespace {

bool has_prefix(const std::string& code, const std::set<std::string>& prefixes) {
    return std::any_of(prefixes.begin(), prefixes.end(), [&](const std::string& p) {
        return !p.empty() && code.rfind(p, 0) == 0;
    });
}

// Solves the symmetric positive-definite system A x = b in place via
// Cholesky. The IRLS Hessian is SPD whenever lambda > 0 or the weights
// matrix is non-degenerate.
std::vector<double> solve_spd(Matrix a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a[j][j];
        for (std::size_t k = 0; k < j; ++k) diag -= a[j][k] * a[j][k];
        if (diag <= 0.0) throw std::runtime_error("IRLS normal equations not positive definite");
        a[j][j] = std::sqrt(diag);
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a[i][j];
            for (std::size_t k = 0; k < j; ++k) v -= a[i][k] * a[j][k];
            a[i][j] = v / a[j][j];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= a[i][k] * b[k];
        b[i] = v / a[i][i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double v = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) v -= a[k][ii] * b[k];
        b[ii] = v / a[ii][ii];
    }
    return b;
}

double linear_predictor(const std::vector<double>& x, const std::vector<double>& w, double b) {
    double eta = b;
    for (std::size_t j = 0; j < w.size(); ++j) eta += w[j] * x[j];
    return eta;
}

}  // namespace

TrainingSet build_training_set(const StandardizedMatrix& matrix, const LabelConfig& labels) {
    if (labels.scrap_prefixes.empty() || labels.finished_prefixes.empty())
        throw std::invalid_argument("both scrap and finished label sets must be non-empty");

    TrainingSet ts;
    for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
        const std::string& hs = matrix.rows[i];
        const bool scrap = has_prefix(hs, labels.scrap_prefixes);
        const bool finished = has_prefix(hs, labels.finished_prefixes);
        if (scrap && finished)
            throw std::invalid_argument("hs code " + hs + " matches both label sets");
        if (!scrap && !finished) continue;
        ts.X.push_back(matrix.values[i]);
        ts.y.push_back(scrap ? 1 : 0);
        ts.hs_codes.push_back(hs);
        ts.row_indices.push_back(i);
    }
    const bool have_scrap = std::count(ts.y.begin(), ts.y.end(), 1) > 0;
    const bool have_finished = std::count(ts.y.begin(), ts.y.end(), 0) > 0;
    if (!have_scrap) throw std::invalid_argument("no products match the scrap label set");
    if (!have_finished) throw std::invalid_argument("no products match the finished label set");
    return ts;
}

double logistic_loglik(const Matrix& X, const std::vector<int>& y,
                       const std::vector<double>& weights, double intercept, double l2_lambda) {
    double ll = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double eta = linear_predictor(X[i], weights, intercept);
        // y*eta - log(1 + e^eta), evaluated stably.
        const double log1pe = eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
        ll += y[i] * eta - log1pe;
    }
    double penalty = 0.0;
    for (const double w : weights) penalty += w * w;
    return ll - 0.5 * l2_lambda * penalty;
}

std::vector<double> logistic_gradient(const Matrix& X, const std::vector<int>& y,
                                      const std::vector<double>& weights, double intercept,
                                      double l2_lambda) {
    const std::size_t d = weights.size();
    std::vector<double> g(d + 1, 0.0);
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double p = stats::sigmoid(linear_predictor(X[i], weights, intercept));
        const double r = y[i] - p;
        for (std::size_t j = 0; j < d; ++j) g[j] += r * X[i][j];
        g[d] += r;
    }
    for (std::size_t j = 0; j < d; ++j) g[j] -= l2_lambda * weights[j];
    return g;
}

WasteModel fit_logistic(const Matrix& X, const std::vector<int>& y, double l2_lambda,
                        int max_iter, double tol) {
    if (X.size() != y.size()) throw std::invalid_argument("fit_logistic: X/y size mismatch");
    if (X.size() < 2) throw std::invalid_argument("fit_logistic: need at least 2 rows");
    if (l2_lambda < 0.0) throw std::invalid_argument("fit_logistic: l2_lambda must be >= 0");
    const bool both = std::count(y.begin(), y.end(), 1) > 0 &&
                      std::count(y.begin(), y.end(), 0) > 0;
    if (!both) throw std::invalid_argument("fit_logistic: both classes must be present");

    const std::size_t n = X.size();
    const std::size_t d = X[0].size();

    WasteModel model;
    model.weights.assign(d, 0.0);
    model.l2_lambda = l2_lambda;

    double ll = logistic_loglik(X, y, model.weights, model.intercept, l2_lambda);

    for (int iter = 0; iter < max_iter; ++iter) {
        model.n_iter = iter + 1;
        const auto g = logistic_gradient(X, y, model.weights, model.intercept, l2_lambda);
        double gmax = 0.0;
        for (const double v : g) gmax = std::max(gmax, std::abs(v));
        if (gmax < tol) {
            model.converged = true;
            model.n_iter = iter;
            break;
        }

        // Newton direction: H dx = g with H = X^T W X + lambda (weights block).
        Matrix h(d + 1, std::vector<double>(d + 1, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            const double p = stats::sigmoid(linear_predictor(X[i], model.weights, model.intercept));
            const double w = std::max(p * (1.0 - p), 1e-12);
            for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = a; b < d; ++b) h[a][b] += w * X[i][a] * X[i][b];
                h[a][d] += w * X[i][a];
            }
            h[d][d] += w;
        }
        for (std::size_t a = 0; a < d; ++a) {
            h[a][a] += l2_lambda;
            for (std::size_t b = a + 1; b <= d; ++b) h[b][a] = h[a][b];
        }
        const auto step = solve_spd(std::move(h), g);

        // Step halving keeps the penalized log-likelihood non-decreasing.
        double scale = 1.0;
        bool improved = false;
        for (int half = 0; half < 50; ++half) {
            std::vector<double> w_try(d);
            for (std::size_t j = 0; j < d; ++j) w_try[j] = model.weights[j] + scale * step[j];
            const double b_try = model.intercept + scale * step[d];
            const double ll_try = logistic_loglik(X, y, w_try, b_try, l2_lambda);
            if (ll_try >= ll - 1e-12) {
                model.weights = std::move(w_try);
                model.intercept = b_try;
                ll = ll_try;
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if (!improved) break;  // no ascent direction left
    }

    // With no penalty the maximum likelihood estimate does not exist under
    // perfect separation: a fit that classifies every training point with
    // the correct sign has found a separating hyperplane, so the weights
    // only ever grow. Report non-convergence; the caller should use
    // l2_lambda > 0 (default 1e-3).
    if (l2_lambda == 0.0 && model.converged) {
        bool separates = true;
        for (std::size_t i = 0; i < n && separates; ++i) {
            const double eta = linear_predictor(X[i], model.weights, model.intercept);
            separates = (y[i] == 1 && eta > 0.0) || (y[i] == 0 && eta < 0.0);
        }
        if (separates) model.converged = false;
    }
    return model;
}

WasteModel fit_waste_model(const StandardizedMatrix& matrix, const LabelConfig& labels,
                           double l2_lambda, int max_iter, double tol) {
    const TrainingSet ts = build_training_set(matrix, labels);
    WasteModel model = fit_logistic(ts.X, ts.y, l2_lambda, max_iter, tol);
    model.feature_names = matrix.columns;
    model.baseline_means.assign(matrix.columns.size(), 0.0);
    for (const auto& row : ts.X)
        for (std::size_t j = 0; j < row.size(); ++j) model.baseline_means[j] += row[j];
    for (auto& m : model.baseline_means) m /= static_cast<double>(ts.X.size());
    return model;
}

double waste_score(const WasteModel& model, const std::vector<double>& z) {
    if (z.size() != model.weights.size())
        throw std::invalid_argument("waste_score: feature dimension mismatch");
    return stats::sigmoid(linear_predictor(z, model.weights, model.intercept));
}

std::vector<double> linear_shap(const WasteModel& model, const std::vector<double>& z) {
    if (z.size() != model.weights.size() || z.size() != model.baseline_means.size())
        throw std::invalid_argument("linear_shap: feature dimension mismatch");
    std::vector<double> shap(z.size());
    for (std::size_t j = 0; j < z.size(); ++j)
        shap[j] = model.weights[j] * (z[j] - model.baseline_means[j]);
    return shap;
}

TrendlineFit fit_trendline(const std::vector<FeatureVector>& features) {
    std::vector<double> log_kg, log_price;
    for (const auto& fv : features) {
        if (fv.avg_kg > 0.0 && fv.avg_price > 0.0) {
            log_kg.push_back(std::log(fv.avg_kg));
            log_price.push_back(std::log(fv.avg_price));
        }
    }
    if (log_kg.size() < 3)
        throw std::invalid_argument("fit_trendline: need at least 3 products with positive volume and price");
    const auto fit = stats::ols_fit(log_kg, log_price);
    return {fit.slope, fit.intercept, fit.r_squared, static_cast<int>(fit.n)};
}

double trendline_residual(const TrendlineFit& fit, const FeatureVector& fv) {
    if (!(fv.avg_kg > 0.0 && fv.avg_price > 0.0)) return std::nan("");
    return std::log(fv.avg_price) - (fit.intercept + fit.slope * std::log(fv.avg_kg));
}

QuadrantThresholds quadrant_thresholds(const std::vector<FeatureVector>& features) {
    if (features.empty()) throw std::invalid_argument("quadrant_thresholds: empty population");
    std::vector<double> log_kg, log_price;
    log_kg.reserve(features.size());
    log_price.reserve(features.size());
    for (const auto& fv : features) {
        log_kg.push_back(fv.log_avg_kg);
        log_price.push_back(fv.log_avg_price);
    }
    return {stats::median(std::move(log_kg)), stats::median(std::move(log_price))};
}

Quadrant classify_quadrant(const FeatureVector& fv, const QuadrantThresholds& thresholds) {
    const bool high_vol = fv.log_avg_kg >= thresholds.median_log_kg;
    const bool high_price = fv.log_avg_price >= thresholds.median_log_price;
    if (high_vol && high_price) return Quadrant::HighVolHighPrice;
    if (high_vol) return Quadrant::HighVolLowPrice;
    if (high_price) return Quadrant::LowVolHighPrice;
    return Quadrant::LowVolLowPrice;
}

double scrutiny_score(double waste, double price_trend_z) {
    return waste * stats::sigmoid(-price_trend_z);
}

}  // namespace wastesig
