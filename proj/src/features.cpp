#include "wastesig/features.hpp"

#include <cmath>
#include <stdexcept>

#include "wastesig/stats.hpp"

namespace wastesig {

const std::vector<std::string>& core_feature_names() {
    static const std::vector<std::string> names{"avg_kg", "avg_price", "price_volatility",
                                                "kg_trend", "price_trend"};
    return names;
}

const std::vector<std::string>& extended_feature_names() {
    static const std::vector<std::string> names{
        "avg_kg",      "avg_price",     "price_volatility",   "kg_trend", "price_trend",
        "log_avg_kg",  "log_avg_price", "ix_logkg_logprice",  "ix_trends"};
    return names;
}

double feature_value(const FeatureVector& fv, const std::string& name) {
    if (name == "avg_kg") return fv.avg_kg;
    if (name == "avg_price") return fv.avg_price;
    if (name == "price_volatility") return fv.price_volatility;
    if (name == "kg_trend") return fv.kg_trend;
    if (name == "price_trend") return fv.price_trend;
    if (name == "log_avg_kg") return fv.log_avg_kg;
    if (name == "log_avg_price") return fv.log_avg_price;
    if (name == "ix_logkg_logprice") return fv.ix_logkg_logprice;
    if (name == "ix_trends") return fv.ix_trends;
    throw std::invalid_argument("unknown feature: " + name);
}

std::optional<FeatureVector> compute_features(const ProductSeries& series) {
    std::vector<double> years_all, kgs;
    std::vector<double> years_priced, prices;
    for (const auto& p : series.points) {
        years_all.push_back(static_cast<double>(p.year));
        kgs.push_back(p.kg);
        if (p.unit_price) {
            years_priced.push_back(static_cast<double>(p.year));
            prices.push_back(*p.unit_price);
        }
    }
    if (prices.size() < 2) return std::nullopt;

    FeatureVector fv;
    fv.hs_code = series.hs_code;
    fv.avg_kg = stats::mean(kgs);
    fv.avg_price = stats::mean(prices);
    fv.price_volatility = stats::population_stddev(prices);
    fv.kg_trend = stats::ols_fit(years_all, kgs).slope;
    fv.price_trend = stats::ols_fit(years_priced, prices).slope;
    fv.log_avg_kg = std::log1p(fv.avg_kg);
    fv.log_avg_price = std::log1p(fv.avg_price);
    fv.ix_logkg_logprice = fv.log_avg_kg * fv.log_avg_price;
    fv.ix_trends = fv.kg_trend * fv.price_trend;
    fv.low_confidence_trend = years_all.size() == 2 || prices.size() == 2;
    return fv;
}

FeatureTable build_feature_table(const std::vector<ProductSeries>& series) {
    FeatureTable table;
    for (const auto& s : series) {
        if (auto fv = compute_features(s))
            table.vectors.push_back(std::move(*fv));
        else
            table.skipped.emplace_back(s.hs_code, "insufficient history");
    }
    return table;
}

std::size_t StandardizedMatrix::column_index(const std::string& name) const {
    for (std::size_t j = 0; j < columns.size(); ++j)
        if (columns[j] == name) return j;
    return static_cast<std::size_t>(-1);
}

StandardizedMatrix standardize(const std::vector<FeatureVector>& vectors,
                               const std::vector<std::string>& feature_set) {
    if (vectors.size() < 2)
        throw std::invalid_argument("standardize requires at least 2 feature vectors");

    StandardizedMatrix m;
    m.columns = feature_set;
    m.rows.reserve(vectors.size());
    for (const auto& fv : vectors) m.rows.push_back(fv.hs_code);

    const std::size_t n = vectors.size();
    const std::size_t d = feature_set.size();
    m.values.assign(n, std::vector<double>(d, 0.0));
    m.means.resize(d);
    m.stds.resize(d);
    m.constant.resize(d);

    for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = feature_value(vectors[i], feature_set[j]);
        m.means[j] = stats::mean(col);
        m.stds[j] = stats::population_stddev(col);
        m.constant[j] = m.stds[j] == 0.0;
        for (std::size_t i = 0; i < n; ++i)
            m.values[i][j] = m.constant[j] ? 0.0 : (col[i] - m.means[j]) / m.stds[j];
    }
    return m;
}

std::vector<double> standardize_row(const StandardizedMatrix& matrix, const FeatureVector& fv) {
    std::vector<double> z(matrix.columns.size(), 0.0);
    for (std::size_t j = 0; j < matrix.columns.size(); ++j) {
        if (matrix.constant[j]) continue;
        z[j] = (feature_value(fv, matrix.columns[j]) - matrix.means[j]) / matrix.stds[j];
    }
    return z;
}

}  // namespace wastesig
