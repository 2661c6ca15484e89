#include "wastesig/forecast.hpp"

#include <algorithm>
#include <stdexcept>

#include "wastesig/stats.hpp"

namespace wastesig {

std::optional<PriceForecast> forecast_price(const ProductSeries& series, int horizon_year,
                                            ForecastMethod method) {
    (void)method;  // single variant
    std::vector<double> years, prices;
    for (const auto& p : series.points) {
        if (p.unit_price) {
            years.push_back(static_cast<double>(p.year));
            prices.push_back(*p.unit_price);
        }
    }
    if (years.size() < 2) return std::nullopt;

    const int last_year = static_cast<int>(years.back());
    if (horizon_year <= last_year)
        throw std::invalid_argument("forecast horizon must be after the last observed year");

    const auto fit = stats::ols_fit(years, prices);

    PriceForecast fc;
    fc.hs_code = series.hs_code;
    fc.slope = fit.slope;
    fc.intercept = fit.intercept;
    fc.horizon_year = horizon_year;
    for (int year = last_year + 1; year <= horizon_year; ++year) {
        const double predicted = fit.intercept + fit.slope * static_cast<double>(year);
        fc.path.emplace_back(year, predicted);
        if (!fc.negative_cross_year && predicted < 0.0) fc.negative_cross_year = year;
    }
    return fc;
}

std::vector<PriceForecast> rank_downtrends(std::vector<PriceForecast> forecasts,
                                           std::size_t top_n) {
    std::sort(forecasts.begin(), forecasts.end(),
              [](const PriceForecast& a, const PriceForecast& b) {
                  if (a.slope != b.slope) return a.slope < b.slope;
                  return a.hs_code < b.hs_code;
              });
    if (forecasts.size() > top_n) forecasts.resize(top_n);
    return forecasts;
}

}  // namespace wastesig
