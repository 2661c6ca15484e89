// forecast.hpp — linear unit-price extrapolation and downtrend ranking.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wastesig/types.hpp"

namespace wastesig {

// Hook for future forecasting methods; linear extrapolation is the only
// variant implemented.
enum class ForecastMethod { linear };

struct PriceForecast {
    std::string hs_code;
    double slope = 0.0;      // USD/kg per year
    double intercept = 0.0;  // USD/kg at calendar year 0 of the fit axis
    int horizon_year = 2030;
    std::vector<std::pair<int, double>> path;  // last observed year + 1 .. horizon
    std::optional<int> negative_cross_year;    // first path year with price < 0
};

// OLS line on (year, unit_price) extrapolated annually to the horizon.
// Negative predictions are the signal and are never clamped. Fewer than
// 2 priced years -> nullopt (the product is skipped).
std::optional<PriceForecast> forecast_price(const ProductSeries& series, int horizon_year,
                                            ForecastMethod method = ForecastMethod::linear);

// Sorted ascending by slope (steepest decline first), ties by hs_code; the
// first top_n returned.
std::vector<PriceForecast> rank_downtrends(std::vector<PriceForecast> forecasts,
                                           std::size_t top_n);

}  // namespace wastesig
