// stats.hpp — shared numeric helpers. One OLS definition serves both the
// feature trends and the price forecasts so the two never drift apart.
#pragma once

#include <cstddef>
#include <vector>

namespace wastesig::stats {

double mean(const std::vector<double>& v);

// Population (divide-by-n) standard deviation.
double population_stddev(const std::vector<double>& v);

// Linear-interpolation quantile over the order statistics (the pinned
// definition: h = p * (n - 1), interpolate between floor(h) and ceil(h)).
// p must be in [0, 1]; the input need not be sorted.
double quantile(std::vector<double> v, double p);

double median(std::vector<double> v);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n = 0;
};

// OLS of y on x. Requires n >= 2 and non-constant x. A constant y gives a
// perfect flat fit (r_squared = 1).
LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

// Numerically stable logistic function.
double sigmoid(double x);

double logit(double p);

}  // namespace wastesig::stats
