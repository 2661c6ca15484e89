#include "wastesig/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wastesig::stats {

double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean of empty vector");
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double population_stddev(const std::vector<double>& v) {
    const double m = mean(v);
    double ss = 0.0;
    for (const double x : v) {
        const double d = x - m;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(v.size()));
}

double quantile(std::vector<double> v, double p) {
    if (v.empty()) throw std::invalid_argument("quantile of empty vector");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile p outside [0, 1]");
    std::sort(v.begin(), v.end());
    const double h = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("ols_fit: size mismatch");
    if (x.size() < 2) throw std::invalid_argument("ols_fit: need at least 2 points");
    const double xm = mean(x);
    const double ym = mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - xm;
        sxx += dx * dx;
        sxy += dx * (y[i] - ym);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols_fit: constant x");

    LinearFit fit;
    fit.n = x.size();
    fit.slope = sxy / sxx;
    fit.intercept = ym - fit.slope * xm;

    double sst = 0.0, ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dy = y[i] - ym;
        sst += dy * dy;
        const double resid = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += resid * resid;
    }
    fit.r_squared = sst > 0.0 ? std::clamp(1.0 - ssr / sst, 0.0, 1.0) : 1.0;
    return fit;
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double logit(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("logit argument outside (0, 1)");
    return std::log(p / (1.0 - p));
}

}  // namespace wastesig::stats
