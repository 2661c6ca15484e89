#include <doctest.h>

#include <cmath>

#include "wastesig/stats.hpp"

using namespace wastesig;

TEST_CASE("mean and population stddev") {
    CHECK(stats::mean({2, 4, 6}) == doctest::Approx(4.0));
    // population std of {2,4,6} = sqrt(8/3)
    CHECK(stats::population_stddev({2, 4, 6}) == doctest::Approx(std::sqrt(8.0 / 3.0)));
    CHECK(stats::population_stddev({5, 5, 5}) == doctest::Approx(0.0));
}

TEST_CASE("quantile uses linear interpolation between order statistics") {
    std::vector<double> v;
    for (int i = 1; i <= 100; ++i) v.push_back(i);
    // h = p(n-1): p1 -> 1 + 0.99, p99 -> 99 + 0.01
    CHECK(stats::quantile(v, 0.01) == doctest::Approx(1.99));
    CHECK(stats::quantile(v, 0.99) == doctest::Approx(99.01));
    CHECK(stats::quantile(v, 0.0) == doctest::Approx(1.0));
    CHECK(stats::quantile(v, 1.0) == doctest::Approx(100.0));
    CHECK(stats::median({1.0, 2.0, 10.0}) == doctest::Approx(2.0));
    CHECK(stats::median({1.0, 2.0, 3.0, 10.0}) == doctest::Approx(2.5));
}

TEST_CASE("ols slope on three hand-checked points") {
    // unit_price {2020:4, 2021:1, 2022:1}: slope = sum(dx dy)/sum(dx^2) = -1.5
    const auto fit = stats::ols_fit({2020, 2021, 2022}, {4, 1, 1});
    CHECK(fit.slope == doctest::Approx(-1.5));

    // exact line
    const auto exact = stats::ols_fit({2020, 2021, 2022}, {100, 200, 300});
    CHECK(exact.slope == doctest::Approx(100.0));
    CHECK(exact.r_squared == doctest::Approx(1.0));

    // constant y: flat perfect fit
    const auto flat = stats::ols_fit({1, 2, 3}, {5, 5, 5});
    CHECK(flat.slope == doctest::Approx(0.0));
    CHECK(flat.r_squared == doctest::Approx(1.0));
}

TEST_CASE("ols slope is invariant to shifting the year axis") {
    const std::vector<double> y{3.0, 7.0, 4.0, 9.0, 6.0};
    const auto a = stats::ols_fit({2020, 2021, 2022, 2023, 2024}, y);
    const auto b = stats::ols_fit({0, 1, 2, 3, 4}, y);
    CHECK(a.slope == doctest::Approx(b.slope).epsilon(1e-12));
}

TEST_CASE("sigmoid and logit") {
    CHECK(stats::sigmoid(0.0) == doctest::Approx(0.5));
    CHECK(stats::sigmoid(-800.0) == doctest::Approx(0.0));
    CHECK(stats::sigmoid(800.0) == doctest::Approx(1.0));
    CHECK(stats::logit(0.5) == doctest::Approx(0.0));
    CHECK(stats::sigmoid(stats::logit(0.73)) == doctest::Approx(0.73));
}
