#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "wastesig/features.hpp"
#include "wastesig/rng.hpp"

using namespace wastesig;

namespace {

ProductSeries series_from_prices(const std::vector<std::pair<int, double>>& prices,
                                 double kg = 100.0) {
    ProductSeries s;
    s.hs_code = "392010";
    for (const auto& [year, price] : prices) {
        SeriesPoint p;
        p.year = year;
        p.kg = kg;
        p.value_usd = price * kg;
        p.unit_price = price;
        s.points.push_back(p);
    }
    return s;
}

}  // namespace

TEST_CASE("compute_features on hand-checked series") {
    SUBCASE("constant prices: zero volatility and trend") {
        const auto fv = compute_features(series_from_prices({{2020, 10}, {2021, 10}, {2022, 10}}));
        REQUIRE(fv);
        CHECK(fv->avg_price == doctest::Approx(10));
        CHECK(fv->price_volatility == doctest::Approx(0));
        CHECK(fv->price_trend == doctest::Approx(0));
    }

    SUBCASE("exact volume line") {
        ProductSeries s;
        s.hs_code = "392010";
        for (const auto& [year, kg] : std::vector<std::pair<int, double>>{
                 {2020, 100}, {2021, 200}, {2022, 300}}) {
            SeriesPoint p;
            p.year = year;
            p.kg = kg;
            p.value_usd = kg * 5;
            p.unit_price = 5;
            s.points.push_back(p);
        }
        const auto fv = compute_features(s);
        REQUIRE(fv);
        CHECK(fv->kg_trend == doctest::Approx(100));
        CHECK(fv->avg_kg == doctest::Approx(200));
    }

    SUBCASE("hand OLS on three points") {
        const auto fv = compute_features(series_from_prices({{2020, 4}, {2021, 1}, {2022, 1}}));
        REQUIRE(fv);
        CHECK(fv->price_trend == doctest::Approx(-1.5));
    }

    SUBCASE("log and interaction terms follow the pinned formulas") {
        const auto fv = compute_features(series_from_prices({{2020, 4}, {2021, 6}}, 50.0));
        REQUIRE(fv);
        CHECK(fv->log_avg_kg == doctest::Approx(std::log1p(fv->avg_kg)));
        CHECK(fv->log_avg_price == doctest::Approx(std::log1p(fv->avg_price)));
        CHECK(fv->ix_logkg_logprice == doctest::Approx(fv->log_avg_kg * fv->log_avg_price));
        CHECK(fv->ix_trends == doctest::Approx(fv->kg_trend * fv->price_trend));
        CHECK(fv->low_confidence_trend);
    }

    SUBCASE("fewer than two priced years is excluded") {
        CHECK_FALSE(compute_features(series_from_prices({{2020, 10}})));
        FeatureTable table = build_feature_table({series_from_prices({{2020, 10}})});
        REQUIRE(table.skipped.size() == 1);
        CHECK(table.skipped[0].second == "insufficient history");
    }
}

TEST_CASE("price volatility is scale-equivariant") {
    Rng rng(7);
    std::vector<std::pair<int, double>> prices;
    for (int y = 2020; y <= 2024; ++y) prices.emplace_back(y, 10.0 + 3.0 * rng.uniform01());
    const auto base = compute_features(series_from_prices(prices));
    for (auto& [y, p] : prices) p *= 4.0;
    const auto scaled = compute_features(series_from_prices(prices));
    REQUIRE(base);
    REQUIRE(scaled);
    CHECK(scaled->price_volatility == doctest::Approx(4.0 * base->price_volatility));
}

TEST_CASE("standardize produces z-scores with retained statistics") {
    std::vector<FeatureVector> fvs(3);
    fvs[0].hs_code = "a";
    fvs[1].hs_code = "b";
    fvs[2].hs_code = "c";
    fvs[0].avg_kg = 2;
    fvs[1].avg_kg = 4;
    fvs[2].avg_kg = 6;
    fvs[0].avg_price = 5;
    fvs[1].avg_price = 5;
    fvs[2].avg_price = 5;

    const auto m = standardize(fvs, {"avg_kg", "avg_price"});
    // column {2,4,6}: mean 4, population std sqrt(8/3), z = ±1.2247, 0
    CHECK(m.values[0][0] == doctest::Approx(-1.224744871));
    CHECK(m.values[1][0] == doctest::Approx(0.0));
    CHECK(m.values[2][0] == doctest::Approx(1.224744871));
    // constant column: all zeros, flagged
    CHECK(m.constant[1]);
    for (std::size_t i = 0; i < 3; ++i) CHECK(m.values[i][1] == doctest::Approx(0.0));

    SUBCASE("column statistics reconstruct the original values") {
        for (std::size_t i = 0; i < 3; ++i) {
            const double reconstructed = m.values[i][0] * m.stds[0] + m.means[0];
            CHECK(reconstructed == doctest::Approx(fvs[i].avg_kg).epsilon(1e-9));
        }
    }

    SUBCASE("two-point symmetry") {
        std::vector<FeatureVector> two(2);
        two[0].avg_kg = 1;
        two[1].avg_kg = 3;
        const auto mm = standardize(two, {"avg_kg"});
        CHECK(mm.values[0][0] == doctest::Approx(-1.0));
        CHECK(mm.values[1][0] == doctest::Approx(1.0));
    }

    SUBCASE("fewer than 2 vectors is fatal") {
        CHECK_THROWS_AS((void)standardize({fvs[0]}, {"avg_kg"}), std::invalid_argument);
    }
}

TEST_CASE("standardize is invariant to positive affine rescaling") {
    Rng rng(11);
    std::vector<FeatureVector> fvs(10), scaled(10);
    for (std::size_t i = 0; i < fvs.size(); ++i) {
        fvs[i].avg_kg = 100.0 * rng.uniform01();
        scaled[i].avg_kg = 3.5 * fvs[i].avg_kg + 42.0;
    }
    const auto a = standardize(fvs, {"avg_kg"});
    const auto b = standardize(scaled, {"avg_kg"});
    for (std::size_t i = 0; i < fvs.size(); ++i)
        CHECK(a.values[i][0] == doctest::Approx(b.values[i][0]).epsilon(1e-9));
}

TEST_CASE("standardized columns have mean 0 and sd 1") {
    Rng rng(13);
    std::vector<FeatureVector> fvs(50);
    for (auto& fv : fvs) {
        fv.avg_kg = rng.normal(1000, 50);
        fv.avg_price = rng.normal(20, 3);
    }
    const auto m = standardize(fvs, {"avg_kg", "avg_price"});
    for (std::size_t j = 0; j < 2; ++j) {
        double mean = 0, ss = 0;
        for (std::size_t i = 0; i < fvs.size(); ++i) mean += m.values[i][j];
        mean /= double(fvs.size());
        for (std::size_t i = 0; i < fvs.size(); ++i) {
            const double d = m.values[i][j] - mean;
            ss += d * d;
        }
        CHECK(std::abs(mean) < 1e-9);
        CHECK(std::abs(std::sqrt(ss / double(fvs.size())) - 1.0) < 1e-9);
    }
}

TEST_CASE("standardize_row maps an unseen product into the fitted z-space") {
    std::vector<FeatureVector> fvs(3);
    fvs[0].avg_kg = 2;
    fvs[1].avg_kg = 4;
    fvs[2].avg_kg = 6;
    const auto m = standardize(fvs, {"avg_kg"});
    FeatureVector unseen;
    unseen.avg_kg = 4;
    CHECK(standardize_row(m, unseen)[0] == doctest::Approx(0.0));
    unseen.avg_kg = 6;
    CHECK(standardize_row(m, unseen)[0] == doctest::Approx(m.values[2][0]));
}
