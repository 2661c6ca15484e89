#include <doctest.h>

#include <stdexcept>

#include "wastesig/report.hpp"

using namespace wastesig;

namespace {

RiskProfile profile(const std::string& hs, double score) {
    RiskProfile p;
    p.hs_code = hs;
    p.waste_score = score;
    return p;
}

TradeRecord record(const std::string& hs, const std::string& partner) {
    TradeRecord r;
    r.hs_code = hs;
    r.partner = partner;
    r.year = 2021;
    r.flow = Flow::exports;
    return r;
}

}  // namespace

TEST_CASE("country_hotspots averages distinct products per partner") {
    const std::vector<RiskProfile> profiles{profile("a00000", 0.2), profile("b00000", 0.8),
                                            profile("c00000", 0.9)};
    std::vector<TradeRecord> records{record("a00000", "JPN"), record("b00000", "JPN"),
                                     record("b00000", "JPN"),  // duplicate record, one product
                                     record("c00000", "USA")};

    const auto hotspots = country_hotspots(profiles, records);
    REQUIRE(hotspots.size() == 2);
    CHECK(hotspots[0].partner == "USA");
    CHECK(hotspots[0].mean_waste_score == doctest::Approx(0.9));
    CHECK(hotspots[0].n_products == 1);
    CHECK(hotspots[1].partner == "JPN");
    CHECK(hotspots[1].mean_waste_score == doctest::Approx(0.5));
    CHECK(hotspots[1].n_products == 2);

    SUBCASE("aggregation is local: removing one partner's records leaves others unchanged") {
        std::vector<TradeRecord> fewer{record("a00000", "JPN"), record("b00000", "JPN")};
        const auto again = country_hotspots(profiles, fewer);
        REQUIRE(again.size() == 1);
        CHECK(again[0].mean_waste_score == doctest::Approx(0.5));
    }

    SUBCASE("unmodeled products are ignored") {
        records.push_back(record("zzzzzz", "DEU"));
        const auto again = country_hotspots(profiles, records);
        CHECK(again.size() == 2);
    }
}

TEST_CASE("treemap counts and shares") {
    std::vector<SegmentAssignment> assignments(10);
    for (std::size_t i = 0; i < 10; ++i) {
        assignments[i].hs_code = "p" + std::to_string(i);
        assignments[i].tier = i < 7 ? Tier::SuperCore : i < 9 ? Tier::Core : Tier::Outlier;
    }
    const auto data = treemap(assignments);
    REQUIRE(data.size() == 4);  // zero-count tiers included
    double total_share = 0;
    int total_count = 0;
    for (const auto& d : data) {
        total_share += d.share;
        total_count += d.count;
        if (d.tier == "HighValueNiche") CHECK(d.count == 0);
        if (d.tier == "SuperCore") CHECK(d.share == doctest::Approx(0.7));
    }
    CHECK(total_share == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(total_count == 10);

    SUBCASE("single-tier input") {
        for (auto& a : assignments) a.tier = Tier::Core;
        const auto single = treemap(assignments);
        for (const auto& d : single)
            CHECK(d.share == doctest::Approx(d.tier == "Core" ? 1.0 : 0.0));
    }

    SUBCASE("empty input is fatal") {
        CHECK_THROWS_WITH_AS((void)treemap({}), "nothing to report", std::invalid_argument);
    }
}

TEST_CASE("build_dashboard assembles pass-through values") {
    std::vector<SegmentAssignment> assignments(2);
    assignments[0].hs_code = "720410";
    assignments[0].tier = Tier::SuperCore;
    assignments[1].hs_code = "854231";
    assignments[1].tier = Tier::HighValueNiche;

    std::vector<RiskProfile> profiles{profile("720410", 0.91), profile("854231", 0.05)};
    profiles[0].shap = {0.5, -2.0, 0.1};
    profiles[0].quadrant = Quadrant::HighVolLowPrice;
    profiles[0].scrutiny_score = 0.77;
    profiles[1].shap = {0.0, 1.0, 0.0};

    std::vector<FeatureVector> features(2);
    features[0].hs_code = "720410";
    features[0].log_avg_kg = 9.0;
    features[0].log_avg_price = 2.0;
    features[1].hs_code = "854231";

    std::vector<std::string> names{"avg_kg", "avg_price", "price_trend"};

    std::vector<PriceForecast> forecasts(1);
    forecasts[0].hs_code = "720410";
    forecasts[0].slope = -1.0;
    forecasts[0].horizon_year = 2030;
    for (int y = 2025; y <= 2030; ++y)
        forecasts[0].path.emplace_back(y, 10.0 - (y - 2020));
    forecasts[0].negative_cross_year = 2031;

    std::vector<TradeRecord> records{record("720410", "JPN"), record("720410", "JPN"),
                                     record("720410", "USA"), record("720410", "CHN"),
                                     record("720410", "USA")};

    std::map<std::string, double> tariffs{{"7204", 0.05}, {"8542", 0.0}};
    DashboardInputs in{assignments, profiles, features, names,
                       forecasts,   records,  {5.0, 3.0}, tariffs,
                       2,           false};

    const auto d = build_dashboard("720410", in);
    CHECK(d.tier == Tier::SuperCore);
    CHECK(d.waste_score == doctest::Approx(0.91));
    CHECK(d.scrutiny_score == doctest::Approx(0.77));
    REQUIRE(d.tariff_rate);
    CHECK(*d.tariff_rate == doctest::Approx(0.05));
    // top partners by record count, ties by ISO3, top 2
    REQUIRE(d.top_partners.size() == 2);
    CHECK(d.top_partners[0] == std::pair<std::string, int>{"JPN", 2});
    CHECK(d.top_partners[1] == std::pair<std::string, int>{"USA", 2});
    // top shap by |attribution|
    REQUIRE(d.shap_top.size() == 3);
    CHECK(d.shap_top[0].first == "avg_price");
    CHECK(d.shap_top[0].second == doctest::Approx(-2.0));

    SUBCASE("unknown hs code is fatal") {
        CHECK_THROWS_AS((void)build_dashboard("999999", in), std::invalid_argument);
    }

    SUBCASE("svg output is deterministic and self-contained") {
        const auto svg1 = render_svg(d);
        const auto svg2 = render_svg(d);
        CHECK(svg1 == svg2);
        CHECK(svg1.find("<svg") == 0);
        CHECK(svg1.find("http://") != std::string::npos);  // xmlns only
        CHECK(svg1.find("href") == std::string::npos);     // no external references
        CHECK(svg1.find("0.9100") != std::string::npos);   // 4-decimal score label
        CHECK(svg1.find("5.0000%") != std::string::npos);  // tariff
    }

    SUBCASE("gauge label formatting pins 4 decimals") {
        auto d2 = d;
        d2.waste_score = 0.52;
        const auto svg = render_svg(d2);
        CHECK(svg.find("0.5200") != std::string::npos);
    }

    SUBCASE("negative forecast region is shaded from the crossing year") {
        auto d2 = d;
        d2.forecast.negative_cross_year = 2027;
        const auto svg = render_svg(d2);
        CHECK(svg.find("negative from 2027") != std::string::npos);
        auto d3 = d;
        d3.forecast.negative_cross_year.reset();
        CHECK(render_svg(d3).find("negative from") == std::string::npos);
    }
}
