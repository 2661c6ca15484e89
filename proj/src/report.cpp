#include "wastesig/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "wastesig/config.hpp"

namespace wastesig {

using nlohmann::json;

namespace {

std::string fixed4(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
}

json forecast_to_json_obj(const PriceForecast& fc) {
    json path = json::array();
    for (const auto& [year, price] : fc.path) path.push_back({{"year", year}, {"price", price}});
    json obj{{"hs_code", fc.hs_code},
             {"slope", fc.slope},
             {"intercept", fc.intercept},
             {"horizon_year", fc.horizon_year},
             {"path", path}};
    if (fc.negative_cross_year)
        obj["negative_cross_year"] = *fc.negative_cross_year;
    else
        obj["negative_cross_year"] = nullptr;
    return obj;
}

}  // namespace

Dashboard build_dashboard(const std::string& hs_code, const DashboardInputs& in) {
    std::size_t row = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < in.assignments.size(); ++i)
        if (in.assignments[i].hs_code == hs_code) {
            row = i;
            break;
        }
    if (row == static_cast<std::size_t>(-1))
        throw std::invalid_argument("not modeled: " + hs_code);

    Dashboard d;
    d.hs_code = hs_code;
    d.tier = in.assignments[row].tier;
    d.quadrant = in.profiles[row].quadrant;
    d.waste_score = in.profiles[row].waste_score;
    d.scrutiny_score = in.profiles[row].scrutiny_score;
    d.log_kg = in.features[row].log_avg_kg;
    d.log_price = in.features[row].log_avg_price;
    d.thresholds = in.thresholds;

    const auto fc = std::find_if(in.forecasts.begin(), in.forecasts.end(),
                                 [&](const PriceForecast& f) { return f.hs_code == hs_code; });
    if (fc != in.forecasts.end()) d.forecast = *fc;

    // Partner ranking by record count (or traded value behind the flag),
    // ties by ISO3 ascending.
    std::map<std::string, double> weight;
    for (const auto& rec : in.records)
        if (rec.hs_code == hs_code)
            weight[rec.partner] += in.value_weighted_partners ? rec.value_usd : 1.0;
    std::vector<std::pair<std::string, double>> ranked(weight.begin(), weight.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > static_cast<std::size_t>(in.top_partners_n))
        ranked.resize(static_cast<std::size_t>(in.top_partners_n));
    for (const auto& [partner, w] : ranked)
        d.top_partners.emplace_back(partner, static_cast<int>(std::llround(w)));

    bool found = false;
    const double rate = tariff_for(in.tariffs, hs_code, &found);
    if (found) d.tariff_rate = rate;

    // Top three SHAP attributions by magnitude; ties keep feature order.
    const auto& shap = in.profiles[row].shap;
    std::vector<std::size_t> order(shap.size());
    for (std::size_t j = 0; j < shap.size(); ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(shap[a]) > std::abs(shap[b]);
    });
    for (std::size_t j = 0; j < order.size() && j < 3; ++j)
        d.shap_top.emplace_back(in.model_feature_names[order[j]], shap[order[j]]);

    return d;
}

std::vector<CountryHotspot> country_hotspots(const std::vector<RiskProfile>& profiles,
                                             const std::vector<TradeRecord>& records) {
    std::map<std::string, double> score_by_hs;
    for (const auto& p : profiles) score_by_hs[p.hs_code] = p.waste_score;

    std::map<std::string, std::set<std::string>> products_by_partner;
    for (const auto& rec : records)
        if (score_by_hs.count(rec.hs_code)) products_by_partner[rec.partner].insert(rec.hs_code);

    std::vector<CountryHotspot> out;
    for (const auto& [partner, products] : products_by_partner) {
        CountryHotspot h;
        h.partner = partner;
        h.n_products = static_cast<int>(products.size());
        for (const auto& hs : products) h.mean_waste_score += score_by_hs.at(hs);
        h.mean_waste_score /= static_cast<double>(products.size());
        out.push_back(std::move(h));
    }
    std::sort(out.begin(), out.end(), [](const CountryHotspot& a, const CountryHotspot& b) {
        if (a.mean_waste_score != b.mean_waste_score)
            return a.mean_waste_score > b.mean_waste_score;
        return a.partner < b.partner;
    });
    return out;
}

std::vector<TreemapDatum> treemap(const std::vector<SegmentAssignment>& assignments) {
    if (assignments.empty()) throw std::invalid_argument("nothing to report");
    const Tier tiers[] = {Tier::Outlier, Tier::HighValueNiche, Tier::Core, Tier::SuperCore};
    std::vector<TreemapDatum> out;
    for (const Tier t : tiers) {
        TreemapDatum d;
        d.tier = to_string(t);
        d.count = static_cast<int>(std::count_if(
            assignments.begin(), assignments.end(),
            [&](const SegmentAssignment& a) { return a.tier == t; }));
        d.share = static_cast<double>(d.count) / static_cast<double>(assignments.size());
        out.push_back(std::move(d));
    }
    return out;
}

std::string render_svg(const Dashboard& d) {
    std::string s;
    s.reserve(8192);
    auto line = [&](const std::string& t) {
        s += t;
        s += '\n';
    };

    line(R"(<svg xmlns="http://www.w3.org/2000/svg" width="960" height="720" viewBox="0 0 960 720">)");
    line(R"(<rect x="0" y="0" width="960" height="720" fill="#fafafa"/>)");
    line(R"(<text x="24" y="40" font-family="monospace" font-size="24">E-Waste Risk Dashboard: HS )" +
         d.hs_code + "</text>");
    line(R"(<text x="24" y="64" font-family="monospace" font-size="14">tier=)" +
         to_string(d.tier) + " quadrant=" + to_string(d.quadrant) + "</text>");

    // Quadrant panel (left): median cross with the product dot.
    line(R"(<rect x="24" y="88" width="400" height="280" fill="#ffffff" stroke="#333333"/>)");
    line(R"(<line x1="224" y1="88" x2="224" y2="368" stroke="#999999"/>)");
    line(R"(<line x1="24" y1="228" x2="424" y2="228" stroke="#999999"/>)");
    // Position relative to the medians, clamped into the panel.
    const double dx = std::clamp((d.log_kg - d.thresholds.median_log_kg) / 4.0, -1.0, 1.0);
    const double dy = std::clamp((d.log_price - d.thresholds.median_log_price) / 4.0, -1.0, 1.0);
    const double px = 224.0 + dx * 190.0;
    const double py = 228.0 - dy * 130.0;
    line("<circle cx=\"" + fixed4(px) + "\" cy=\"" + fixed4(py) +
         R"(" r="7" fill="#c0392b"/>)");
    line(R"(<text x="28" y="104" font-family="monospace" font-size="11">ln(1+price) vs ln(1+kg), medians crossed</text>)");
    line(R"(<text x="28" y="384" font-family="monospace" font-size="12">log_kg=)" +
         fixed4(d.log_kg) + " log_price=" + fixed4(d.log_price) + "</text>");

    // Score gauges (right).
    auto gauge = [&](double value, double y, const std::string& label) {
        line("<rect x=\"470\" y=\"" + fixed4(y) +
             R"(" width="300" height="22" fill="#eeeeee" stroke="#333333"/>)");
        line("<rect x=\"470\" y=\"" + fixed4(y) + "\" width=\"" +
             fixed4(300.0 * std::clamp(value, 0.0, 1.0)) +
             R"(" height="22" fill="#c0392b"/>)");
        line("<text x=\"780\" y=\"" + fixed4(y + 17.0) +
             R"(" font-family="monospace" font-size="14">)" + label + " " + fixed4(value) +
             "</text>");
    };
    gauge(d.waste_score, 100.0, "waste");
    gauge(d.scrutiny_score, 140.0, "scrutiny");
    if (d.tariff_rate)
        line(R"(<text x="470" y="196" font-family="monospace" font-size="14">tariff )" +
             fixed4(*d.tariff_rate * 100.0) + "%</text>");
    else
        line(R"(<text x="470" y="196" font-family="monospace" font-size="14">tariff n/a</text>)");

    // SHAP drivers.
    double ty = 224.0;
    for (const auto& [name, value] : d.shap_top) {
        line("<text x=\"470\" y=\"" + fixed4(ty) +
             R"(" font-family="monospace" font-size="12">shap )" + name + " " + fixed4(value) +
             "</text>");
        ty += 18.0;
    }

    // Forecast panel (bottom): price line across the path with the negative
    // region shaded from the crossing year.
    line(R"(<rect x="24" y="420" width="912" height="256" fill="#ffffff" stroke="#333333"/>)");
    if (d.forecast.path.size() >= 2) {
        double lo = 0.0, hi = 0.0;
        for (const auto& [year, price] : d.forecast.path) {
            lo = std::min(lo, price);
            hi = std::max(hi, price);
        }
        if (hi == lo) hi = lo + 1.0;
        const int y0 = d.forecast.path.front().first;
        const int y1 = d.forecast.path.back().first;
        auto sx = [&](int year) {
            return 40.0 + 880.0 * static_cast<double>(year - y0) / std::max(1, y1 - y0);
        };
        auto sy = [&](double price) { return 660.0 - 220.0 * (price - lo) / (hi - lo); };

        if (d.forecast.negative_cross_year) {
            const double x = sx(*d.forecast.negative_cross_year);
            line("<rect x=\"" + fixed4(x) + "\" y=\"424\" width=\"" +
                 fixed4(920.0 - x + 16.0) + R"(" height="248" fill="#f5d0cb"/>)");
            line("<text x=\"" + fixed4(x + 4.0) +
                 R"(" y="440" font-family="monospace" font-size="12">negative from )" +
                 std::to_string(*d.forecast.negative_cross_year) + "</text>");
        }
        if (lo < 0.0 && hi > 0.0)
            line(R"(<line x1="40" y1=")" + fixed4(sy(0.0)) + R"(" x2="920" y2=")" +
                 fixed4(sy(0.0)) + R"(" stroke="#999999" stroke-dasharray="4 4"/>)");

        std::string points;
        for (const auto& [year, price] : d.forecast.path)
            points += fixed4(sx(year)) + "," + fixed4(sy(price)) + " ";
        line(R"(<polyline fill="none" stroke="#2c3e50" stroke-width="2" points=")" + points +
             "\"/>");
        line(R"(<text x="28" y="700" font-family="monospace" font-size="12">forecast )" +
             std::to_string(y0) + "-" + std::to_string(y1) + " slope=" + fixed4(d.forecast.slope) +
             "</text>");
    } else {
        line(R"(<text x="28" y="440" font-family="monospace" font-size="12">no forecast available</text>)");
    }

    // Partner bars (middle right).
    double by = 300.0;
    int max_count = 1;
    for (const auto& [partner, count] : d.top_partners) max_count = std::max(max_count, count);
    for (const auto& [partner, count] : d.top_partners) {
        line("<rect x=\"520\" y=\"" + fixed4(by) + "\" width=\"" +
             fixed4(240.0 * count / max_count) + R"(" height="14" fill="#2980b9"/>)");
        line("<text x=\"470\" y=\"" + fixed4(by + 12.0) +
             R"(" font-family="monospace" font-size="12">)" + partner + " " +
             std::to_string(count) + "</text>");
        by += 22.0;
    }

    line("</svg>");
    return s;
}

std::string dashboard_to_json(const Dashboard& d) {
    json obj{{"hs_code", d.hs_code},
             {"tier", to_string(d.tier)},
             {"quadrant", to_string(d.quadrant)},
             {"waste_score", d.waste_score},
             {"scrutiny_score", d.scrutiny_score},
             {"log_kg", d.log_kg},
             {"log_price", d.log_price},
             {"median_log_kg", d.thresholds.median_log_kg},
             {"median_log_price", d.thresholds.median_log_price},
             {"forecast", forecast_to_json_obj(d.forecast)}};
    obj["tariff_rate"] = d.tariff_rate ? json(*d.tariff_rate) : json(nullptr);
    json partners = json::array();
    for (const auto& [partner, count] : d.top_partners)
        partners.push_back({{"partner", partner}, {"records", count}});
    obj["top_partners"] = partners;
    json shap = json::array();
    for (const auto& [name, value] : d.shap_top)
        shap.push_back({{"feature", name}, {"attribution", value}});
    obj["shap_top"] = shap;
    return obj.dump(2) + "\n";
}

std::string hotspots_to_json(const std::vector<CountryHotspot>& hotspots) {
    json arr = json::array();
    for (const auto& h : hotspots)
        arr.push_back({{"partner", h.partner},
                       {"mean_waste_score", h.mean_waste_score},
                       {"n_products", h.n_products}});
    return arr.dump(2) + "\n";
}

std::string treemap_to_json(const std::vector<TreemapDatum>& data) {
    json arr = json::array();
    for (const auto& d : data)
        arr.push_back({{"tier", d.tier}, {"count", d.count}, {"share", d.share}});
    return arr.dump(2) + "\n";
}

}  // namespace wastesig
