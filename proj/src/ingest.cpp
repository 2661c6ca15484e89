#include "wastesig/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "wastesig/dsv.hpp"
#include "wastesig/stats.hpp"

namespace wastesig {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    if (!std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<int> parse_year(const std::string& s) {
    if (s.empty()) return std::nullopt;
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

// Column index per canonical name, or npos when absent.
std::size_t find_column(const std::vector<std::string>& header, const std::string& canonical,
                        const ParseOptions& options) {
    std::vector<std::string> names{canonical};
    if (const auto it = options.aliases.find(canonical); it != options.aliases.end())
        names.insert(names.end(), it->second.begin(), it->second.end());
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string h = lower(header[i]);
        for (const auto& name : names)
            if (h == lower(name)) return i;
    }
    return static_cast<std::size_t>(-1);
}

void recompute_unit_price(SeriesPoint& p) {
    if (p.kg > 0.0)
        p.unit_price = p.value_usd / p.kg;
    else
        p.unit_price.reset();
}

}  // namespace

std::map<std::string, std::vector<std::string>> ParseOptions::default_aliases() {
    return {
        {"hs_code", {"hs", "hscode", "commodity_code", "cmdcode"}},
        {"year", {"period", "refyear"}},
        {"partner", {"partner_iso", "partneriso", "country"}},
        {"flow", {"flow_desc", "trade_flow", "flowdesc"}},
        {"value", {"value_usd", "trade_value", "primaryvalue", "fobvalue"}},
        {"mass", {"kg", "net_weight", "netweight", "netwgt", "weight"}},
        {"mass_unit", {"unit", "weight_unit", "qtyunitabbr"}},
    };
}

ParseResult parse_records(std::string_view content, const ParseOptions& options) {
    const dsv::Table table = dsv::read(content, options.delimiter);

    const std::size_t npos = static_cast<std::size_t>(-1);
    struct Cols {
        std::size_t hs, year, partner, flow, value, mass, unit;
    } cols{};
    cols.hs = find_column(table.header, "hs_code", options);
    cols.year = find_column(table.header, "year", options);
    cols.partner = find_column(table.header, "partner", options);
    cols.flow = find_column(table.header, "flow", options);
    cols.value = find_column(table.header, "value", options);
    cols.mass = find_column(table.header, "mass", options);
    cols.unit = find_column(table.header, "mass_unit", options);  // optional

    for (const auto& [name, idx] :
         {std::pair<const char*, std::size_t>{"hs_code", cols.hs},
          {"year", cols.year},
          {"partner", cols.partner},
          {"flow", cols.flow},
          {"value", cols.value},
          {"mass", cols.mass}}) {
        if (idx == npos)
            throw std::runtime_error(std::string("missing required column: ") + name);
    }

    ParseResult result;
    result.report.rows_total = table.rows.size();

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.row_lines[r];
        auto reject = [&](const std::string& reason) {
            result.report.rejected.push_back({line, reason});
        };

        const std::size_t needed =
            std::max({cols.hs, cols.year, cols.partner, cols.flow, cols.value, cols.mass,
                      cols.unit == npos ? std::size_t{0} : cols.unit});
        if (row.size() <= needed) {
            reject("too few fields");
            continue;
        }

        TradeRecord rec;
        std::string hs = row[cols.hs];
        if (all_digits(hs) && hs.size() == 4) {
            hs += "00";
            rec.hs_padded = true;
        }
        if (!(all_digits(hs) && hs.size() == 6)) {
            reject("malformed hs_code");
            continue;
        }
        rec.hs_code = hs;

        const auto year = parse_year(row[cols.year]);
        if (!year) {
            reject("malformed year");
            continue;
        }
        if (options.year_window &&
            (*year < options.year_window->first || *year > options.year_window->second)) {
            reject("year outside window");
            continue;
        }
        rec.year = *year;

        rec.partner = row[cols.partner];
        if (rec.partner.empty()) {
            reject("empty partner");
            continue;
        }

        const auto flow = parse_flow(row[cols.flow]);
        if (!flow) {
            reject("unknown flow");
            continue;
        }
        rec.flow = *flow;

        const auto value = parse_number(row[cols.value]);
        if (!value) {
            reject("malformed value");
            continue;
        }
        if (*value < 0.0) {
            reject("negative value");
            continue;
        }
        rec.value_usd = *value;

        const auto mass = parse_number(row[cols.mass]);
        if (!mass) {
            reject("malformed mass");
            continue;
        }
        if (*mass < 0.0) {
            reject("negative mass");
            continue;
        }
        rec.mass = *mass;

        if (cols.unit != npos) {
            const auto unit = parse_mass_unit(row[cols.unit]);
            if (!unit) {
                reject("unknown mass unit");
                continue;
            }
            rec.mass_unit = *unit;
        }

        if (rec.hs_padded) ++result.report.rows_padded;
        result.records.push_back(std::move(rec));
    }
    result.report.rows_accepted = result.records.size();
    return result;
}

std::vector<TradeRecord> harmonize(std::vector<TradeRecord> records) {
    for (auto& rec : records) {
        switch (rec.mass_unit) {
            case MassUnit::kg: break;
            case MassUnit::tonne: rec.mass *= 1000.0; break;
            case MassUnit::gram: rec.mass *= 0.001; break;
        }
        rec.mass_unit = MassUnit::kg;
    }
    return records;
}

std::vector<ProductSeries> aggregate_series(const std::vector<TradeRecord>& records,
                                            const CleaningConfig& cfg) {
    cfg.validate();
    // (hs, flow) -> year -> (value, kg)
    std::map<std::pair<std::string, Flow>, std::map<int, std::pair<double, double>>> sums;
    for (const auto& rec : records) {
        if (rec.year < cfg.window_start || rec.year > cfg.window_end) continue;
        auto& cell = sums[{rec.hs_code, rec.flow}][rec.year];
        cell.first += rec.value_usd;
        cell.second += rec.mass;
    }

    std::vector<ProductSeries> out;
    out.reserve(sums.size());
    for (const auto& [key, years] : sums) {
        ProductSeries s;
        s.hs_code = key.first;
        s.flow = key.second;
        for (const auto& [year, vk] : years) {
            SeriesPoint p;
            p.year = year;
            p.value_usd = vk.first;
            p.kg = vk.second;
            recompute_unit_price(p);
            s.points.push_back(p);
        }
        const int observed = static_cast<int>(s.points.size());
        s.missing_fraction =
            static_cast<double>(cfg.window_length() - observed) / cfg.window_length();
        out.push_back(std::move(s));
    }
    return out;
}

ProductSeries interpolate_gaps(ProductSeries series, const CleaningConfig& cfg) {
    if (series.points.size() < 2 || cfg.max_gap_interp == 0) return series;
    std::vector<SeriesPoint> filled;
    filled.push_back(series.points.front());
    for (std::size_t i = 1; i < series.points.size(); ++i) {
        const SeriesPoint& prev = series.points[i - 1];
        const SeriesPoint& next = series.points[i];
        const int gap = next.year - prev.year - 1;
        if (gap >= 1 && gap <= cfg.max_gap_interp) {
            for (int year = prev.year + 1; year < next.year; ++year) {
                const double frac = static_cast<double>(year - prev.year) /
                                    static_cast<double>(next.year - prev.year);
                SeriesPoint p;
                p.year = year;
                p.value_usd = prev.value_usd + frac * (next.value_usd - prev.value_usd);
                p.kg = prev.kg + frac * (next.kg - prev.kg);
                recompute_unit_price(p);
                filled.push_back(p);
                series.interpolated_years.insert(year);
            }
        }
        filled.push_back(next);
    }
    series.points = std::move(filled);
    return series;
}

SparsePartition exclude_sparse(std::vector<ProductSeries> all_series, const CleaningConfig& cfg) {
    SparsePartition part;
    for (auto& s : all_series) {
        if (s.missing_fraction > cfg.max_missing_fraction)
            part.dropped.push_back(std::move(s));
        else
            part.kept.push_back(std::move(s));
    }
    return part;
}

ProductSeries deflate(ProductSeries series, const CleaningConfig& cfg) {
    if (cfg.deflators.empty()) return series;
    for (auto& p : series.points) {
        const auto it = cfg.deflators.find(p.year);
        if (it == cfg.deflators.end())
            throw std::runtime_error("no deflator configured for year " + std::to_string(p.year));
        p.value_usd *= it->second;
        recompute_unit_price(p);
    }
    return series;
}

std::vector<ProductSeries> winsorize(std::vector<ProductSeries> all_series,
                                     const CleaningConfig& cfg,
                                     std::vector<std::string>* warnings) {
    std::vector<double> values, kgs, prices;
    for (const auto& s : all_series) {
        for (const auto& p : s.points) {
            values.push_back(p.value_usd);
            kgs.push_back(p.kg);
            if (p.unit_price) prices.push_back(*p.unit_price);
        }
    }
    auto warn = [&](const std::string& msg) {
        if (warnings) warnings->push_back(msg);
    };
    if (values.size() < 2) {
        warn("winsorize skipped: fewer than 2 pooled observations");
        return all_series;
    }

    struct Caps {
        double lo, hi;
        bool active;
    };
    // Caps are the order statistics at the percentile ranks rounded toward
    // the interior. An interpolated quantile here would drift on every
    // re-application (the capped extremes shift the interpolation anchor),
    // breaking the idempotence invariant; an order statistic is a fixed
    // point of the capping by construction.
    auto caps_for = [&](std::vector<double> pooled, const char* name) -> Caps {
        if (pooled.size() < 2) {
            warn(std::string("winsorize: column ") + name +
                 " has fewer than 2 observations, left unchanged");
            return {0.0, 0.0, false};
        }
        std::sort(pooled.begin(), pooled.end());
        const double span = static_cast<double>(pooled.size() - 1);
        const auto lo_rank = static_cast<std::size_t>(std::ceil(cfg.cap_low_pct * span));
        const auto hi_rank = static_cast<std::size_t>(std::floor(cfg.cap_high_pct * span));
        if (lo_rank > hi_rank) {
            warn(std::string("winsorize: column ") + name +
                 " has too few observations for the configured percentiles, left unchanged");
            return {0.0, 0.0, false};
        }
        return {pooled[lo_rank], pooled[hi_rank], true};
    };
    const Caps cv = caps_for(values, "value");
    const Caps ck = caps_for(kgs, "kg");
    const Caps cp = caps_for(prices, "unit_price");

    for (auto& s : all_series) {
        for (auto& p : s.points) {
            if (cv.active) p.value_usd = std::clamp(p.value_usd, cv.lo, cv.hi);
            if (ck.active) p.kg = std::clamp(p.kg, ck.lo, ck.hi);
            // Capped directly, not recomputed, so the cap is effective.
            if (cp.active && p.unit_price) p.unit_price = std::clamp(*p.unit_price, cp.lo, cp.hi);
        }
    }
    return all_series;
}

}  // namespace wastesig
