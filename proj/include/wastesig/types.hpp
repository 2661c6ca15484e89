// types.hpp — domain types shared across the pipeline stages.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wastesig {

enum class Flow { exports, imports };
enum class MassUnit { kg, tonne, gram };

std::string to_string(Flow f);
std::string to_string(MassUnit u);
std::optional<Flow> parse_flow(const std::string& s);
std::optional<MassUnit> parse_mass_unit(const std::string& s);

// One reported trade flow for a six-digit HS code.
struct TradeRecord {
    std::string hs_code;   // always 6 digits after parsing
    int year = 0;
    std::string partner;   // ISO3
    Flow flow = Flow::exports;
    double value_usd = 0.0;
    double mass = 0.0;
    MassUnit mass_unit = MassUnit::kg;
    bool hs_padded = false;  // true when a 4-digit code was right-padded with "00"
};

struct SeriesPoint {
    int year = 0;
    double value_usd = 0.0;
    double kg = 0.0;
    std::optional<double> unit_price;  // present iff kg > 0
};

// Per-HS-code annual aggregates after cleaning. Points are sorted strictly
// ascending by year; absent years are simply not present.
struct ProductSeries {
    std::string hs_code;
    Flow flow = Flow::exports;
    std::vector<SeriesPoint> points;
    double missing_fraction = 0.0;   // computed before interpolation
    std::set<int> interpolated_years;
};

struct CleaningConfig {
    int window_start = 2020;
    int window_end = 2024;
    int max_gap_interp = 2;
    double max_missing_fraction = 0.20;
    std::map<int, double> deflators;  // empty map means identity (all 1.0)
    double cap_low_pct = 0.01;
    double cap_high_pct = 0.99;

    int window_length() const { return window_end - window_start + 1; }
    // Throws std::invalid_argument when invariants are violated.
    void validate() const;
};

enum class Tier { Outlier, HighValueNiche, Core, SuperCore };
enum class SegmentPass { isolated_pass1, core_pass2 };

std::string to_string(Tier t);
std::string to_string(SegmentPass p);
std::optional<Tier> parse_tier(const std::string& s);

enum class Quadrant { HighVolLowPrice, HighVolHighPrice, LowVolLowPrice, LowVolHighPrice };

std::string to_string(Quadrant q);

}  // namespace wastesig
