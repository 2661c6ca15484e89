#include "wastesig/types.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace wastesig {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

std::string to_string(Flow f) {
    return f == Flow::exports ? "export" : "import";
}

std::string to_string(MassUnit u) {
    switch (u) {
        case MassUnit::kg: return "kg";
        case MassUnit::tonne: return "tonne";
        case MassUnit::gram: return "gram";
    }
    return "kg";
}

std::optional<Flow> parse_flow(const std::string& s) {
    const std::string v = lower(s);
    if (v == "export" || v == "exports" || v == "x") return Flow::exports;
    if (v == "import" || v == "imports" || v == "m") return Flow::imports;
    return std::nullopt;
}

std::optional<MassUnit> parse_mass_unit(const std::string& s) {
    const std::string v = lower(s);
    if (v == "kg" || v == "kilogram" || v == "kilograms" || v.empty()) return MassUnit::kg;
    if (v == "tonne" || v == "t" || v == "ton" || v == "tonnes") return MassUnit::tonne;
    if (v == "gram" || v == "g" || v == "grams") return MassUnit::gram;
    return std::nullopt;
}

void CleaningConfig::validate() const {
    if (window_end < window_start)
        throw std::invalid_argument("cleaning window end precedes start");
    if (max_gap_interp < 0)
        throw std::invalid_argument("max_gap_interp must be >= 0");
    if (!(cap_low_pct >= 0.0 && cap_low_pct < cap_high_pct && cap_high_pct <= 1.0))
        throw std::invalid_argument("percentile caps must satisfy 0 <= low < high <= 1");
    for (const auto& [year, d] : deflators) {
        (void)year;
        if (!(d > 0.0)) throw std::invalid_argument("deflators must be strictly positive");
    }
}

std::string to_string(Tier t) {
    switch (t) {
        case Tier::Outlier: return "Outlier";
        case Tier::HighValueNiche: return "HighValueNiche";
        case Tier::Core: return "Core";
        case Tier::SuperCore: return "SuperCore";
    }
    return "Core";
}

std::string to_string(SegmentPass p) {
    return p == SegmentPass::isolated_pass1 ? "isolated_pass1" : "core_pass2";
}

std::optional<Tier> parse_tier(const std::string& s) {
    if (s == "Outlier") return Tier::Outlier;
    if (s == "HighValueNiche") return Tier::HighValueNiche;
    if (s == "Core") return Tier::Core;
    if (s == "SuperCore") return Tier::SuperCore;
    return std::nullopt;
}

std::string to_string(Quadrant q) {
    switch (q) {
        case Quadrant::HighVolLowPrice: return "HighVolLowPrice";
        case Quadrant::HighVolHighPrice: return "HighVolHighPrice";
        case Quadrant::LowVolLowPrice: return "LowVolLowPrice";
        case Quadrant::LowVolHighPrice: return "LowVolHighPrice";
    }
    return "LowVolLowPrice";
}

}  // namespace wastesig
