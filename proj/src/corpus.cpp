#include "wastesig/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "wastesig/dsv.hpp"
#include "wastesig/rng.hpp"

namespace wastesig {

namespace {

// Annual targets for one product. The year pattern below reproduces these
// exactly: mean = level, OLS slope = trend, population stddev of the
// volatility pattern = vol.
struct ProductShape {
    double kg_level = 0.0;
    double price_level = 0.0;
    double volatility = 0.0;
    double kg_trend = 0.0;
    double price_trend = 0.0;
};

// Orthogonal to both the constant and the linear year term over five years,
// scaled to unit population stddev.
constexpr std::array<double, 5> kVolPattern = {2.0, -1.0, -2.0, -1.0, 2.0};
const double kVolScale = std::sqrt(14.0 / 5.0);

struct BlobSpec {
    double kg, kg_sd;
    double price, price_sd;
    double vol, vol_sd;
    double kt, kt_sd;
    double pt, pt_sd;
};

ProductShape draw_shape(const BlobSpec& b, Rng& rng) {
    ProductShape s;
    s.kg_level = rng.normal(b.kg, b.kg_sd);
    s.price_level = rng.normal(b.price, b.price_sd);
    s.volatility = std::max(0.05, rng.normal(b.vol, b.vol_sd));
    s.kg_trend = rng.normal(b.kt, b.kt_sd);
    s.price_trend = rng.normal(b.pt, b.pt_sd);
    return s;
}

const std::vector<std::string>& partner_pool() {
    static const std::vector<std::string> pool{"JPN", "KOR", "CHN", "USA", "DEU",
                                               "MYS", "SGP", "AUS", "IND", "BRA"};
    return pool;
}

struct ProductPlan {
    CorpusProduct meta;
    ProductShape shape;
    std::vector<std::string> partners;
    bool skip_2022 = false;
};

void emit_records(const ProductPlan& plan, const CleaningConfig& window, Rng& rng,
                  std::vector<TradeRecord>& out) {
    const int mid_year = (window.window_start + window.window_end) / 2;
    for (int year = window.window_start; year <= window.window_end; ++year) {
        if (plan.skip_2022 && year == 2022) continue;
        const int t = year - mid_year;
        const std::size_t pattern_idx = static_cast<std::size_t>(year - window.window_start);
        const double kg = plan.shape.kg_level + plan.shape.kg_trend * t;
        const double price = plan.shape.price_level + plan.shape.price_trend * t +
                             plan.shape.volatility * kVolPattern[pattern_idx] / kVolScale;
        if (kg <= 0.0 || price <= 0.0)
            throw std::logic_error("corpus shape produced a non-positive annual value");

        // Split the year's mass across partners; unit price is preserved per
        // record, so the annual aggregate reproduces the target exactly.
        std::vector<double> shares(plan.partners.size());
        double total = 0.0;
        for (auto& s : shares) {
            s = 0.2 + rng.uniform01();
            total += s;
        }
        for (std::size_t p = 0; p < plan.partners.size(); ++p) {
            TradeRecord rec;
            rec.hs_code = plan.meta.hs_code;
            rec.year = year;
            rec.partner = plan.partners[p];
            rec.flow = Flow::exports;
            const double kg_share = kg * shares[p] / total;
            rec.value_usd = price * kg_share;
            // A sprinkle of tonne and gram rows keeps the harmonizer honest.
            const double unit_draw = rng.uniform01();
            if (unit_draw < 0.08) {
                rec.mass = kg_share / 1000.0;
                rec.mass_unit = MassUnit::tonne;
            } else if (unit_draw < 0.11) {
                rec.mass = kg_share * 1000.0;
                rec.mass_unit = MassUnit::gram;
            } else {
                rec.mass = kg_share;
                rec.mass_unit = MassUnit::kg;
            }
            out.push_back(std::move(rec));
        }
    }
}

std::vector<std::string> pick_partners(const std::vector<std::string>& pool, std::size_t count,
                                       Rng& rng) {
    std::vector<std::string> chosen(pool);
    for (std::size_t j = 0; j < count; ++j) {
        const std::size_t pick = j + rng.below(chosen.size() - j);
        std::swap(chosen[j], chosen[pick]);
    }
    chosen.resize(count);
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

}  // namespace

Corpus make_synthetic_corpus(std::uint64_t seed) {
    // Blob geometry in raw feature units. After standardization over the
    // whole corpus the three outliers sit far from everything (shared-high
    // volume plus extreme trade trends in three directions) while the
    // scrap/finished blocks stay inside their host tiers.
    const BlobSpec super_core{5000, 250, 20, 1.5, 1.2, 0.12, 0, 20, 0, 0.12};
    const BlobSpec scrap_block{6500, 200, 17, 0.8, 1.5, 0.12, 30, 12, -0.35, 0.06};
    const BlobSpec core{9000, 400, 40, 3, 3.0, 0.25, 150, 25, 0.4, 0.10};
    const BlobSpec niche{3000, 150, 85, 5, 2.2, 0.20, -15, 5, 0.8, 0.15};
    const BlobSpec finished_block{2800, 150, 95, 5, 2.0, 0.20, -12, 5, 1.2, 0.15};

    const std::vector<std::string> super_core_headings{
        "3915", "3920", "3926", "7404", "7602", "7802", "7902", "8471", "8473",
        "8504", "8507", "8517", "8528", "8529", "8544", "8548", "8549", "8708"};
    const std::vector<std::string> core_headings{"8414", "8418", "8443", "8450",
                                                 "8508", "8516", "8450", "7901"};
    const std::vector<std::string> niche_headings{"9018", "8101", "7106", "8112",
                                                  "7110", "2844", "9027"};
    const std::vector<std::string> scrap_codes{"720410", "720421", "720429", "720430",
                                               "720441", "720449", "720450", "720461",
                                               "720469", "720471", "720479", "720490"};
    const std::vector<std::string> finished_codes{"854231", "854232", "854233", "854239",
                                                  "854241", "854242", "854249", "854290"};

    Corpus corpus;
    corpus.config.seed = seed;
    corpus.config.segmentation.seed = seed;
    corpus.config.forest.seed = seed;
    // Default 1%/99% caps over 1000 pooled annual observations would clamp
    // the top ten observations per column, which is precisely the footprint
    // of three five-year extreme products. The corpus pins softer caps so
    // the mandated outliers survive cleaning while the cap path still runs.
    corpus.config.cleaning.cap_low_pct = 0.001;
    corpus.config.cleaning.cap_high_pct = 0.999;
    corpus.config.tariffs = {{"7204", 0.05}, {"8502", 0.0}, {"8542", 0.0}};

    Rng rng(seed);
    std::vector<ProductPlan> plans;

    auto add_product = [&](const std::string& hs, Tier tier, CorpusBlock block,
                           const ProductShape& shape, std::size_t n_partners) {
        ProductPlan plan;
        plan.meta = {hs, tier, block};
        plan.shape = shape;
        plan.partners = pick_partners(partner_pool(), n_partners, rng);
        plans.push_back(std::move(plan));
    };

    // Super-core: 129 plain + 12 scrap-coded + 1 disguised = 142.
    for (int i = 0; i < 129; ++i) {
        const std::string heading = super_core_headings[static_cast<std::size_t>(i) %
                                                        super_core_headings.size()];
        const int suffix = 10 + (i / static_cast<int>(super_core_headings.size())) * 10 +
                           (i % 7);
        add_product(heading + std::to_string(suffix), Tier::SuperCore, CorpusBlock::plain,
                    draw_shape(super_core, rng), 2 + rng.below(2));
    }
    {
        // Scrap trades mostly eastward; the hotspot table picks this up.
        std::size_t idx = 0;
        for (const auto& code : scrap_codes) {
            ProductPlan plan;
            plan.meta = {code, Tier::SuperCore, CorpusBlock::scrap_exemplar};
            plan.shape = draw_shape(scrap_block, rng);
            plan.partners = idx % 2 == 0 ? std::vector<std::string>{"CHN", "JPN", "KOR"}
                                         : std::vector<std::string>{"JPN", "KOR"};
            plans.push_back(std::move(plan));
            ++idx;
        }
    }
    {
        ProductPlan plan;
        plan.meta = {"850213", Tier::SuperCore, CorpusBlock::disguised};
        plan.shape = {6500, 17, 1.5, 30, -0.35};  // dead centre of the scrap block
        plan.partners = {"CHN", "JPN", "MYS"};
        plans.push_back(std::move(plan));
    }

    for (int i = 0; i < 40; ++i) {
        const std::string heading =
            core_headings[static_cast<std::size_t>(i) % core_headings.size()];
        const int suffix = 10 + (i / static_cast<int>(core_headings.size())) * 10 + (i % 5);
        add_product(heading + std::to_string(suffix), Tier::Core, CorpusBlock::plain,
                    draw_shape(core, rng), 2 + rng.below(2));
    }

    for (int i = 0; i < 7; ++i) {
        const std::string heading = niche_headings[static_cast<std::size_t>(i)];
        add_product(heading + std::to_string(20 + i), Tier::HighValueNiche,
                    CorpusBlock::plain, draw_shape(niche, rng), 2);
    }
    for (const auto& code : finished_codes) {
        ProductPlan plan;
        plan.meta = {code, Tier::HighValueNiche, CorpusBlock::finished_exemplar};
        plan.shape = draw_shape(finished_block, rng);
        plan.partners = {"DEU", "USA"};
        plans.push_back(std::move(plan));
    }

    // Three extreme outliers: shared hyper-volume, wildly different trade
    // dynamics (price collapse, volume collapse, volume explosion).
    add_product("710812", Tier::Outlier, CorpusBlock::plain,
                {15000, 40, 1.3, 0, 13.5}, 2);
    add_product("840110", Tier::Outlier, CorpusBlock::plain,
                {15000, 40, 1.3, -2120, -6.77}, 2);
    add_product("811090", Tier::Outlier, CorpusBlock::plain,
                {15000, 40, 1.3, 2120, -6.77}, 2);

    // One super-core product reports nothing in 2022: an interior gap of one
    // year, interpolated, with missing_fraction exactly at the 20% boundary.
    plans[0].skip_2022 = true;

    std::sort(plans.begin(), plans.end(), [](const ProductPlan& a, const ProductPlan& b) {
        return a.meta.hs_code < b.meta.hs_code;
    });

    for (const auto& plan : plans) {
        corpus.products.push_back(plan.meta);
        emit_records(plan, corpus.config.cleaning, rng, corpus.records);
    }

    // Chaff: sparse codes observed only at the window edges; the cleaning
    // stage must drop them (3 of 5 years missing).
    for (const std::string& hs : {std::string("390110"), std::string("390210")}) {
        for (const int year : {2020, 2024}) {
            TradeRecord rec;
            rec.hs_code = hs;
            rec.year = year;
            rec.partner = "SGP";
            rec.flow = Flow::exports;
            rec.value_usd = 90000.0 + 1000.0 * rng.uniform01();
            rec.mass = 4500.0 + 100.0 * rng.uniform01();
            rec.mass_unit = MassUnit::kg;
            corpus.records.push_back(std::move(rec));
        }
    }

    std::sort(corpus.records.begin(), corpus.records.end(),
              [](const TradeRecord& a, const TradeRecord& b) {
                  if (a.hs_code != b.hs_code) return a.hs_code < b.hs_code;
                  if (a.year != b.year) return a.year < b.year;
                  return a.partner < b.partner;
              });
    return corpus;
}

std::string corpus_to_csv(const Corpus& corpus) {
    std::string out = "hs_code,year,partner,flow,value,mass,mass_unit\n";
    for (const auto& rec : corpus.records) {
        out += rec.hs_code;
        out += ',';
        out += std::to_string(rec.year);
        out += ',';
        out += rec.partner;
        out += ',';
        out += to_string(rec.flow);
        out += ',';
        out += dsv::format_double(rec.value_usd);
        out += ',';
        out += dsv::format_double(rec.mass);
        out += ',';
        out += to_string(rec.mass_unit);
        out += '\n';
    }
    return out;
}

std::vector<Tier> true_tiers(const Corpus& corpus, const std::vector<std::string>& hs_codes) {
    std::vector<Tier> tiers;
    tiers.reserve(hs_codes.size());
    for (const auto& hs : hs_codes) {
        const auto it = std::find_if(corpus.products.begin(), corpus.products.end(),
                                     [&](const CorpusProduct& p) { return p.hs_code == hs; });
        if (it == corpus.products.end())
            throw std::invalid_argument("hs code not in corpus: " + hs);
        tiers.push_back(it->true_tier);
    }
    return tiers;
}

}  // namespace wastesig
