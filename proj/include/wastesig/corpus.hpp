// corpus.hpp — the pinned synthetic trade corpus: 200 products arranged as
// 3 extreme outliers, a 15-product high-price niche, a 40-product core and a
// 142-product super-core, with labeled scrap-like (7204xx) and finished-like
// (8542xx) blocks inside those tiers plus one disguised finished good
// (850213) carrying scrap-shaped features. Two deliberately sparse chaff
// codes exercise the exclusion rule end to end.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wastesig/config.hpp"
#include "wastesig/types.hpp"

namespace wastesig {

enum class CorpusBlock { plain, scrap_exemplar, finished_exemplar, disguised, chaff };

struct CorpusProduct {
    std::string hs_code;
    Tier true_tier = Tier::SuperCore;
    CorpusBlock block = CorpusBlock::plain;
};

struct Corpus {
    std::vector<TradeRecord> records;
    std::vector<CorpusProduct> products;  // modeled products only (200), sorted by hs
    AppConfig config;                     // tuned caps, tariff table, seed
};

Corpus make_synthetic_corpus(std::uint64_t seed = 42);

// The raw input file the CLI would ingest, with a header row.
std::string corpus_to_csv(const Corpus& corpus);

// Ground-truth tier per hs code, aligned with a given row ordering.
std::vector<Tier> true_tiers(const Corpus& corpus, const std::vector<std::string>& hs_codes);

}  // namespace wastesig
