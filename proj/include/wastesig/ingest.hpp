// ingest.hpp — raw trade-record parsing and the cleaning sequence:
// unit harmonization, annual aggregation, gap interpolation, sparse-code
// exclusion, inflation adjustment, percentile capping.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wastesig/types.hpp"

namespace wastesig {

struct ParseOptions {
    char delimiter = ',';
    // Canonical column -> accepted header names (case-insensitive). The
    // canonical name itself is always accepted.
    std::map<std::string, std::vector<std::string>> aliases = default_aliases();
    // When set, rows outside [first, second] are rejected.
    std::optional<std::pair<int, int>> year_window;

    static std::map<std::string, std::vector<std::string>> default_aliases();
};

struct RowIssue {
    std::size_t line = 0;
    std::string reason;
};

struct ParseReport {
    std::size_t rows_total = 0;
    std::size_t rows_accepted = 0;
    std::size_t rows_padded = 0;  // 4-digit codes right-padded to 6
    std::vector<RowIssue> rejected;
};

struct ParseResult {
    std::vector<TradeRecord> records;
    ParseReport report;
};

// Missing required column -> std::runtime_error. Malformed rows are skipped
// and listed in the report; accepted rows keep their input order.
ParseResult parse_records(std::string_view content, const ParseOptions& options);

// Converts every mass to kilograms (tonne x1000, gram x0.001).
std::vector<TradeRecord> harmonize(std::vector<TradeRecord> records);

// One series per (hs_code, flow) with annual sums over the window, sorted by
// hs_code then flow. missing_fraction reflects the pre-interpolation state.
// Records must be harmonized (kg everywhere).
std::vector<ProductSeries> aggregate_series(const std::vector<TradeRecord>& records,
                                            const CleaningConfig& cfg);

// Fills interior gaps of length <= max_gap_interp by linear interpolation on
// value and kg independently; unit_price is recomputed. Leading and trailing
// absences are never filled.
ProductSeries interpolate_gaps(ProductSeries series, const CleaningConfig& cfg);

struct SparsePartition {
    std::vector<ProductSeries> kept;
    std::vector<ProductSeries> dropped;
};

// Series with missing_fraction strictly greater than the threshold are
// dropped; exactly-at-threshold survives.
SparsePartition exclude_sparse(std::vector<ProductSeries> all_series, const CleaningConfig& cfg);

// value[y] *= deflators[y]; kg unchanged; unit_price recomputed. An empty
// deflator table is the identity. A partial table missing a year present in
// the series is a fatal configuration error.
ProductSeries deflate(ProductSeries series, const CleaningConfig& cfg);

// Caps value, kg and unit_price independently at the configured percentiles
// of the pooled annual observations, using the order statistics at the
// percentile ranks rounded inward (which makes the capping idempotent).
// unit_price is capped directly so the cap is effective. Fewer than 2
// pooled observations -> no-op with warning.
std::vector<ProductSeries> winsorize(std::vector<ProductSeries> all_series,
                                     const CleaningConfig& cfg,
                                     std::vector<std::string>* warnings = nullptr);

}  // namespace wastesig
