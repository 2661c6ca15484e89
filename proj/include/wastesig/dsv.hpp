// dsv.hpp — minimal delimiter-separated text helpers. Trade exports are
// plain numeric tables; quoted fields are not supported.
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wastesig::dsv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // fields are trimmed
    std::vector<std::size_t> row_lines;          // 1-based source line per row
};

std::string trim(std::string_view s);

std::vector<std::string> split_fields(std::string_view line, char delimiter);

// Parses header + rows. Empty lines are skipped. Throws when the content has
// no header row.
Table read(std::string_view content, char delimiter);

// Shortest round-trip decimal rendering; deterministic across runs.
std::string format_double(double v);

std::string join(const std::vector<std::string>& fields, char delimiter);

}  // namespace wastesig::dsv
