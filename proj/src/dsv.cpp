#include "wastesig/dsv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace wastesig::dsv {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(std::string_view line, char delimiter) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

Table read(std::string_view content, char delimiter) {
    Table table;
    std::size_t line_no = 0;
    std::size_t start = 0;
    bool have_header = false;
    while (start <= content.size()) {
        auto end = content.find('\n', start);
        if (end == std::string_view::npos) end = content.size();
        const std::string_view line = content.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (trim(line).empty()) {
            if (end == content.size()) break;
            continue;
        }
        if (!have_header) {
            table.header = split_fields(line, delimiter);
            have_header = true;
        } else {
            table.rows.push_back(split_fields(line, delimiter));
            table.row_lines.push_back(line_no);
        }
        if (end == content.size()) break;
    }
    if (!have_header) throw std::runtime_error("input has no header row");
    return table;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string join(const std::vector<std::string>& fields, char delimiter) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out.push_back(delimiter);
        out += fields[i];
    }
    return out;
}

}  // namespace wastesig::dsv
