#include "hwepi/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>

#include "hwepi/errors.hpp"

namespace hwepi {

std::string fmt(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

std::int64_t parse_int(const std::string& text) {
    std::int64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw ConfigError("not an integer: '" + text + "'");
    return v;
}

double parse_double(const std::string& text) {
    if (text == "nan") return std::nan("");
    if (text == "inf") return INFINITY;
    if (text == "-inf") return -INFINITY;
    double v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw ConfigError("not a number: '" + text + "'");
    return v;
}

namespace {
std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}
}  // namespace

CsvReader::CsvReader(std::istream& in, std::vector<std::string> expected_header)
    : in_(in), columns_(expected_header.size()) {
    std::string line;
    if (!std::getline(in_, line) || line != kSchemaLine)
        throw ConfigError(std::string("CSV does not start with ") + kSchemaLine);
    if (!std::getline(in_, line) || split(line) != expected_header)
        throw ConfigError("CSV header mismatch: '" + line + "'");
}

bool CsvReader::next(std::vector<std::string>& row) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (line.empty()) continue;
        row = split(line);
        if (row.size() != columns_)
            throw ConfigError("CSV line " + std::to_string(line_) + ": wrong number of columns");
        return true;
    }
    return false;
}

}  // namespace hwepi
