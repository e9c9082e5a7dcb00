#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hwepi {

/// First line of every CSV the tools write.
inline constexpr const char* kSchemaLine = "#schema=v1";

/// Shortest round-trip decimal form ("." separator, no locale), "nan"/"inf" for non-finite values.
std::string fmt(double value);

std::int64_t parse_int(const std::string& text);
double parse_double(const std::string& text);

/// Reads a versioned CSV: checks the schema line and the exact header, then
/// yields rows split on commas.
class CsvReader {
public:
    CsvReader(std::istream& in, std::vector<std::string> expected_header);
    bool next(std::vector<std::string>& row);

private:
    std::istream& in_;
    std::size_t columns_;
    int line_ = 2;
};

}  // namespace hwepi
