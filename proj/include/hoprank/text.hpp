#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hoprank::text {

std::string_view trim(std::string_view s);

/// Splits on `delim`, keeping empty fields.
std::vector<std::string_view> split(std::string_view s, char delim);

/// Splits on runs of spaces and tabs; never yields empty fields.
std::vector<std::string_view> split_ws(std::string_view s);

std::string lower(std::string_view s);

/// Shortest decimal representation that round-trips the double ("inf", "-inf", "nan" otherwise).
std::string format_double(double value);

/// Parses a full string as a finite or infinite double; returns false on trailing garbage.
bool parse_double(std::string_view s, double& out);

}  // namespace hoprank::text
