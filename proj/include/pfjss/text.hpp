#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pfjss {

// Shortest representation that parses back to the same double.
std::string fmt_num(double v);
// Fixed decimals, for human-facing tables.
std::string fmt_fixed(double v, int decimals);

std::vector<std::string> split_csv_line(std::string_view line);
std::vector<std::string> split_ws(std::string_view text);
std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

// Whole-token numeric parse; throws std::invalid_argument on junk.
double parse_double(std::string_view tok);
int parse_int(std::string_view tok);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace pfjss
