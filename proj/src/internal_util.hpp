#pragma once

#include <optional>
#include <string>
#include <vector>

namespace spanlin::detail {

// 17 significant digits: doubles survive a write/read round trip exactly.
std::string format_double(double v);

// Full-token numeric parses; nullopt on trailing garbage or empty input.
std::optional<double> parse_double(const std::string& s);
std::optional<long long> parse_int(const std::string& s);

std::vector<std::string> split_ws(const std::string& s);
bool is_blank(const std::string& s);

}  // namespace spanlin::detail
