#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tailscope {

/// 17 significant digits, locale independent. Round-trips every double.
std::string format_double(double value);

std::vector<std::string_view> split(std::string_view line, char delimiter);
std::string_view trim(std::string_view s);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_integer(std::string_view s);

}  // namespace tailscope
