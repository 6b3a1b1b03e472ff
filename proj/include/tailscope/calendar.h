#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "tailscope/ingest.h"

namespace tailscope {

inline constexpr std::int64_t kSecondsPerDay = 86400;

/// Days since 1970-01-01 for a Unix timestamp (floor division, UTC).
constexpr std::int64_t utc_day(std::int64_t unix_seconds) noexcept {
    const std::int64_t q = unix_seconds / kSecondsPerDay;
    return (unix_seconds % kSecondsPerDay < 0) ? q - 1 : q;
}

/// "YYYY-MM-DD" for a day number.
std::string format_date(std::int64_t day);

/// Unix seconds at UTC midnight of a "YYYY-MM-DD" date.
std::int64_t parse_date(std::string_view date);

/// Named sample periods. `I` and `II` are the low- and high-liquidity
/// windows; `full` spans both, including the gap year between them.
enum class Period { I, II, full };

TimeRange period_range(Period period);
Period parse_period(std::string_view name);
std::string_view period_name(Period period);

}  // namespace tailscope
