#include "tailscope/calendar.h"

#include <chrono>
#include <cstdio>

#include "tailscope/error.h"
#include "tailscope/text_format.h"

namespace tailscope {

std::string format_date(std::int64_t day) {
    using namespace std::chrono;
    const year_month_day ymd{sys_days{days{day}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::int64_t parse_date(std::string_view date) {
    using namespace std::chrono;
    date = trim(date);
    const auto parts = split(date, '-');
    if (parts.size() != 3) throw Error("invalid date '" + std::string(date) + "', expected YYYY-MM-DD");
    const auto y = parse_integer(parts[0]);
    const auto m = parse_integer(parts[1]);
    const auto d = parse_integer(parts[2]);
    if (!y || !m || !d) throw Error("invalid date '" + std::string(date) + "'");
    const year_month_day ymd{year{static_cast<int>(*y)}, month{static_cast<unsigned>(*m)},
                             day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) throw Error("invalid date '" + std::string(date) + "'");
    return sys_days{ymd}.time_since_epoch().count() * kSecondsPerDay;
}

TimeRange period_range(Period period) {
    switch (period) {
        case Period::I:
            return {parse_date("2011-09-11"), parse_date("2014-01-01")};
        case Period::II:
            return {parse_date("2015-01-01"), parse_date("2020-06-22")};
        case Period::full:
            return {parse_date("2011-09-11"), parse_date("2020-06-22")};
    }
    throw Error("unknown period");
}

Period parse_period(std::string_view name) {
    if (name == "I" || name == "1") return Period::I;
    if (name == "II" || name == "2") return Period::II;
    if (name == "full") return Period::full;
    throw Error("unknown period '" + std::string(name) + "', expected I, II or full");
}

std::string_view period_name(Period period) {
    switch (period) {
        case Period::I: return "I";
        case Period::II: return "II";
        case Period::full: return "full";
    }
    return "?";
}

}  // namespace tailscope
