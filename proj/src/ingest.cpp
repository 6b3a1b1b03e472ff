#include "tailscope/ingest.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "tailscope/error.h"
#include "tailscope/text_format.h"

namespace tailscope {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    const std::int64_t q = a / b;
    return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

std::optional<TickRecord> parse_line(std::string_view line, const TickFormat& format) {
    const auto fields = split(line, format.delimiter);
    if (fields.size() != format.field_count) return std::nullopt;
    const auto ts = parse_integer(fields[format.timestamp_field]);
    const auto price = parse_double(fields[format.price_field]);
    const auto volume = parse_double(fields[format.volume_field]);
    if (!ts || !price || !volume) return std::nullopt;
    if (*price <= 0.0 || *volume < 0.0) return std::nullopt;
    return TickRecord{*ts, *price, *volume};
}

void check_format(const TickFormat& format) {
    const auto n = format.field_count;
    if (format.timestamp_field >= n || format.price_field >= n || format.volume_field >= n)
        throw Error("tick format field index out of range");
}

double aggregate(std::vector<double>& trades, BarPrice rule) {
    switch (rule) {
        case BarPrice::close:
            return trades.back();
        case BarPrice::mean: {
            double sum = 0.0;
            for (double p : trades) sum += p;
            return sum / static_cast<double>(trades.size());
        }
        case BarPrice::median: {
            std::sort(trades.begin(), trades.end());
            const auto m = trades.size() / 2;
            return trades.size() % 2 ? trades[m] : 0.5 * (trades[m - 1] + trades[m]);
        }
    }
    return trades.back();
}

}  // namespace

ParseResult parse_ticks(std::istream& in, const TickFormat& format) {
    check_format(format);
    ParseResult result;
    std::string line;
    bool any_line = false;
    while (std::getline(in, line)) {
        std::string_view view(line);
        if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
        if (trim(view).empty()) continue;
        any_line = true;
        if (auto tick = parse_line(view, format)) {
            result.ticks.push_back(*tick);
        } else {
            ++result.skipped;
        }
    }
    if (!any_line) throw Error("no records");
    std::stable_sort(result.ticks.begin(), result.ticks.end(),
                     [](const TickRecord& a, const TickRecord& b) { return a.timestamp < b.timestamp; });
    return result;
}

ParseResult parse_ticks(std::string_view text, const TickFormat& format) {
    std::istringstream in{std::string(text)};
    return parse_ticks(in, format);
}

void write_ticks(std::ostream& out, std::span<const TickRecord> ticks, const TickFormat& format) {
    check_format(format);
    std::vector<std::string> fields(format.field_count);
    for (const auto& tick : ticks) {
        fields[format.timestamp_field] = std::to_string(tick.timestamp);
        fields[format.price_field] = format_double(tick.price);
        fields[format.volume_field] = format_double(tick.volume);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out << format.delimiter;
            out << fields[i];
        }
        out << '\n';
    }
}

BarSeries::BarSeries(std::int64_t start, std::int64_t interval, std::vector<double> prices,
                     std::vector<bool> filled)
    : start_(start), interval_(interval), prices_(std::move(prices)), filled_(std::move(filled)) {
    if (interval_ <= 0) throw Error("bar interval must be positive");
    if (prices_.size() < 2) throw Error("a bar series needs at least 2 bars");
    if (filled_.size() != prices_.size()) throw Error("fill flags and prices differ in length");
    for (double p : prices_) {
        if (!(p > 0.0) || !std::isfinite(p)) throw Error("bar prices must be positive and finite");
    }
}

BarSeries build_bars(std::span<const TickRecord> ticks, std::int64_t interval,
                     std::optional<TimeRange> range, BarPrice price_rule) {
    if (ticks.empty()) throw Error("no records");
    if (interval <= 0) throw Error("bar interval must be positive");
    if (!std::is_sorted(ticks.begin(), ticks.end(),
                        [](const TickRecord& a, const TickRecord& b) { return a.timestamp < b.timestamp; }))
        throw Error("ticks must be sorted by timestamp");

    auto first = ticks.begin();
    auto last = ticks.end();
    if (range) {
        if (range->end <= range->begin) throw Error("time range is empty");
        const auto by_time = [](const TickRecord& t, std::int64_t v) { return t.timestamp < v; };
        first = std::lower_bound(ticks.begin(), ticks.end(), range->begin, by_time);
        last = std::lower_bound(first, ticks.end(), range->end, by_time);
        if (first == last) throw Error("no records in range");
    }

    const std::int64_t start = floor_div(first->timestamp, interval) * interval;
    std::int64_t count = 0;
    if (range) {
        count = floor_div(range->end - start + interval - 1, interval);
    } else {
        count = floor_div((last - 1)->timestamp - start, interval) + 1;
    }

    std::vector<double> prices(static_cast<std::size_t>(count));
    std::vector<bool> filled(static_cast<std::size_t>(count), false);
    std::vector<double> trades;
    auto it = first;
    for (std::int64_t i = 0; i < count; ++i) {
        const std::int64_t bar_end = start + (i + 1) * interval;
        trades.clear();
        for (; it != last && it->timestamp < bar_end; ++it) trades.push_back(it->price);
        if (trades.empty()) {
            // i > 0 here: bar 0 always holds the first in-range trade.
            prices[i] = prices[i - 1];
            filled[i] = true;
        } else {
            prices[i] = aggregate(trades, price_rule);
        }
    }
    return BarSeries(start, interval, std::move(prices), std::move(filled));
}

void write_bars(std::ostream& out, const BarSeries& bars) {
    out << "timestamp,price,filled\n";
    for (std::size_t i = 0; i < bars.size(); ++i) {
        out << bars.timestamp(i) << ',' << format_double(bars.prices()[i]) << ','
            << (bars.filled()[i] ? 1 : 0) << '\n';
    }
}

BarSeries read_bars(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "timestamp,price,filled")
        throw Error("bar file must start with header 'timestamp,price,filled'");
    std::vector<std::int64_t> times;
    std::vector<double> prices;
    std::vector<bool> filled;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(trim(line), ',');
        const auto ts = fields.size() == 3 ? parse_integer(fields[0]) : std::nullopt;
        const auto price = fields.size() == 3 ? parse_double(fields[1]) : std::nullopt;
        const auto flag = fields.size() == 3 ? parse_integer(fields[2]) : std::nullopt;
        if (!ts || !price || !flag) throw Error("malformed bar at line " + std::to_string(line_no));
        times.push_back(*ts);
        prices.push_back(*price);
        filled.push_back(*flag != 0);
    }
    if (times.size() < 2) throw Error("a bar series needs at least 2 bars");
    const std::int64_t interval = times[1] - times[0];
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] - times[i - 1] != interval) throw Error("bars are not uniformly spaced");
    }
    return BarSeries(times.front(), interval, std::move(prices), std::move(filled));
}

}  // namespace tailscope
