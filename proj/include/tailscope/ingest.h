#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace tailscope {

/// One trade. Timestamps are Unix seconds, UTC.
struct TickRecord {
    std::int64_t timestamp = 0;
    double price = 0.0;
    double volume = 0.0;

    friend bool operator==(const TickRecord&, const TickRecord&) = default;
};

/// Column layout of a delimited tick file. The default is the Bitcoincharts
/// layout `unixtime,price,volume`.
struct TickFormat {
    char delimiter = ',';
    std::size_t field_count = 3;
    std::size_t timestamp_field = 0;
    std::size_t price_field = 1;
    std::size_t volume_field = 2;
};

struct ParseResult {
    std::vector<TickRecord> ticks;  // sorted by timestamp, stable
    std::size_t skipped = 0;        // malformed or non-positive-price lines
};

/// Parses newline-delimited trades (LF or CRLF). Bad lines are skipped and
/// counted; an input with no lines at all throws "no records".
ParseResult parse_ticks(std::istream& in, const TickFormat& format = {});
ParseResult parse_ticks(std::string_view text, const TickFormat& format = {});

/// Writes ticks in `format` with round-trip exact prices and volumes.
void write_ticks(std::ostream& out, std::span<const TickRecord> ticks,
                 const TickFormat& format = {});

/// Half-open interval of Unix seconds.
struct TimeRange {
    std::int64_t begin = 0;
    std::int64_t end = 0;
};

/// How a bar's price is derived from the trades that fall inside it.
enum class BarPrice { close, mean, median };

/// Uniformly spaced price series. Bar i covers
/// [start + i*interval, start + (i+1)*interval).
class BarSeries {
public:
    BarSeries(std::int64_t start, std::int64_t interval, std::vector<double> prices,
              std::vector<bool> filled);

    std::int64_t start() const noexcept { return start_; }
    std::int64_t interval() const noexcept { return interval_; }
    std::size_t size() const noexcept { return prices_.size(); }
    std::int64_t timestamp(std::size_t i) const noexcept {
        return start_ + static_cast<std::int64_t>(i) * interval_;
    }
    const std::vector<double>& prices() const noexcept { return prices_; }
    const std::vector<bool>& filled() const noexcept { return filled_; }

private:
    std::int64_t start_;
    std::int64_t interval_;
    std::vector<double> prices_;
    std::vector<bool> filled_;
};

/// Resamples sorted ticks onto a uniform grid aligned to multiples of
/// `interval`. Empty intervals carry the previous price forward and are
/// flagged; empty intervals before the first trade are dropped. With a
/// range, ticks outside it are ignored and the grid is forward-filled up to
/// the range end.
BarSeries build_bars(std::span<const TickRecord> ticks, std::int64_t interval,
                     std::optional<TimeRange> range = std::nullopt,
                     BarPrice price_rule = BarPrice::close);

/// CSV with header `timestamp,price,filled`.
void write_bars(std::ostream& out, const BarSeries& bars);
BarSeries read_bars(std::istream& in);

}  // namespace tailscope
