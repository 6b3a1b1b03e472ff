#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tailscope/ingest.h"

namespace tailscope {

/// Log returns at a fixed interval. `values[i]` is the return ending at
/// timestamp `start + i*interval`, i.e. bar i+1 of the source series.
struct ReturnSeries {
    std::vector<double> values;
    std::int64_t start = 0;
    std::int64_t interval = 0;
    bool standardized = false;
    double mean_used = 0.0;
    double sd_used = 1.0;

    std::int64_t timestamp(std::size_t i) const noexcept {
        return start + static_cast<std::int64_t>(i) * interval;
    }
};

ReturnSeries log_returns(const BarSeries& bars);

/// (R - mean) / sd with the sample (N-1) standard deviation. Throws
/// "degenerate series" for constant input.
ReturnSeries standardize(const ReturnSeries& returns);

/// CSV with header `timestamp,return`.
void write_returns(std::ostream& out, const ReturnSeries& returns);

/// Reads `timestamp,return`. The interval is inferred from the first two
/// rows; the result is marked unstandardized.
ReturnSeries read_returns(std::istream& in);

}  // namespace tailscope
