#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tailscope/ingest.h"

namespace tailscope {

inline constexpr std::int64_t kRvInterval = 300;

/// Daily realized variance from intraday log returns. Days are UTC day
/// numbers (days since 1970-01-01).
struct RvSeries {
    std::vector<std::int64_t> days;
    std::vector<double> rv;
    std::vector<std::size_t> n_intraday;
    std::vector<double> daily_return;
    std::vector<bool> fully_filled;  // every bar of the day was forward-filled

    std::size_t size() const noexcept { return days.size(); }
};

/// Needs 300-second bars. Only complete days are kept: the previous day's
/// last close and all 288 closes of the day must be present.
RvSeries realized_volatility(const BarSeries& bars);

struct StandardizedReturns {
    std::vector<std::int64_t> days;
    std::vector<double> values;  // daily_return / sqrt(rv)
    std::size_t excluded = 0;    // zero-RV days left out
};

StandardizedReturns standardize_by_rv(const RvSeries& rvs);

struct NormalityStats {
    double mean = 0.0;
    double sd = 0.0;  // N-1 denominator
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

/// Skewness and kurtosis use central moments m_k = sum (x - mean)^k / N.
NormalityStats normality_stats(std::span<const double> x);

struct WhitenessReport {
    double band_fraction = 0.0;  // lags 1..max_lag of ACF(|x|) inside +-2/sqrt(N)
    double ljung_box_20 = 0.0;
    double ljung_box_100 = 0.0;
    std::size_t n = 0;
    std::size_t max_lag = 0;
};

/// Autocorrelation diagnostics on |x| with max_lag = min(200, N/10).
WhitenessReport whiteness_check(std::span<const double> x);

/// CSV with header `date,rv,n_intraday,daily_return`.
void write_rv(std::ostream& out, const RvSeries& rvs);

}  // namespace tailscope
