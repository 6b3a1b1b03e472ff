#include "tailscope/rv.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "tailscope/calendar.h"
#include "tailscope/error.h"
#include "tailscope/memory.h"
#include "tailscope/text_format.h"

namespace tailscope {

RvSeries realized_volatility(const BarSeries& bars) {
    if (bars.interval() != kRvInterval)
        throw Error("realized volatility needs " + std::to_string(kRvInterval) + " s bars, got " +
                    std::to_string(bars.interval()) + " s");
    constexpr std::size_t per_day = kSecondsPerDay / kRvInterval;
    const auto& p = bars.prices();
    const auto& filled = bars.filled();

    RvSeries out;
    // First day whose previous close (bar ending at midnight) is available.
    for (std::int64_t day = utc_day(bars.start() + kRvInterval + kSecondsPerDay - 1);; ++day) {
        const std::int64_t prev_close_bar = (day * kSecondsPerDay - kRvInterval - bars.start()) / kRvInterval;
        const auto k0 = static_cast<std::size_t>(prev_close_bar);
        if (k0 + per_day >= p.size()) break;
        double rv = 0.0;
        bool all_filled = true;
        for (std::size_t j = 1; j <= per_day; ++j) {
            const double r = std::log(p[k0 + j]) - std::log(p[k0 + j - 1]);
            rv += r * r;
            all_filled = all_filled && filled[k0 + j];
        }
        out.days.push_back(day);
        out.rv.push_back(rv);
        out.n_intraday.push_back(per_day);
        out.daily_return.push_back(std::log(p[k0 + per_day]) - std::log(p[k0]));
        out.fully_filled.push_back(all_filled);
    }
    if (out.days.empty()) throw Error("no complete day in range");
    return out;
}

StandardizedReturns standardize_by_rv(const RvSeries& rvs) {
    if (rvs.size() == 0) throw Error("no RV days to standardize");
    StandardizedReturns out;
    for (std::size_t i = 0; i < rvs.size(); ++i) {
        if (!(rvs.rv[i] > 0.0)) {
            ++out.excluded;
            continue;
        }
        out.days.push_back(rvs.days[i]);
        out.values.push_back(rvs.daily_return[i] / std::sqrt(rvs.rv[i]));
    }
    if (out.values.empty()) throw Error("every day has zero realized volatility");
    return out;
}

NormalityStats normality_stats(std::span<const double> x) {
    if (x.size() < 30) throw Error("normality statistics need at least 30 values");
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    if (!(m2 > 0.0)) throw Error("zero variance");
    NormalityStats s;
    s.mean = mean;
    s.sd = std::sqrt(m2 / (n - 1.0));
    m2 /= n;
    m3 /= n;
    m4 /= n;
    s.skewness = m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return s;
}

WhitenessReport whiteness_check(std::span<const double> x) {
    if (x.size() < 500) throw Error("whiteness check needs at least 500 values");
    const std::size_t n = x.size();
    WhitenessReport report;
    report.n = n;
    report.max_lag = std::min<std::size_t>(200, n / 10);
    const auto a = acf(absolute_values(x), std::max<std::size_t>(report.max_lag, 100));

    const double band = 2.0 / std::sqrt(static_cast<double>(n));
    std::size_t inside = 0;
    for (std::size_t t = 1; t <= report.max_lag; ++t) inside += std::abs(a.values[t]) <= band;
    report.band_fraction = static_cast<double>(inside) / static_cast<double>(report.max_lag);

    const double nn = static_cast<double>(n);
    double q = 0.0;
    for (std::size_t k = 1; k <= 100; ++k) {
        q += a.values[k] * a.values[k] / (nn - static_cast<double>(k));
        if (k == 20) report.ljung_box_20 = nn * (nn + 2.0) * q;
    }
    report.ljung_box_100 = nn * (nn + 2.0) * q;
    return report;
}

void write_rv(std::ostream& out, const RvSeries& rvs) {
    out << "date,rv,n_intraday,daily_return\n";
    for (std::size_t i = 0; i < rvs.size(); ++i) {
        out << format_date(rvs.days[i]) << ',' << format_double(rvs.rv[i]) << ',' << rvs.n_intraday[i]
            << ',' << format_double(rvs.daily_return[i]) << '\n';
    }
}

}  // namespace tailscope
