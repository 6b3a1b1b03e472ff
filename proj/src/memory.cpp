#include "tailscope/memory.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "tailscope/error.h"
#include "tailscope/parallel.h"
#include "tailscope/regression.h"

namespace tailscope {

namespace {

struct Centered {
    std::vector<double> d;
    double variance = 0.0;
};

Centered center(std::span<const double> x) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo == *hi) throw Error("zero variance");
    Centered c;
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    c.d.resize(x.size());
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        c.d[i] = x[i] - mean;
        ss += c.d[i] * c.d[i];
    }
    c.variance = ss / static_cast<double>(x.size());
    if (!(c.variance > 0.0)) throw Error("zero variance");
    return c;
}

// Sum of d[i] * d[i + lag] for i < N - lag. Four accumulators in a fixed
// order; the result depends only on the values, not on the caller.
double lagged_product(const std::vector<double>& d, std::size_t lag) {
    const std::size_t m = d.size() - lag;
    const double* a = d.data();
    const double* b = d.data() + lag;
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < m; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

double acf_value(const Centered& c, std::size_t lag) {
    if (lag == 0) return 1.0;
    const double cov = lagged_product(c.d, lag) / static_cast<double>(c.d.size() - lag);
    return cov / c.variance;
}

}  // namespace

AcfEstimate acf(std::span<const double> x, std::size_t max_lag) {
    if (max_lag < 1) throw Error("acf needs max_lag >= 1");
    if (x.size() <= max_lag)
        throw Error("acf needs more than max_lag = " + std::to_string(max_lag) + " observations");
    const Centered c = center(x);
    AcfEstimate out;
    out.n = x.size();
    out.values.assign(max_lag + 1, 0.0);
    out.values[0] = 1.0;
    parallel_for(max_lag, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin + 1; t <= end; ++t) out.values[t] = acf_value(c, t);
    });
    return out;
}

double acf_at_lag(std::span<const double> x, std::size_t lag) {
    if (x.size() <= lag) throw Error("acf needs more than lag = " + std::to_string(lag) + " observations");
    return acf_value(center(x), lag);
}

double jackknife_sigma(std::span<const double> x, std::size_t lag, std::size_t n_blocks) {
    if (n_blocks < 10) throw Error("jackknife needs at least 10 blocks");
    if (lag < 1) throw Error("jackknife needs lag >= 1");
    const std::size_t block = x.size() / n_blocks;
    if (block < 10 * lag) throw Error("blocks too short for lag");

    std::vector<double> estimates(n_blocks);
    parallel_for(n_blocks, [&](std::size_t begin, std::size_t end) {
        std::vector<double> sample;
        sample.reserve(x.size());
        for (std::size_t b = begin; b < end; ++b) {
            const std::size_t cut_begin = b * block;
            const std::size_t cut_end = (b + 1 == n_blocks) ? x.size() : cut_begin + block;
            sample.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(cut_begin));
            sample.insert(sample.end(), x.begin() + static_cast<std::ptrdiff_t>(cut_end), x.end());
            estimates[b] = acf_value(center(sample), lag);
        }
    });

    double mean = 0.0;
    for (double e : estimates) mean += e;
    mean /= static_cast<double>(n_blocks);
    double ss = 0.0;
    for (double e : estimates) ss += (e - mean) * (e - mean);
    const double b = static_cast<double>(n_blocks);
    return std::sqrt((b - 1.0) / b * ss);
}

AcfPowerLawFit fit_acf_powerlaw(const AcfEstimate& estimate, LagRegion region) {
    if (region.lo < 1 || region.hi <= region.lo) throw Error("ACF fit region must satisfy 1 <= lo < hi");
    if (region.hi > estimate.max_lag())
        throw Error("ACF fit region ends at lag " + std::to_string(region.hi) + " beyond max lag " +
                    std::to_string(estimate.max_lag()));
    std::vector<double> lt, la;
    for (std::size_t t = region.lo; t <= region.hi; ++t) {
        const double v = estimate.values[t];
        if (!(v > 0.0)) throw Error("ACF not positive in region (lag " + std::to_string(t) + ")");
        lt.push_back(std::log(static_cast<double>(t)));
        la.push_back(std::log(v));
    }
    const LinearFit ols = ordinary_least_squares(lt, la);
    AcfPowerLawFit fit;
    fit.region = region;
    fit.exponent = ols.slope;
    fit.stderr_exponent = ols.stderr_slope;
    fit.n_points = ols.n;
    return fit;
}

std::vector<double> absolute_values(std::span<const double> x) {
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [](double v) { return std::abs(v); });
    return out;
}

}  // namespace tailscope
