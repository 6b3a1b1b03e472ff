#include "tailscope/scaling.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "tailscope/error.h"
#include "tailscope/regression.h"

namespace tailscope {

namespace {

std::vector<double> tail_magnitudes(std::span<const double> values, Side side) {
    std::vector<double> out;
    for (double v : values) {
        if (side == Side::positive && v > 0.0) out.push_back(v);
        if (side == Side::negative && v < 0.0) out.push_back(-v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = count == 1 ? lo : std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    if (count > 1) {
        out.front() = lo;
        out.back() = hi;
    }
    return out;
}

}  // namespace

std::string_view side_name(Side side) { return side == Side::positive ? "positive" : "negative"; }

CcdfPoints ccdf(std::span<const double> standardized, Side side, std::size_t min_observations) {
    const auto mags = tail_magnitudes(standardized, side);
    if (mags.size() < std::max<std::size_t>(min_observations, 1))
        throw Error("too few observations on the " + std::string(side_name(side)) + " side (" +
                    std::to_string(mags.size()) + ")");
    CcdfPoints out;
    out.side = side;
    out.n_side = mags.size();
    const double n = static_cast<double>(mags.size());
    for (std::size_t i = 0; i < mags.size(); ++i) {
        if (i > 0 && mags[i] == mags[i - 1]) continue;
        out.x.push_back(mags[i]);
        out.p.push_back(static_cast<double>(mags.size() - i) / n);
    }
    return out;
}

CcdfPoints ccdf(const ReturnSeries& returns, Side side, std::size_t min_observations) {
    if (!returns.standardized) throw Error("ccdf expects standardized returns");
    return ccdf(returns.values, side, min_observations);
}

TailFit fit_tail(const CcdfPoints& points, FitRegion region, TailFitOptions options) {
    if (!(region.lo > 0.0) || !(region.hi > region.lo)) throw Error("tail fit region must satisfy 0 < lo < hi");

    std::vector<double> lx, lp;
    if (options.bins_per_decade <= 0) {
        for (std::size_t i = 0; i < points.x.size(); ++i) {
            if (points.x[i] < region.lo || points.x[i] > region.hi) continue;
            lx.push_back(std::log(points.x[i]));
            lp.push_back(std::log(points.p[i]));
        }
    } else {
        const double decades = std::log10(region.hi / region.lo);
        const auto count = static_cast<std::size_t>(std::ceil(decades * options.bins_per_decade)) + 1;
        for (double g : log_space(region.lo, region.hi, std::max<std::size_t>(count, 3))) {
            // p(g) is the CCDF at the first distinct magnitude >= g.
            const auto it = std::lower_bound(points.x.begin(), points.x.end(), g);
            if (it == points.x.end()) break;
            lx.push_back(std::log(g));
            lp.push_back(std::log(points.p[static_cast<std::size_t>(it - points.x.begin())]));
        }
    }
    if (lx.size() < 3)
        throw Error("tail fit needs at least 3 points in [" + std::to_string(region.lo) + ", " +
                    std::to_string(region.hi) + "], found " + std::to_string(lx.size()));

    const LinearFit ols = ordinary_least_squares(lx, lp);
    TailFit fit;
    fit.side = points.side;
    fit.region = region;
    fit.mu = -ols.slope;
    fit.kappa = std::exp(ols.intercept);
    fit.stderr_mu = ols.stderr_slope;
    fit.r_squared = ols.r_squared;
    fit.n_points = ols.n;
    if (!(fit.mu > 0.0)) throw Error("fitted tail exponent is not positive");
    return fit;
}

std::vector<std::pair<double, double>> tail_fit_curve(const TailFit& fit, std::size_t count) {
    std::vector<std::pair<double, double>> out;
    out.reserve(count);
    for (double x : log_space(fit.region.lo, fit.region.hi, count))
        out.emplace_back(x, fit.kappa * std::pow(x, -fit.mu));
    return out;
}

HillEstimate hill_estimator(std::span<const double> values, Side side, std::size_t k) {
    if (k < 10) throw Error("Hill estimator needs k >= 10");
    const auto mags = tail_magnitudes(values, side);
    const std::size_t n = mags.size();
    if (n <= k)
        throw Error("Hill estimator needs more than k = " + std::to_string(k) + " observations on the " +
                    std::string(side_name(side)) + " side");
    const double threshold = mags[n - k - 1];
    double sum = 0.0;
    for (std::size_t i = n - k; i < n; ++i) sum += std::log(mags[i] / threshold);
    if (!(sum > 0.0)) throw Error("Hill estimator is undefined: tail values are tied");
    HillEstimate out;
    out.mu = static_cast<double>(k) / sum;
    out.stderr_mu = out.mu / std::sqrt(static_cast<double>(k));
    return out;
}

}  // namespace tailscope
