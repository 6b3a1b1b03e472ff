#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "tailscope/returns.h"

namespace tailscope {

enum class Side { positive, negative };

std::string_view side_name(Side side);

/// Empirical complementary CDF of one tail. `x` holds the distinct
/// magnitudes in ascending order and `p[i]` the fraction of that side's
/// observations that are >= x[i].
struct CcdfPoints {
    Side side = Side::positive;
    std::vector<double> x;
    std::vector<double> p;
    std::size_t n_side = 0;
};

inline constexpr std::size_t kMinTailObservations = 100;

/// Positive side takes values > 0, negative side takes |v| for v < 0; exact
/// zeros (forward-filled bars) belong to neither tail.
CcdfPoints ccdf(std::span<const double> standardized, Side side,
                std::size_t min_observations = kMinTailObservations);

/// Same as above but refuses a series that has not been standardized.
CcdfPoints ccdf(const ReturnSeries& returns, Side side,
                std::size_t min_observations = kMinTailObservations);

struct FitRegion {
    double lo = 2.0;
    double hi = 20.0;
};

/// Power-law fit p ~ kappa * x^(-mu). `mu` is stored positive; the log-log
/// slope is -mu.
struct TailFit {
    Side side = Side::positive;
    FitRegion region;
    double mu = 0.0;
    double kappa = 0.0;
    double stderr_mu = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
};

struct TailFitOptions {
    // 0 regresses on every distinct magnitude in the region. A positive
    // value instead evaluates the CCDF on that many log-spaced abscissae per
    // decade across the region.
    int bins_per_decade = 0;
};

TailFit fit_tail(const CcdfPoints& points, FitRegion region, TailFitOptions options = {});

/// Samples the fitted curve at `count` log-spaced abscissae over the region.
std::vector<std::pair<double, double>> tail_fit_curve(const TailFit& fit, std::size_t count = 50);

struct HillEstimate {
    double mu = 0.0;
    double stderr_mu = 0.0;
};

/// Hill estimator over the k largest magnitudes of one side.
HillEstimate hill_estimator(std::span<const double> values, Side side, std::size_t k);

}  // namespace tailscope
