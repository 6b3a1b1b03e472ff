#pragma once

#include <span>

namespace tailscope {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double r_squared = 0.0;
    std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least three
/// points and non-zero spread in x.
LinearFit ordinary_least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace tailscope
