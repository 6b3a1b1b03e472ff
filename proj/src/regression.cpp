#include "tailscope/regression.h"

#include <algorithm>
#include <cmath>

#include "tailscope/error.h"

namespace tailscope {

LinearFit ordinary_least_squares(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error("regression inputs differ in length");
    const std::size_t n = x.size();
    if (n < 3) throw Error("regression needs at least 3 points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw Error("regression abscissae have zero variance");

    LinearFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        sse += r * r;
    }
    fit.stderr_slope = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    return fit;
}

}  // namespace tailscope
