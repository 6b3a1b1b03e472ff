#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace tailscope {

/// Autocorrelation at lags 0..values.size()-1, with optional jackknife
/// one-sigma errors keyed by lag.
struct AcfEstimate {
    std::vector<double> values;
    std::map<std::size_t, double> sigma;
    std::size_t n = 0;

    std::size_t max_lag() const noexcept { return values.empty() ? 0 : values.size() - 1; }
};

/// ACF(t) = [sum_{i<N-t} (x_i - m)(x_{i+t} - m) / (N - t)] / var, where m and
/// var are the full-sample mean and (1/N) variance. ACF(0) is exactly 1.
/// Throws "zero variance" on a constant series.
AcfEstimate acf(std::span<const double> x, std::size_t max_lag);

/// ACF at a single lag, same estimator as acf().
double acf_at_lag(std::span<const double> x, std::size_t lag);

inline constexpr std::size_t kDefaultJackknifeBlocks = 50;

/// Delete-one-block jackknife error of ACF(lag). The series is cut into
/// `n_blocks` contiguous blocks (the last absorbs the remainder); each
/// leave-one-out sample is the concatenation of the remaining blocks.
double jackknife_sigma(std::span<const double> x, std::size_t lag,
                       std::size_t n_blocks = kDefaultJackknifeBlocks);

struct LagRegion {
    std::size_t lo = 3;
    std::size_t hi = 500;
};

struct AcfPowerLawFit {
    LagRegion region;
    double exponent = 0.0;  // log-log slope, negative for decaying ACF
    double stderr_exponent = 0.0;
    std::size_t n_points = 0;
};

/// OLS of log ACF(t) on log t over the integer lags of `region`.
AcfPowerLawFit fit_acf_powerlaw(const AcfEstimate& estimate, LagRegion region);

std::vector<double> absolute_values(std::span<const double> x);

}  // namespace tailscope
