#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tailscope/ingest.h"

namespace tailscope {

// Generator algorithm version. Bump whenever the mapping from seed to
// output changes. Version 1: std::mt19937_64 seeded with the 64-bit seed,
// uniforms from the top 53 bits, normals by the Marsaglia polar method,
// gammas by Marsaglia-Tsang. No std:: distribution objects are used, so
// streams are identical across standard library implementations.
inline constexpr int kGeneratorVersion = 1;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();
    /// Gamma(shape, 1).
    double gamma(double shape);

private:
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

namespace model {

struct Gaussian {};

/// Student-t scaled to unit variance.
struct StudentT {
    double nu = 3.0;
};

/// |r| ~ Pareto(x_min = 1, mu), sign equiprobable.
struct Pareto {
    double mu = 3.0;
};

/// sigma2_t = omega + alpha r_{t-1}^2 + beta sigma2_{t-1}.
struct Garch {
    double omega = 1e-6;
    double alpha = 0.09;
    double beta = 0.90;
};

/// log sigma_t = mean_log_sigma + h_t, h_t = phi h_{t-1} + sigma_eta eta_t.
/// Each volatility draw is held for `hold` consecutive returns, which lets
/// one draw act as a daily volatility over intraday steps.
struct Sv {
    double mean_log_sigma = -6.0;
    double phi = 0.98;
    double sigma_eta = 0.1;
    std::size_t hold = 1;
};

}  // namespace model

using Model = std::variant<model::Gaussian, model::StudentT, model::Pareto, model::Garch, model::Sv>;

struct SyntheticSpec {
    Model model = model::Gaussian{};
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

struct SyntheticSeries {
    std::vector<double> returns;
    std::vector<double> sigma;  // true conditional sd for garch and sv, else empty
};

inline constexpr std::size_t kGarchBurnIn = 10000;

void validate(const SyntheticSpec& spec);

/// Deterministic for a fixed spec and seed.
SyntheticSeries generate(const SyntheticSpec& spec);

std::string model_name(const Model& model);

/// Price path p_i = p0 * exp(scale * sum_{j<i} r_j), one bar per return plus
/// the initial bar. `start` must be a multiple of `interval`.
BarSeries price_path(std::span<const double> returns, std::int64_t start, std::int64_t interval,
                     double initial_price = 100.0, double scale = 1.0);

/// One unit-volume trade at the start of every bar that was not
/// forward-filled. Rebuilding bars from these ticks at the same interval
/// reproduces the series, fill flags included.
std::vector<TickRecord> ticks_from_bars(const BarSeries& bars);

}  // namespace tailscope
