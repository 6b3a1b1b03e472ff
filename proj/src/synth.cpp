#include "tailscope/synth.h"

#include <algorithm>
#include <cmath>

#include "tailscope/error.h"

namespace tailscope {

double Rng::uniform() {
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * scale;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * f;
    has_spare_ = true;
    return u * f;
}

double Rng::gamma(double shape) {
    if (shape < 1.0) {
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double z, v;
        do {
            z = normal();
            v = 1.0 + c * z;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
        if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
    }
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_params(const model::Gaussian&) {}

void check_params(const model::StudentT& m) {
    if (!(m.nu > 2.0)) throw Error("student_t needs nu > 2");
}

void check_params(const model::Pareto& m) {
    if (!(m.mu > 0.0)) throw Error("pareto needs mu > 0");
}

void check_params(const model::Garch& m) {
    if (!(m.omega > 0.0)) throw Error("garch needs omega > 0");
    if (!(m.alpha >= 0.0) || !(m.beta >= 0.0)) throw Error("garch needs alpha >= 0 and beta >= 0");
    if (!(m.alpha + m.beta < 1.0)) throw Error("garch needs alpha + beta < 1");
}

void check_params(const model::Sv& m) {
    if (!(std::abs(m.phi) < 1.0)) throw Error("sv needs |phi| < 1");
    if (!(m.sigma_eta >= 0.0)) throw Error("sv needs sigma_eta >= 0");
    if (m.hold < 1) throw Error("sv needs hold >= 1");
    if (!std::isfinite(m.mean_log_sigma)) throw Error("sv needs a finite mean_log_sigma");
}

void fill(Rng& rng, const model::Gaussian&, SyntheticSeries& out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out.returns[i] = rng.normal();
}

void fill(Rng& rng, const model::StudentT& m, SyntheticSeries& out, std::size_t n) {
    const double unit = std::sqrt((m.nu - 2.0) / m.nu);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = rng.normal();
        const double chi2 = 2.0 * rng.gamma(0.5 * m.nu);
        out.returns[i] = unit * z / std::sqrt(chi2 / m.nu);
    }
}

void fill(Rng& rng, const model::Pareto& m, SyntheticSeries& out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        out.returns[i] = sign * std::pow(rng.uniform(), -1.0 / m.mu);
    }
}

void fill(Rng& rng, const model::Garch& m, SyntheticSeries& out, std::size_t n) {
    double var = m.omega / (1.0 - m.alpha - m.beta);
    double prev = 0.0;
    out.sigma.resize(n);
    for (std::size_t i = 0; i < kGarchBurnIn + n; ++i) {
        if (i > 0) var = m.omega + m.alpha * prev * prev + m.beta * var;
        const double sd = std::sqrt(var);
        prev = sd * rng.normal();
        if (i >= kGarchBurnIn) {
            out.returns[i - kGarchBurnIn] = prev;
            out.sigma[i - kGarchBurnIn] = sd;
        }
    }
}

void fill(Rng& rng, const model::Sv& m, SyntheticSeries& out, std::size_t n) {
    out.sigma.resize(n);
    double h = m.sigma_eta / std::sqrt(1.0 - m.phi * m.phi) * rng.normal();
    for (std::size_t i = 0; i < n; i += m.hold) {
        const double sd = std::exp(m.mean_log_sigma + h);
        for (std::size_t j = i; j < std::min(n, i + m.hold); ++j) {
            out.returns[j] = sd * rng.normal();
            out.sigma[j] = sd;
        }
        h = m.phi * h + m.sigma_eta * rng.normal();
    }
}

}  // namespace

void validate(const SyntheticSpec& spec) {
    if (spec.n == 0) throw Error("synthetic sample size must be positive");
    std::visit([](const auto& m) { check_params(m); }, spec.model);
}

SyntheticSeries generate(const SyntheticSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    SyntheticSeries out;
    out.returns.resize(spec.n);
    std::visit([&](const auto& m) { fill(rng, m, out, spec.n); }, spec.model);
    return out;
}

std::string model_name(const Model& model) {
    return std::visit(overloaded{
                          [](const model::Gaussian&) { return std::string("gaussian"); },
                          [](const model::StudentT&) { return std::string("student_t"); },
                          [](const model::Pareto&) { return std::string("pareto"); },
                          [](const model::Garch&) { return std::string("garch"); },
                          [](const model::Sv&) { return std::string("sv"); },
                      },
                      model);
}

BarSeries price_path(std::span<const double> returns, std::int64_t start, std::int64_t interval,
                     double initial_price, double scale) {
    if (interval <= 0) throw Error("bar interval must be positive");
    if (start % interval != 0) throw Error("price path start must be aligned to the interval");
    if (!(initial_price > 0.0)) throw Error("initial price must be positive");
    std::vector<double> prices(returns.size() + 1);
    prices[0] = initial_price;
    double log_price = 0.0;
    for (std::size_t i = 0; i < returns.size(); ++i) {
        log_price += scale * returns[i];
        prices[i + 1] = initial_price * std::exp(log_price);
    }
    return BarSeries(start, interval, std::move(prices), std::vector<bool>(returns.size() + 1, false));
}

std::vector<TickRecord> ticks_from_bars(const BarSeries& bars) {
    std::vector<TickRecord> ticks;
    ticks.reserve(bars.size());
    for (std::size_t i = 0; i < bars.size(); ++i) {
        if (bars.filled()[i]) continue;
        ticks.push_back({bars.timestamp(i), bars.prices()[i], 1.0});
    }
    return ticks;
}

}  // namespace tailscope
