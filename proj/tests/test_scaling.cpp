#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.h"
#include "tailscope/error.h"
#include "tailscope/scaling.h"
#include "tailscope/synth.h"

using namespace tailscope;

namespace {

ReturnSeries standardized(const std::vector<double>& raw) {
    ReturnSeries r;
    r.values = raw;
    r.interval = 60;
    return standardize(r);
}

TailFit fit_side(const std::vector<double>& raw, Side side, FitRegion region = {2, 20}) {
    return fit_tail(ccdf(standardized(raw), side), region);
}

}  // namespace

TEST_CASE("ccdf rank counting") {
    const std::vector<double> v{1, 2, 3};
    const auto c = ccdf(v, Side::positive, 1);
    CHECK(c.x == std::vector<double>{1, 2, 3});
    REQUIRE(c.p.size() == 3);
    CHECK(c.p[0] == 1.0);
    CHECK(c.p[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(c.p[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(c.n_side == 3);
}

TEST_CASE("ccdf collapses duplicates and ignores zeros") {
    const std::vector<double> v{-1, -1, 2, 0, 0};
    const auto neg = ccdf(v, Side::negative, 1);
    CHECK(neg.x == std::vector<double>{1});
    CHECK(neg.p == std::vector<double>{1});
    CHECK(neg.n_side == 2);
    const auto pos = ccdf(v, Side::positive, 1);
    CHECK(pos.n_side == 1);
}

TEST_CASE("ccdf errors") {
    const std::vector<double> few(99, 1.0);
    CHECK_THROWS_AS(ccdf(few, Side::positive), Error);
    CHECK_THROWS_AS(ccdf(few, Side::negative, 1), Error);
    ReturnSeries raw;
    raw.values.assign(500, 1.0);
    CHECK_THROWS_AS(ccdf(raw, Side::positive), Error);  // not standardized
}

TEST_CASE("ccdf of 10^6 unit-Pareto(2) draws tracks x^-2 within 3 binomial errors") {
    const auto draws = generate({model::Pareto{2.0}, 1'000'000, 17}).returns;
    const auto c = ccdf(draws, Side::positive);
    const double n = static_cast<double>(c.n_side);
    for (double x = 2.0; x <= 20.0; x += 0.5) {
        const auto it = std::lower_bound(c.x.begin(), c.x.end(), x);
        REQUIRE(it != c.x.end());
        const double p = c.p[static_cast<std::size_t>(it - c.x.begin())];
        CHECK(p == oracle::tail_fraction(draws, true, x));
        const double expected = std::pow(x, -2.0);
        const double se = std::sqrt(expected * (1 - expected) / n);
        CHECK(std::abs(p - expected) <= 3 * se);
    }
}

TEST_CASE("fit_tail recovers an exact power law") {
    CcdfPoints c;
    for (double x = 1.0; x <= 30.0; x += 0.25) {
        c.x.push_back(x);
        c.p.push_back(0.5 * std::pow(x, -3.0));
    }
    const auto fit = fit_tail(c, {2, 20});
    CHECK(std::abs(fit.mu - 3.0) < 1e-9);
    CHECK(std::abs(fit.kappa - 0.5) < 1e-9);
    CHECK(std::abs(fit.r_squared - 1.0) < 1e-9);
    CHECK(fit.n_points == 73);
    const auto curve = tail_fit_curve(fit, 50);
    REQUIRE(curve.size() == 50);
    CHECK(curve.front().first == 2.0);
    CHECK(curve.back().first == 20.0);
    CHECK(curve.back().second == doctest::Approx(0.5 / 8000.0).epsilon(1e-9));
}

TEST_CASE("fit_tail errors") {
    CcdfPoints c;
    c.x = {1, 2, 3, 30};
    c.p = {1, 0.5, 0.25, 0.1};
    CHECK_THROWS_AS(fit_tail(c, {2, 20}), Error);   // two in-region points
    CHECK_THROWS_AS(fit_tail(c, {20, 2}), Error);   // inverted region
    c.x = {2, 2, 2};
    c.p = {1, 0.5, 0.25};
    CHECK_THROWS_AS(fit_tail(c, {1, 5}), Error);    // no spread in x
}

TEST_CASE("fit_tail on Student-t(3) over 10 seeds stays in [2.6, 3.4]; Hill in [2.5, 3.5]") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto z = standardized(generate({model::StudentT{3.0}, 10'000'000, seed}).returns);
        for (const Side side : {Side::positive, Side::negative}) {
            const auto fit = fit_tail(ccdf(z, side), {2, 20});
            CAPTURE(seed);
            CHECK(fit.mu >= 2.6);
            CHECK(fit.mu <= 3.4);
            const auto hill = hill_estimator(z.values, side, z.values.size() / 1000);
            CHECK(hill.mu >= 2.5);
            CHECK(hill.mu <= 3.5);
        }
    }
}

TEST_CASE("Hill estimator on exact Pareto quantiles") {
    const auto x = oracle::pareto_quantiles(100000, 2.0);
    const auto h = hill_estimator(x, Side::positive, 10000);
    CHECK(std::abs(h.mu - 2.0) < 0.05 * 2.0);
    CHECK(h.stderr_mu == doctest::Approx(h.mu / 100.0));
}

TEST_CASE("Hill estimator errors") {
    const std::vector<double> tied(50, 3.0);
    CHECK_THROWS_AS(hill_estimator(tied, Side::positive, 10), Error);
    const auto x = oracle::pareto_quantiles(20, 2.0);
    CHECK_THROWS_AS(hill_estimator(x, Side::positive, 20), Error);
    CHECK_THROWS_AS(hill_estimator(x, Side::positive, 5), Error);
}

TEST_CASE("property: standardized tail fit is invariant to rescaling raw returns") {
    const auto raw = generate({model::Pareto{3.0}, 200000, 5}).returns;
    const auto base = fit_side(raw, Side::positive);
    for (double c : {1e-4, 0.37, 12.5}) {
        std::vector<double> scaled(raw.size());
        std::transform(raw.begin(), raw.end(), scaled.begin(), [c](double v) { return c * v; });
        const auto fit = fit_side(scaled, Side::positive);
        CHECK(std::abs(fit.mu - base.mu) <= 1e-10 * base.mu);
        CHECK(std::abs(fit.kappa - base.kappa) <= 1e-10 * base.kappa);
        CHECK(fit.n_points == base.n_points);
    }
}

TEST_CASE("property: Pareto fit error shrinks from n = 1e4 to 1e6") {
    double err_small = 0.0, err_large = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        err_small += std::abs(fit_side(generate({model::Pareto{3.0}, 10000, seed}).returns, Side::positive).mu - 3.0);
        err_large += std::abs(fit_side(generate({model::Pareto{3.0}, 1'000'000, seed}).returns, Side::positive).mu - 3.0);
    }
    CHECK(err_large < err_small);
    CHECK(err_large / 10 < 0.1);
}

TEST_CASE("negative control: Gaussian 'tail exponent' drifts between sub-regions") {
    const auto z = standardized(oracle::gaussian(1'000'000, 21));
    const auto c = ccdf(z, Side::positive);
    const auto inner = fit_tail(c, {2, 3});
    const auto outer = fit_tail(c, {3.5, 5});
    CHECK(outer.mu - inner.mu > 1.0);
}

TEST_CASE("log-binned fitting option") {
    const auto z = standardized(generate({model::Pareto{3.0}, 1'000'000, 8}).returns);
    const auto c = ccdf(z, Side::negative);
    const auto binned = fit_tail(c, {2, 20}, {10});
    CHECK(binned.n_points == 11);
    CHECK(std::abs(binned.mu - 3.0) < 0.15);
    const auto plain = fit_tail(c, {2, 20});
    CHECK(plain.n_points > binned.n_points);
}
