// tailscope: command-line front end for the tick-to-tail-index pipeline.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tailscope/calendar.h"
#include "tailscope/error.h"
#include "tailscope/parallel.h"
#include "tailscope/pipeline.h"
#include "tailscope/text_format.h"

namespace ts = tailscope;
namespace fs = std::filesystem;

namespace {

struct RangeOptions {
    std::string period;
    std::string from;
    std::string to;

    void add(CLI::App* app) {
        app->add_option("--period", period, "Named sample period: I, II or full");
        app->add_option("--from", from, "First UTC date included (YYYY-MM-DD)");
        app->add_option("--to", to, "First UTC date excluded (YYYY-MM-DD)");
    }

    std::optional<ts::TimeRange> range() const {
        if (!period.empty() && (!from.empty() || !to.empty()))
            throw ts::Error("--period cannot be combined with --from/--to");
        if (!period.empty()) return ts::period_range(ts::parse_period(period));
        if (from.empty() && to.empty()) return std::nullopt;
        if (from.empty() || to.empty()) throw ts::Error("--from and --to must be given together");
        ts::TimeRange r{ts::parse_date(from), ts::parse_date(to)};
        if (r.end <= r.begin) throw ts::Error("date range is not well ordered");
        return r;
    }
};

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ts::Error("cannot write '" + path.string() + "'");
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ts::Error("cannot open '" + path.string() + "'");
    return in;
}

fs::path default_out_dir() {
    if (const char* env = std::getenv("TAILSCOPE_OUT_DIR"); env && *env) return env;
    return "tailscope_out";
}

std::vector<ts::TickRecord> read_tick_files(const std::vector<std::string>& paths, std::size_t& skipped) {
    std::vector<ts::TickRecord> ticks;
    skipped = 0;
    for (const auto& path : paths) {
        auto in = open_in(path);
        auto parsed = ts::parse_ticks(in);
        skipped += parsed.skipped;
        ticks.insert(ticks.end(), parsed.ticks.begin(), parsed.ticks.end());
    }
    std::stable_sort(ticks.begin(), ticks.end(),
                     [](const ts::TickRecord& a, const ts::TickRecord& b) { return a.timestamp < b.timestamp; });
    return ticks;
}

ts::FitRegion parse_tail_region(const std::string& text) {
    const auto parts = ts::split(text, ',');
    const auto lo = parts.size() == 2 ? ts::parse_double(parts[0]) : std::nullopt;
    const auto hi = parts.size() == 2 ? ts::parse_double(parts[1]) : std::nullopt;
    if (!lo || !hi) throw ts::Error("region must look like lo,hi: '" + text + "'");
    return {*lo, *hi};
}

ts::LagRegion parse_lag_region(const std::string& text) {
    const auto parts = ts::split(text, ',');
    const auto lo = parts.size() == 2 ? ts::parse_integer(parts[0]) : std::nullopt;
    const auto hi = parts.size() == 2 ? ts::parse_integer(parts[1]) : std::nullopt;
    if (!lo || !hi || *lo < 0 || *hi < 0) throw ts::Error("lag region must look like lo,hi: '" + text + "'");
    return {static_cast<std::size_t>(*lo), static_cast<std::size_t>(*hi)};
}

std::string region_tag(double lo, double hi) {
    auto compact = [](double v) {
        char buf[64];
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, end);
    };
    return compact(lo) + "_" + compact(hi);
}

template <class F>
int run_stage(const char* name, F&& f) {
    try {
        f();
        return 0;
    } catch (const ts::StageError& e) {
        std::cerr << "error [" << e.stage() << "]: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error [" << name << "]: " << e.what() << '\n';
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heavy-tail, long-memory and realized-volatility analysis of tick data"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Upper bound on worker threads (0 = all cores)");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Parse tick CSV files and resample them to bars");
    std::vector<std::string> ingest_inputs;
    std::int64_t ingest_interval = 60;
    std::string ingest_rule = "close";
    std::string ingest_out;
    RangeOptions ingest_range;
    ingest->add_option("--input,-i", ingest_inputs, "Tick CSV (unixtime,price,volume)")->required();
    ingest->add_option("--interval", ingest_interval, "Bar interval in seconds");
    ingest->add_option("--price-rule", ingest_rule, "Bar price: close, mean or median")
        ->check(CLI::IsMember({"close", "mean", "median"}));
    ingest->add_option("--out,-o", ingest_out, "Output bars CSV")->required();
    ingest_range.add(ingest);

    // returns
    auto* returns = app.add_subcommand("returns", "Log returns from a bars CSV");
    std::string returns_bars, returns_out;
    bool returns_standardize = false;
    returns->add_option("--bars", returns_bars, "Bars CSV (timestamp,price,filled)")->required();
    returns->add_flag("--standardize", returns_standardize, "Subtract the mean and divide by the sample sd");
    returns->add_option("--out,-o", returns_out, "Output returns CSV")->required();

    // tails
    auto* tails = app.add_subcommand("tails", "Empirical CCDFs and power-law tail fits");
    std::string tails_returns, tails_side = "both", tails_out;
    std::vector<std::string> tails_regions;
    bool tails_no_standardize = false;
    int tails_bins = 0;
    std::size_t tails_hill_k = 0;
    tails->add_option("--returns", tails_returns, "Returns CSV (timestamp,return)")->required();
    tails->add_option("--region", tails_regions, "Fit region lo,hi in sd units (repeatable, default 2,20)");
    tails->add_option("--side", tails_side, "positive, negative or both")
        ->check(CLI::IsMember({"positive", "negative", "both"}));
    tails->add_flag("--no-standardize", tails_no_standardize, "Input is already standardized");
    tails->add_option("--bins-per-decade", tails_bins, "Fit on log-spaced CCDF samples instead of every point");
    tails->add_option("--hill-k", tails_hill_k, "Also report the Hill estimate over the k largest magnitudes");
    tails->add_option("--out-dir", tails_out, "Output directory");

    // acf
    auto* acf_cmd = app.add_subcommand("acf", "Autocorrelation with jackknife errors and power-law fits");
    std::string acf_returns, acf_out;
    bool acf_abs = false, acf_standardize = false;
    std::size_t acf_max_lag = 1000, acf_blocks = ts::kDefaultJackknifeBlocks;
    std::vector<std::size_t> acf_sigma_lags;
    std::vector<std::string> acf_regions;
    acf_cmd->add_option("--returns", acf_returns, "Returns CSV (timestamp,return)")->required();
    acf_cmd->add_flag("--abs", acf_abs, "Use absolute values");
    acf_cmd->add_flag("--standardize", acf_standardize, "Standardize before taking absolute values");
    acf_cmd->add_option("--max-lag", acf_max_lag, "Largest lag");
    acf_cmd->add_option("--sigma-lags", acf_sigma_lags, "Lags that get jackknife errors")->delimiter(',');
    acf_cmd->add_option("--blocks", acf_blocks, "Jackknife block count");
    acf_cmd->add_option("--fit-region", acf_regions, "Power-law fit region lo,hi in lags (repeatable)");
    acf_cmd->add_option("--out-dir", acf_out, "Output directory");

    // rv
    auto* rv_cmd = app.add_subcommand("rv", "Daily realized volatility from 5-minute returns");
    std::vector<std::string> rv_inputs;
    std::string rv_bars, rv_out;
    RangeOptions rv_range;
    rv_cmd->add_option("--input,-i", rv_inputs, "Tick CSV files");
    rv_cmd->add_option("--bars", rv_bars, "300-second bars CSV instead of ticks");
    rv_cmd->add_option("--out-dir", rv_out, "Output directory");
    rv_range.add(rv_cmd);

    // synth
    auto* synth = app.add_subcommand("synth", "Seeded synthetic returns or ticks");
    std::string synth_model = "gaussian", synth_out;
    double omega = 1e-6, alpha = 0.09, beta = 0.90, nu = 3.0, mu = 3.0;
    double mean_log_sigma = -6.0, phi = 0.98, sigma_eta = 0.1, scale = 1e-3;
    std::size_t hold = 1, n = 100000;
    std::uint64_t seed = 42;
    std::int64_t synth_interval = 60, synth_start = 1420070400;
    bool as_ticks = false;
    synth->add_option("--model", synth_model, "gaussian, student_t, pareto, garch or sv")
        ->check(CLI::IsMember({"gaussian", "student_t", "pareto", "garch", "sv"}));
    synth->add_option("--omega", omega);
    synth->add_option("--alpha", alpha);
    synth->add_option("--beta", beta);
    synth->add_option("--nu", nu, "Student-t degrees of freedom");
    synth->add_option("--mu", mu, "Pareto tail exponent");
    synth->add_option("--mean-log-sigma", mean_log_sigma);
    synth->add_option("--phi", phi);
    synth->add_option("--sigma-eta", sigma_eta);
    synth->add_option("--hold", hold, "Returns sharing one SV volatility draw");
    synth->add_option("--n", n, "Sample size");
    synth->add_option("--seed", seed);
    synth->add_option("--interval", synth_interval, "Seconds between returns");
    synth->add_option("--start", synth_start, "Unix time of the first bar");
    synth->add_option("--scale", scale, "Return multiplier used for the tick price path");
    synth->add_flag("--as-ticks", as_ticks, "Emit a tick CSV instead of returns");
    synth->add_option("--out,-o", synth_out, "Output CSV")->required();

    // run
    auto* run = app.add_subcommand("run", "Full pipeline from a config file");
    std::string run_config, run_out;
    std::vector<std::string> run_inputs, run_settings;
    run->add_option("--config,-c", run_config, "key = value config file");
    run->add_option("--input,-i", run_inputs, "Tick CSV files (added to the config inputs)");
    run->add_option("--set", run_settings, "Override a setting, key=value (repeatable)");
    run->add_option("--out-dir", run_out, "Output directory (default $TAILSCOPE_OUT_DIR or ./tailscope_out)");

    CLI11_PARSE(app, argc, argv);
    if (threads) ts::set_thread_limit(threads);

    if (*ingest) {
        return run_stage("ingest", [&] {
            std::size_t skipped = 0;
            const auto ticks = read_tick_files(ingest_inputs, skipped);
            const auto rule = ingest_rule == "mean" ? ts::BarPrice::mean
                              : ingest_rule == "median" ? ts::BarPrice::median
                                                        : ts::BarPrice::close;
            const auto bars = ts::build_bars(ticks, ingest_interval, ingest_range.range(), rule);
            auto out = open_out(ingest_out);
            ts::write_bars(out, bars);
            std::cerr << ticks.size() << " ticks, " << skipped << " skipped lines, " << bars.size() << " bars\n";
        });
    }

    if (*returns) {
        return run_stage("returns", [&] {
            auto in = open_in(returns_bars);
            auto r = ts::log_returns(ts::read_bars(in));
            if (returns_standardize) r = ts::standardize(r);
            auto out = open_out(returns_out);
            ts::write_returns(out, r);
        });
    }

    if (*tails) {
        return run_stage("tails", [&] {
            auto in = open_in(tails_returns);
            auto r = ts::read_returns(in);
            if (tails_no_standardize) {
                r.standardized = true;
            } else {
                r = ts::standardize(r);
            }
            std::vector<ts::FitRegion> regions;
            for (const auto& text : tails_regions) regions.push_back(parse_tail_region(text));
            if (regions.empty()) regions.push_back({2.0, 20.0});
            std::vector<ts::Side> sides;
            if (tails_side != "negative") sides.push_back(ts::Side::positive);
            if (tails_side != "positive") sides.push_back(ts::Side::negative);

            const fs::path dir = tails_out.empty() ? fs::path{} : fs::path{tails_out};
            if (!dir.empty()) fs::create_directories(dir);
            for (const auto side : sides) {
                const auto points = ts::ccdf(r, side);
                const char* tag = side == ts::Side::positive ? "pos" : "neg";
                if (!dir.empty()) {
                    auto out = open_out(dir / (std::string("ccdf_") + tag + ".csv"));
                    ts::write_ccdf(out, points);
                }
                for (std::size_t i = 0; i < regions.size(); ++i) {
                    const auto fit = ts::fit_tail(points, regions[i], {tails_bins});
                    const auto json = ts::tail_fit_json(fit);
                    std::cout << json;
                    if (!dir.empty()) {
                        auto out = open_out(dir / (std::string("tailfit_") + tag + "_" +
                                                   region_tag(fit.region.lo, fit.region.hi) + ".json"));
                        out << json;
                        if (i == 0) {
                            auto curve = open_out(dir / (std::string("fit_") + tag + ".csv"));
                            ts::write_fit_curve(curve, fit);
                        }
                    }
                }
                if (tails_hill_k) {
                    const auto hill = ts::hill_estimator(r.values, side, tails_hill_k);
                    std::cout << "hill " << tag << " k=" << tails_hill_k << " mu=" << ts::format_double(hill.mu)
                              << " stderr=" << ts::format_double(hill.stderr_mu) << '\n';
                }
            }
        });
    }

    if (*acf_cmd) {
        return run_stage("acf", [&] {
            auto in = open_in(acf_returns);
            auto r = ts::read_returns(in);
            if (acf_standardize) r = ts::standardize(r);
            const auto series = acf_abs ? ts::absolute_values(r.values) : r.values;
            auto estimate = ts::acf(series, acf_max_lag);
            for (auto lag : acf_sigma_lags) estimate.sigma[lag] = ts::jackknife_sigma(series, lag, acf_blocks);
            const fs::path dir = acf_out.empty() ? default_out_dir() : fs::path{acf_out};
            fs::create_directories(dir);
            {
                auto out = open_out(dir / (acf_abs ? "acf_abs.csv" : "acf.csv"));
                ts::write_acf(out, estimate);
            }
            for (const auto& text : acf_regions) {
                const auto fit = ts::fit_acf_powerlaw(estimate, parse_lag_region(text));
                const auto json = ts::acf_fit_json(fit);
                std::cout << json;
                auto out = open_out(dir / ("acf_fit_" + region_tag(double(fit.region.lo), double(fit.region.hi)) + ".json"));
                out << json;
            }
        });
    }

    if (*rv_cmd) {
        return run_stage("rv", [&] {
            if (rv_inputs.empty() == rv_bars.empty()) throw ts::Error("give either --input ticks or --bars");
            std::optional<ts::BarSeries> bars;
            if (!rv_bars.empty()) {
                auto in = open_in(rv_bars);
                bars = ts::read_bars(in);
            } else {
                std::size_t skipped = 0;
                const auto ticks = read_tick_files(rv_inputs, skipped);
                bars = ts::build_bars(ticks, ts::kRvInterval, rv_range.range());
            }
            const auto rvs = ts::realized_volatility(*bars);
            const auto standardized = ts::standardize_by_rv(rvs);
            const fs::path dir = rv_out.empty() ? default_out_dir() : fs::path{rv_out};
            fs::create_directories(dir);
            {
                auto out = open_out(dir / "rv.csv");
                ts::write_rv(out, rvs);
            }
            std::cerr << rvs.size() << " days, " << standardized.excluded << " zero-RV days excluded\n";
            if (standardized.values.size() >= 30) {
                const auto s = ts::normality_stats(standardized.values);
                std::cout << "standardized returns: mean=" << ts::format_double(s.mean)
                          << " sd=" << ts::format_double(s.sd) << " skewness=" << ts::format_double(s.skewness)
                          << " excess_kurtosis=" << ts::format_double(s.excess_kurtosis) << '\n';
            }
            if (standardized.values.size() >= 500) {
                const auto json = ts::whiteness_json(ts::whiteness_check(standardized.values));
                std::cout << json;
                auto out = open_out(dir / "whiteness.json");
                out << json;
            } else {
                std::cerr << "whiteness check skipped: fewer than 500 standardized days\n";
            }
        });
    }

    if (*synth) {
        return run_stage("synth", [&] {
            ts::SyntheticSpec spec;
            spec.n = n;
            spec.seed = seed;
            if (synth_model == "student_t") spec.model = ts::model::StudentT{nu};
            else if (synth_model == "pareto") spec.model = ts::model::Pareto{mu};
            else if (synth_model == "garch") spec.model = ts::model::Garch{omega, alpha, beta};
            else if (synth_model == "sv") spec.model = ts::model::Sv{mean_log_sigma, phi, sigma_eta, hold};
            const auto series = ts::generate(spec);
            auto out = open_out(synth_out);
            if (as_ticks) {
                const auto bars = ts::price_path(series.returns, synth_start, synth_interval, 100.0, scale);
                ts::write_ticks(out, ts::ticks_from_bars(bars));
            } else {
                ts::ReturnSeries r;
                r.values = series.returns;
                r.start = synth_start;
                r.interval = synth_interval;
                ts::write_returns(out, r);
            }
        });
    }

    if (*run) {
        return run_stage("config", [&] {
            ts::RunConfig config;
            if (!run_config.empty()) config = ts::load_config(fs::path{run_config});
            for (const auto& path : run_inputs) config.inputs.emplace_back(path);
            for (const auto& setting : run_settings) {
                const auto eq = setting.find('=');
                if (eq == std::string::npos) throw ts::Error("--set expects key=value, got '" + setting + "'");
                ts::apply_setting(config, std::string_view(setting).substr(0, eq),
                                  std::string_view(setting).substr(eq + 1));
            }
            if (!run_out.empty()) config.out_dir = run_out;
            if (config.out_dir.empty()) config.out_dir = default_out_dir();
            if (threads) config.threads = threads;
            const auto results = ts::run_pipeline(config);
            std::cout << ts::summary_json(results);
        });
    }
    return 0;
}
