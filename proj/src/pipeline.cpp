#include "tailscope/pipeline.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tailscope/calendar.h"
#include "tailscope/error.h"
#include "tailscope/parallel.h"
#include "tailscope/text_format.h"

namespace tailscope {

using Json = nlohmann::ordered_json;

namespace {

std::string compact(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

double to_double(std::string_view key, std::string_view value) {
    if (auto v = parse_double(value)) return *v;
    throw Error("setting '" + std::string(key) + "' expects a number, got '" + std::string(value) + "'");
}

long long to_integer(std::string_view key, std::string_view value) {
    if (auto v = parse_integer(value)) return *v;
    throw Error("setting '" + std::string(key) + "' expects an integer, got '" + std::string(value) + "'");
}

std::size_t to_count(std::string_view key, std::string_view value) {
    const auto v = to_integer(key, value);
    if (v < 0) throw Error("setting '" + std::string(key) + "' must be non-negative");
    return static_cast<std::size_t>(v);
}

bool to_bool(std::string_view key, std::string_view value) {
    const auto v = lower(trim(value));
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw Error("setting '" + std::string(key) + "' expects true or false");
}

// "lo:hi" pairs separated by commas, e.g. "3:500,1500:10000".
std::vector<std::pair<std::string_view, std::string_view>> pairs(std::string_view key, std::string_view value) {
    std::vector<std::pair<std::string_view, std::string_view>> out;
    for (auto item : split(trim(value), ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto parts = split(item, ':');
        if (parts.size() != 2) throw Error("setting '" + std::string(key) + "' expects lo:hi pairs");
        out.emplace_back(trim(parts[0]), trim(parts[1]));
    }
    return out;
}

Model& synthetic_model(RunConfig& config) {
    if (!config.synthetic) config.synthetic = SyntheticSpec{model::Gaussian{}, 100000, 42};
    return config.synthetic->model;
}

template <class M>
M& require_model(RunConfig& config, std::string_view key) {
    if (!config.synthetic) throw Error("setting '" + std::string(key) + "' needs synth.model first");
    auto* m = std::get_if<M>(&config.synthetic->model);
    if (!m) throw Error("setting '" + std::string(key) + "' does not apply to the selected synth.model");
    return *m;
}

std::vector<TickRecord> read_inputs(const RunConfig& config, std::size_t& skipped) {
    std::vector<TickRecord> ticks;
    skipped = 0;
    for (const auto& path : config.inputs) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open input '" + path.string() + "'");
        auto parsed = parse_ticks(in);
        skipped += parsed.skipped;
        ticks.insert(ticks.end(), parsed.ticks.begin(), parsed.ticks.end());
    }
    std::stable_sort(ticks.begin(), ticks.end(),
                     [](const TickRecord& a, const TickRecord& b) { return a.timestamp < b.timestamp; });
    return ticks;
}

std::vector<TickRecord> synthetic_ticks(const RunConfig& config) {
    const auto series = generate(*config.synthetic);
    const auto bars = price_path(series.returns, config.synthetic_start, config.bar_interval, 100.0,
                                 config.synthetic_scale);
    return ticks_from_bars(bars);
}

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

template <class F>
void write_stream(const std::filesystem::path& path, F&& f) {
    std::ostringstream os;
    f(os);
    write_file(path, os.str());
}

Json tail_fit_object(const TailFit& fit) {
    Json j;
    j["side"] = std::string(side_name(fit.side));
    j["region"] = Json::array({number(fit.region.lo), number(fit.region.hi)});
    j["mu"] = number(fit.mu);
    j["kappa"] = number(fit.kappa);
    j["stderr_mu"] = number(fit.stderr_mu);
    j["r_squared"] = number(fit.r_squared);
    j["n_points"] = fit.n_points;
    return j;
}

Json acf_fit_object(const AcfPowerLawFit& fit) {
    Json j;
    j["region"] = Json::array({fit.region.lo, fit.region.hi});
    j["exponent"] = number(fit.exponent);
    j["stderr"] = number(fit.stderr_exponent);
    return j;
}

Json whiteness_object(const WhitenessReport& r) {
    Json j;
    j["band_fraction"] = number(r.band_fraction);
    j["ljung_box_20"] = number(r.ljung_box_20);
    j["ljung_box_100"] = number(r.ljung_box_100);
    j["n"] = r.n;
    return j;
}

std::string region_tag(double lo, double hi) { return compact(lo) + "_" + compact(hi); }

}  // namespace

std::vector<FitRegion> RunConfig::effective_tail_regions() const {
    if (!tail_regions.empty()) return tail_regions;
    if (period == "full") return {{1.0, 10.0}};
    return {{2.0, 20.0}};
}

void RunConfig::validate() const {
    if (inputs.empty() && !synthetic) throw Error("no input files given");
    if (range && range->end <= range->begin) throw Error("date range is not well ordered");
    if (bar_interval <= 0) throw Error("bar_interval must be positive");
    for (const auto& r : effective_tail_regions()) {
        if (!(r.lo > 0.0) || !(r.hi > r.lo)) throw Error("tail region must satisfy 0 < lo < hi");
    }
    if (acf_max_lag < 1) throw Error("acf_max_lag must be at least 1");
    for (const auto& r : acf_regions) {
        if (r.lo < 1 || r.hi <= r.lo) throw Error("ACF region must satisfy 1 <= lo < hi");
        if (r.hi > acf_max_lag) throw Error("ACF region " + region_tag(double(r.lo), double(r.hi)) + " exceeds acf_max_lag");
    }
    for (auto lag : sigma_lags) {
        if (lag < 1 || lag > acf_max_lag) throw Error("sigma lag " + std::to_string(lag) + " outside 1..acf_max_lag");
    }
    if (!(hill_fraction > 0.0 && hill_fraction < 1.0)) throw Error("hill_fraction must be in (0, 1)");
    if (synthetic) tailscope::validate(*synthetic);
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "input") {
        for (auto item : split(value, ',')) {
            if (!trim(item).empty()) config.inputs.emplace_back(std::string(trim(item)));
        }
    } else if (key == "period") {
        if (value == "all") {
            config.period = "all";
            config.range.reset();
        } else {
            const Period p = parse_period(value);
            config.period = std::string(period_name(p));
            config.range = period_range(p);
        }
    } else if (key == "from" || key == "to") {
        TimeRange r = config.range.value_or(TimeRange{std::numeric_limits<std::int64_t>::min() / 2,
                                                      std::numeric_limits<std::int64_t>::max() / 2});
        (key == "from" ? r.begin : r.end) = parse_date(value);
        config.range = r;
        config.period = "custom";
    } else if (key == "bar_interval") {
        config.bar_interval = to_integer(key, value);
    } else if (key == "price_rule") {
        if (value == "close") config.price_rule = BarPrice::close;
        else if (value == "mean") config.price_rule = BarPrice::mean;
        else if (value == "median") config.price_rule = BarPrice::median;
        else throw Error("price_rule must be close, mean or median");
    } else if (key == "tail_regions") {
        config.tail_regions.clear();
        for (auto [lo, hi] : pairs(key, value)) config.tail_regions.push_back({to_double(key, lo), to_double(key, hi)});
    } else if (key == "hill_fraction") {
        config.hill_fraction = to_double(key, value);
    } else if (key == "acf_max_lag") {
        config.acf_max_lag = to_count(key, value);
    } else if (key == "sigma_lags") {
        config.sigma_lags.clear();
        for (auto item : split(value, ',')) {
            if (!trim(item).empty()) config.sigma_lags.push_back(to_count(key, item));
        }
    } else if (key == "jackknife_blocks") {
        config.jackknife_blocks = to_count(key, value);
    } else if (key == "acf_regions") {
        config.acf_regions.clear();
        for (auto [lo, hi] : pairs(key, value)) config.acf_regions.push_back({to_count(key, lo), to_count(key, hi)});
    } else if (key == "rv") {
        config.rv = to_bool(key, value);
    } else if (key == "out_dir") {
        config.out_dir = std::string(value);
    } else if (key == "threads") {
        config.threads = static_cast<unsigned>(to_count(key, value));
    } else if (key == "seed") {
        synthetic_model(config);
        config.synthetic->seed = static_cast<std::uint64_t>(to_integer(key, value));
    } else if (key == "synth.model") {
        auto& m = synthetic_model(config);
        if (value == "gaussian") m = model::Gaussian{};
        else if (value == "student_t") m = model::StudentT{};
        else if (value == "pareto") m = model::Pareto{};
        else if (value == "garch") m = model::Garch{};
        else if (value == "sv") m = model::Sv{};
        else throw Error("unknown synth.model '" + std::string(value) + "'");
    } else if (key == "synth.n") {
        synthetic_model(config);
        config.synthetic->n = to_count(key, value);
    } else if (key == "synth.nu") {
        require_model<model::StudentT>(config, key).nu = to_double(key, value);
    } else if (key == "synth.mu") {
        require_model<model::Pareto>(config, key).mu = to_double(key, value);
    } else if (key == "synth.omega") {
        require_model<model::Garch>(config, key).omega = to_double(key, value);
    } else if (key == "synth.alpha") {
        require_model<model::Garch>(config, key).alpha = to_double(key, value);
    } else if (key == "synth.beta") {
        require_model<model::Garch>(config, key).beta = to_double(key, value);
    } else if (key == "synth.mean_log_sigma") {
        require_model<model::Sv>(config, key).mean_log_sigma = to_double(key, value);
    } else if (key == "synth.phi") {
        require_model<model::Sv>(config, key).phi = to_double(key, value);
    } else if (key == "synth.sigma_eta") {
        require_model<model::Sv>(config, key).sigma_eta = to_double(key, value);
    } else if (key == "synth.hold") {
        require_model<model::Sv>(config, key).hold = to_count(key, value);
    } else if (key == "synth.scale") {
        config.synthetic_scale = to_double(key, value);
    } else if (key == "synth.start") {
        config.synthetic_start = to_integer(key, value);
    } else {
        throw Error("unknown setting '" + std::string(key) + "'");
    }
}

RunConfig load_config(std::istream& in, RunConfig base) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) throw Error("config line " + std::to_string(line_no) + ": expected key = value");
        apply_setting(base, view.substr(0, eq), view.substr(eq + 1));
    }
    return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config '" + path.string() + "'");
    return load_config(in, std::move(base));
}

PipelineResults run_analysis(const RunConfig& config) {
    stage("config", [&] { config.validate(); });
    if (config.threads) set_thread_limit(config.threads);

    PipelineResults res;
    res.period = config.period;

    const auto ticks = stage("ingest", [&] {
        std::vector<TickRecord> t = config.synthetic ? synthetic_ticks(config) : read_inputs(config, res.skipped_lines);
        if (t.empty()) throw Error("no records");
        return t;
    });
    res.n_ticks = ticks.size();
    res.bars = stage("ingest", [&] { return build_bars(ticks, config.bar_interval, config.range, config.price_rule); });

    stage("returns", [&] {
        res.returns = log_returns(*res.bars);
        res.standardized = standardize(res.returns);
    });

    stage("tails", [&] {
        res.ccdf_positive = ccdf(res.standardized, Side::positive);
        res.ccdf_negative = ccdf(res.standardized, Side::negative);
        for (const auto& region : config.effective_tail_regions()) {
            res.tail_fits.push_back(fit_tail(res.ccdf_positive, region));
            res.tail_fits.push_back(fit_tail(res.ccdf_negative, region));
        }
        const std::size_t smallest = std::min(res.ccdf_positive.n_side, res.ccdf_negative.n_side);
        res.hill_k = std::max<std::size_t>(
            10, static_cast<std::size_t>(config.hill_fraction * static_cast<double>(res.standardized.values.size())));
        if (res.hill_k >= smallest) res.hill_k = smallest - 1;
        res.hill_positive = hill_estimator(res.standardized.values, Side::positive, res.hill_k);
        res.hill_negative = hill_estimator(res.standardized.values, Side::negative, res.hill_k);
    });

    stage("acf", [&] {
        const auto abs_returns = absolute_values(res.standardized.values);
        res.acf_abs = acf(abs_returns, config.acf_max_lag);
        for (auto lag : config.sigma_lags)
            res.acf_abs.sigma[lag] = jackknife_sigma(abs_returns, lag, config.jackknife_blocks);
        for (const auto& region : config.acf_regions) res.acf_fits.push_back(fit_acf_powerlaw(res.acf_abs, region));
    });

    if (config.rv) {
        stage("rv", [&] {
            const auto bars300 = build_bars(ticks, kRvInterval, config.range, config.price_rule);
            res.rv = realized_volatility(bars300);
            res.rv_standardized = standardize_by_rv(*res.rv);
            const auto& values = res.rv_standardized->values;
            if (values.size() >= 30) res.rv_normality = normality_stats(values);
            if (values.size() >= 500) {
                res.whiteness = whiteness_check(values);
            } else {
                res.whiteness_skipped = "fewer than 500 standardized days (" + std::to_string(values.size()) + ")";
            }
        });
    }
    return res;
}

void write_ccdf(std::ostream& out, const CcdfPoints& points) {
    out << "x,p\n";
    for (std::size_t i = 0; i < points.x.size(); ++i)
        out << format_double(points.x[i]) << ',' << format_double(points.p[i]) << '\n';
}

void write_fit_curve(std::ostream& out, const TailFit& fit) {
    out << "x,p\n";
    for (const auto& [x, p] : tail_fit_curve(fit, 50)) out << format_double(x) << ',' << format_double(p) << '\n';
}

void write_acf(std::ostream& out, const AcfEstimate& estimate) {
    out << "lag,acf,sigma\n";
    for (std::size_t t = 0; t < estimate.values.size(); ++t) {
        out << t << ',' << format_double(estimate.values[t]) << ',';
        if (auto it = estimate.sigma.find(t); it != estimate.sigma.end()) out << format_double(it->second);
        out << '\n';
    }
}

std::string tail_fit_json(const TailFit& fit) { return tail_fit_object(fit).dump(2) + "\n"; }
std::string acf_fit_json(const AcfPowerLawFit& fit) { return acf_fit_object(fit).dump(2) + "\n"; }
std::string whiteness_json(const WhitenessReport& report) { return whiteness_object(report).dump(2) + "\n"; }

void emit_plotdata(const PipelineResults& results, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_stream(dir / "ccdf_pos.csv", [&](std::ostream& os) { write_ccdf(os, results.ccdf_positive); });
    write_stream(dir / "ccdf_neg.csv", [&](std::ostream& os) { write_ccdf(os, results.ccdf_negative); });
    // Overlay lines come from the first configured region.
    for (const Side side : {Side::positive, Side::negative}) {
        const auto it = std::find_if(results.tail_fits.begin(), results.tail_fits.end(),
                                     [side](const TailFit& f) { return f.side == side; });
        if (it == results.tail_fits.end()) continue;
        const auto name = side == Side::positive ? "fit_pos.csv" : "fit_neg.csv";
        write_stream(dir / name, [&](std::ostream& os) { write_fit_curve(os, *it); });
    }
    write_stream(dir / "acf_abs.csv", [&](std::ostream& os) { write_acf(os, results.acf_abs); });
}

std::string summary_json(const PipelineResults& r) {
    Json j;
    j["period"] = r.period;
    j["n_ticks"] = r.n_ticks;
    j["skipped_lines"] = r.skipped_lines;
    if (r.bars) {
        j["bar_interval"] = r.bars->interval();
        j["n_bars"] = r.bars->size();
        j["n_filled_bars"] = static_cast<std::size_t>(std::count(r.bars->filled().begin(), r.bars->filled().end(), true));
        j["first_bar"] = r.bars->start();
    }
    j["n_returns"] = r.standardized.values.size();
    j["return_mean"] = number(r.standardized.mean_used);
    j["return_sd"] = number(r.standardized.sd_used);

    Json tails = Json::array();
    for (std::size_t i = 0; i + 1 < r.tail_fits.size(); i += 2) {
        Json row;
        row["region"] = Json::array({number(r.tail_fits[i].region.lo), number(r.tail_fits[i].region.hi)});
        row["positive_mu"] = number(r.tail_fits[i].mu);
        row["negative_mu"] = number(r.tail_fits[i + 1].mu);
        row["positive"] = tail_fit_object(r.tail_fits[i]);
        row["negative"] = tail_fit_object(r.tail_fits[i + 1]);
        tails.push_back(row);
    }
    j["tail_index"] = tails;
    j["hill"] = {{"k", r.hill_k},
                 {"positive_mu", number(r.hill_positive.mu)},
                 {"positive_stderr", number(r.hill_positive.stderr_mu)},
                 {"negative_mu", number(r.hill_negative.mu)},
                 {"negative_stderr", number(r.hill_negative.stderr_mu)}};

    Json exponents = Json::array();
    for (const auto& fit : r.acf_fits) exponents.push_back(acf_fit_object(fit));
    j["acf_exponent"] = exponents;
    Json sigmas = Json::object();
    for (const auto& [lag, s] : r.acf_abs.sigma) sigmas[std::to_string(lag)] = number(s);
    j["acf_sigma"] = sigmas;

    if (r.rv) {
        Json rv;
        rv["days"] = r.rv->size();
        rv["excluded_zero_rv"] = r.rv_standardized ? r.rv_standardized->excluded : 0;
        if (r.rv_normality) {
            rv["normality"] = {{"mean", number(r.rv_normality->mean)},
                               {"sd", number(r.rv_normality->sd)},
                               {"skewness", number(r.rv_normality->skewness)},
                               {"excess_kurtosis", number(r.rv_normality->excess_kurtosis)}};
        }
        if (r.whiteness) rv["whiteness"] = whiteness_object(*r.whiteness);
        else rv["whiteness_skipped"] = r.whiteness_skipped;
        j["rv"] = rv;
    } else {
        j["rv"] = nullptr;
    }
    return j.dump(2) + "\n";
}

void emit_bundle(const PipelineResults& results, const RunConfig& config) {
    const auto& dir = config.out_dir;
    if (dir.empty()) throw Error("no output directory configured");
    std::filesystem::create_directories(dir);
    emit_plotdata(results, dir);
    if (results.bars) write_stream(dir / "bars.csv", [&](std::ostream& os) { write_bars(os, *results.bars); });
    write_stream(dir / "returns.csv", [&](std::ostream& os) { write_returns(os, results.standardized); });
    for (const auto& fit : results.tail_fits) {
        const auto name = std::string("tailfit_") + (fit.side == Side::positive ? "pos_" : "neg_") +
                          region_tag(fit.region.lo, fit.region.hi) + ".json";
        write_file(dir / name, tail_fit_json(fit));
    }
    for (const auto& fit : results.acf_fits) {
        write_file(dir / ("acf_fit_" + region_tag(double(fit.region.lo), double(fit.region.hi)) + ".json"),
                   acf_fit_json(fit));
    }
    if (results.rv) {
        write_stream(dir / "rv.csv", [&](std::ostream& os) { write_rv(os, *results.rv); });
        if (results.whiteness) write_file(dir / "whiteness.json", whiteness_json(*results.whiteness));
    }
    write_file(dir / "summary.json", summary_json(results));
}

PipelineResults run_pipeline(const RunConfig& config) {
    auto results = run_analysis(config);
    stage("emit", [&] { emit_bundle(results, config); });
    return results;
}

}  // namespace tailscope
