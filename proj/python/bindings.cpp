#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <sstream>

#include "tailscope/error.h"
#include "tailscope/ingest.h"
#include "tailscope/memory.h"
#include "tailscope/parallel.h"
#include "tailscope/pipeline.h"
#include "tailscope/returns.h"
#include "tailscope/rv.h"
#include "tailscope/scaling.h"
#include "tailscope/synth.h"

namespace py = pybind11;
namespace ts = tailscope;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::span<const double> view(const Array& a) {
    if (a.ndim() != 1) throw ts::Error("expected a one-dimensional array");
    return {a.data(), static_cast<std::size_t>(a.size())};
}

Array to_array(const std::vector<double>& v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

ts::Side parse_side(const std::string& side) {
    if (side == "positive" || side == "pos") return ts::Side::positive;
    if (side == "negative" || side == "neg") return ts::Side::negative;
    throw ts::Error("side must be 'positive' or 'negative'");
}

ts::BarPrice parse_rule(const std::string& rule) {
    if (rule == "close") return ts::BarPrice::close;
    if (rule == "mean") return ts::BarPrice::mean;
    if (rule == "median") return ts::BarPrice::median;
    throw ts::Error("price rule must be close, mean or median");
}

ts::Model make_model(const std::string& name, const py::dict& params) {
    auto get = [&](const char* key, double fallback) {
        return params.contains(key) ? params[key].cast<double>() : fallback;
    };
    if (name == "gaussian") return ts::model::Gaussian{};
    if (name == "student_t") return ts::model::StudentT{get("nu", 3.0)};
    if (name == "pareto") return ts::model::Pareto{get("mu", 3.0)};
    if (name == "garch") return ts::model::Garch{get("omega", 1e-6), get("alpha", 0.09), get("beta", 0.90)};
    if (name == "sv") {
        ts::model::Sv m{get("mean_log_sigma", -6.0), get("phi", 0.98), get("sigma_eta", 0.1), 1};
        if (params.contains("hold")) m.hold = params["hold"].cast<std::size_t>();
        return m;
    }
    throw ts::Error("unknown model '" + name + "'");
}

ts::BarSeries bars_from(std::int64_t start, std::int64_t interval, const Array& prices) {
    const auto p = view(prices);
    return ts::BarSeries(start, interval, std::vector<double>(p.begin(), p.end()), std::vector<bool>(p.size(), false));
}

}  // namespace

PYBIND11_MODULE(_tailscope, m) {
    m.doc() = "Heavy-tail, long-memory and realized-volatility estimators";

    // Derived type registered last so it is matched first.
    const auto base = py::register_exception<ts::Error>(m, "TailscopeError", PyExc_ValueError);
    py::register_exception<ts::StageError>(m, "StageError", base.ptr());

    m.attr("GENERATOR_VERSION") = ts::kGeneratorVersion;
    m.def("set_thread_limit", &ts::set_thread_limit, py::arg("limit"));

    py::class_<ts::BarSeries>(m, "BarSeries")
        .def_property_readonly("start", &ts::BarSeries::start)
        .def_property_readonly("interval", &ts::BarSeries::interval)
        .def_property_readonly("prices", [](const ts::BarSeries& b) { return to_array(b.prices()); })
        .def_property_readonly("filled", [](const ts::BarSeries& b) { return b.filled(); })
        .def("__len__", &ts::BarSeries::size);

    py::class_<ts::TailFit>(m, "TailFit")
        .def_property_readonly("side", [](const ts::TailFit& f) { return std::string(ts::side_name(f.side)); })
        .def_property_readonly("region", [](const ts::TailFit& f) { return std::pair{f.region.lo, f.region.hi}; })
        .def_readonly("mu", &ts::TailFit::mu)
        .def_readonly("kappa", &ts::TailFit::kappa)
        .def_readonly("stderr_mu", &ts::TailFit::stderr_mu)
        .def_readonly("r_squared", &ts::TailFit::r_squared)
        .def_readonly("n_points", &ts::TailFit::n_points);

    py::class_<ts::AcfPowerLawFit>(m, "AcfPowerLawFit")
        .def_property_readonly("region",
                               [](const ts::AcfPowerLawFit& f) { return std::pair{f.region.lo, f.region.hi}; })
        .def_readonly("exponent", &ts::AcfPowerLawFit::exponent)
        .def_readonly("stderr_exponent", &ts::AcfPowerLawFit::stderr_exponent)
        .def_readonly("n_points", &ts::AcfPowerLawFit::n_points);

    py::class_<ts::NormalityStats>(m, "NormalityStats")
        .def_readonly("mean", &ts::NormalityStats::mean)
        .def_readonly("sd", &ts::NormalityStats::sd)
        .def_readonly("skewness", &ts::NormalityStats::skewness)
        .def_readonly("excess_kurtosis", &ts::NormalityStats::excess_kurtosis);

    py::class_<ts::WhitenessReport>(m, "WhitenessReport")
        .def_readonly("band_fraction", &ts::WhitenessReport::band_fraction)
        .def_readonly("ljung_box_20", &ts::WhitenessReport::ljung_box_20)
        .def_readonly("ljung_box_100", &ts::WhitenessReport::ljung_box_100)
        .def_readonly("n", &ts::WhitenessReport::n)
        .def_readonly("max_lag", &ts::WhitenessReport::max_lag);

    m.def(
        "bars_from_csv",
        [](const std::string& text, std::int64_t interval, std::optional<std::int64_t> begin,
           std::optional<std::int64_t> end, const std::string& rule) {
            const auto parsed = ts::parse_ticks(text);
            std::optional<ts::TimeRange> range;
            if (begin || end) range = ts::TimeRange{begin.value_or(INT64_MIN / 2), end.value_or(INT64_MAX / 2)};
            return ts::build_bars(parsed.ticks, interval, range, parse_rule(rule));
        },
        py::arg("text"), py::arg("interval") = 60, py::arg("begin") = py::none(), py::arg("end") = py::none(),
        py::arg("price_rule") = "close", "Parse tick CSV text and resample it to bars.");

    m.def(
        "log_returns", [](const ts::BarSeries& bars) { return to_array(ts::log_returns(bars).values); },
        py::arg("bars"));
    m.def(
        "standardize",
        [](const Array& x) {
            ts::ReturnSeries r;
            const auto v = view(x);
            r.values.assign(v.begin(), v.end());
            return to_array(ts::standardize(r).values);
        },
        py::arg("returns"), "Subtract the mean and divide by the sample sd.");

    m.def(
        "ccdf",
        [](const Array& z, const std::string& side, std::size_t min_obs) {
            const auto c = ts::ccdf(view(z), parse_side(side), min_obs);
            return std::pair{to_array(c.x), to_array(c.p)};
        },
        py::arg("standardized"), py::arg("side") = "positive", py::arg("min_obs") = ts::kMinTailObservations);

    m.def(
        "fit_tail",
        [](const Array& z, const std::string& side, double lo, double hi, int bins_per_decade) {
            return ts::fit_tail(ts::ccdf(view(z), parse_side(side)), {lo, hi}, {bins_per_decade});
        },
        py::arg("standardized"), py::arg("side") = "positive", py::arg("lo") = 2.0, py::arg("hi") = 20.0,
        py::arg("bins_per_decade") = 0, "Power-law fit of the empirical CCDF over [lo, hi].");

    m.def(
        "hill_estimator",
        [](const Array& x, const std::string& side, std::size_t k) {
            const auto h = ts::hill_estimator(view(x), parse_side(side), k);
            return std::pair{h.mu, h.stderr_mu};
        },
        py::arg("values"), py::arg("side"), py::arg("k"));

    m.def(
        "acf", [](const Array& x, std::size_t max_lag) { return to_array(ts::acf(view(x), max_lag).values); },
        py::arg("x"), py::arg("max_lag"));
    m.def(
        "jackknife_sigma",
        [](const Array& x, std::size_t lag, std::size_t blocks) { return ts::jackknife_sigma(view(x), lag, blocks); },
        py::arg("x"), py::arg("lag"), py::arg("blocks") = ts::kDefaultJackknifeBlocks);
    m.def(
        "fit_acf_powerlaw",
        [](const Array& values, std::size_t lo, std::size_t hi) {
            ts::AcfEstimate a;
            const auto v = view(values);
            a.values.assign(v.begin(), v.end());
            a.n = v.size();
            return ts::fit_acf_powerlaw(a, {lo, hi});
        },
        py::arg("acf_values"), py::arg("lo"), py::arg("hi"));

    m.def(
        "realized_volatility",
        [](std::int64_t start, const Array& prices) {
            const auto rvs = ts::realized_volatility(bars_from(start, ts::kRvInterval, prices));
            py::dict out;
            out["days"] = rvs.days;
            out["rv"] = to_array(rvs.rv);
            out["daily_return"] = to_array(rvs.daily_return);
            out["standardized"] = to_array(ts::standardize_by_rv(rvs).values);
            return out;
        },
        py::arg("start"), py::arg("prices"), "Daily RV from 300 s bar prices whose first bar is at `start`.");
    m.def("normality_stats", [](const Array& x) { return ts::normality_stats(view(x)); }, py::arg("x"));
    m.def("whiteness_check", [](const Array& x) { return ts::whiteness_check(view(x)); }, py::arg("x"));

    m.def(
        "generate",
        [](const std::string& model, std::size_t n, std::uint64_t seed, const py::kwargs& params) {
            const auto s = ts::generate({make_model(model, params), n, seed});
            return std::pair{to_array(s.returns), to_array(s.sigma)};
        },
        py::arg("model"), py::arg("n"), py::arg("seed"),
        "Seeded synthetic returns and, for garch and sv, the true conditional sd.");
    m.def(
        "price_path",
        [](const Array& returns, std::int64_t start, std::int64_t interval, double initial_price, double scale) {
            return ts::price_path(view(returns), start, interval, initial_price, scale);
        },
        py::arg("returns"), py::arg("start"), py::arg("interval"), py::arg("initial_price") = 100.0,
        py::arg("scale") = 1.0);

    m.def(
        "run_pipeline",
        [](const std::string& config_text, const std::filesystem::path& out_dir) {
            std::istringstream in(config_text);
            auto config = ts::load_config(in);
            config.out_dir = out_dir;
            py::gil_scoped_release release;
            return ts::summary_json(ts::run_pipeline(config));
        },
        py::arg("config"), py::arg("out_dir"),
        "Run the full pipeline from `key = value` config text; returns the summary JSON.");
}
