#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

#include "tailscope/error.h"
#include "tailscope/pipeline.h"

using namespace tailscope;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("tailscope_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::map<std::string, std::string> bundle(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) files[entry.path().filename().string()] = slurp(entry.path());
    return files;
}

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

// i.i.d. Pareto returns have no memory, so no ACF power law is fitted.
RunConfig pareto_config(const fs::path& out) {
    std::istringstream text(R"(# synthetic pareto(3) run
synth.model = pareto
synth.mu = 3
synth.n = 100000
seed = 5
acf_max_lag = 2000
sigma_lags = 100
acf_regions =
out_dir = )" + out.string() + "\n");
    return load_config(text);
}

RunConfig garch_config(const fs::path& out) {
    std::istringstream text(R"(
synth.model = garch
synth.n = 200000
seed = 8
acf_max_lag = 300
sigma_lags = 100
acf_regions = 3:100
rv = false
out_dir = )" + out.string() + "\n");
    return load_config(text);
}

}  // namespace

TEST_CASE("config parsing") {
    std::istringstream text(R"(
input = a.csv, b.csv   # two files
period = II
bar_interval = 120
price_rule = median
tail_regions = 2:20, 1:10
sigma_lags = 5
acf_regions = 3:500,1500:10000
rv = false
)");
    const auto c = load_config(text);
    CHECK(c.inputs == std::vector<fs::path>{"a.csv", "b.csv"});
    CHECK(c.period == "II");
    REQUIRE(c.range);
    CHECK(c.range->begin == 1420070400);
    CHECK(c.bar_interval == 120);
    CHECK(c.price_rule == BarPrice::median);
    REQUIRE(c.tail_regions.size() == 2);
    CHECK(c.tail_regions[1].lo == 1.0);
    CHECK(c.sigma_lags == std::vector<std::size_t>{5});
    CHECK(c.acf_regions.size() == 2);
    CHECK(c.acf_regions[1].hi == 10000);
    CHECK_FALSE(c.rv);
    CHECK_NOTHROW(c.validate());

    RunConfig d;
    apply_setting(d, "period", "full");
    CHECK(d.effective_tail_regions().front().lo == 1.0);
    apply_setting(d, "from", "2016-01-01");
    CHECK(d.period == "custom");
    CHECK(d.range->end == 1592784000);

    RunConfig e;
    CHECK_THROWS_AS(apply_setting(e, "nonsense", "1"), Error);
    CHECK_THROWS_AS(apply_setting(e, "synth.mu", "3"), Error);  // no model selected
    CHECK_THROWS_AS(apply_setting(e, "synth.nu", "4"), Error);
    CHECK_THROWS_AS(apply_setting(e, "bar_interval", "sixty"), Error);
    std::istringstream bad("period II\n");
    CHECK_THROWS_AS(load_config(bad), Error);
    CHECK_THROWS_AS(e.validate(), Error);  // no inputs
    e.inputs = {"x.csv"};
    e.acf_max_lag = 400;
    CHECK_THROWS_AS(e.validate(), Error);  // default ACF regions exceed max lag
}

TEST_CASE("synthetic pareto(3) run recovers the tail index on both sides") {
    const auto out = scratch("pareto");
    auto config = pareto_config(out);
    config.synthetic->n = 600000;
    config.sigma_lags = {100, 1000};
    const auto res = run_pipeline(config);
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    const auto& row = summary["tail_index"][0];
    CHECK(row["positive_mu"].get<double>() >= 2.7);
    CHECK(row["positive_mu"].get<double>() <= 3.3);
    CHECK(row["negative_mu"].get<double>() >= 2.7);
    CHECK(row["negative_mu"].get<double>() <= 3.3);
    CHECK(summary["n_returns"].get<std::size_t>() == 600000);
    CHECK(res.rv.has_value());

    for (const char* name : {"bars.csv", "returns.csv", "ccdf_pos.csv", "ccdf_neg.csv", "fit_pos.csv", "fit_neg.csv",
                             "acf_abs.csv", "tailfit_pos_2_20.json", "tailfit_neg_2_20.json", "rv.csv", "summary.json"})
        CHECK_MESSAGE(fs::exists(out / name), name);

    CHECK(line_count(slurp(out / "fit_pos.csv")) == 51);
    const auto acf_text = slurp(out / "acf_abs.csv");
    CHECK(line_count(acf_text) == 2002);
    std::istringstream rows(acf_text);
    std::string line;
    std::size_t with_sigma = 0;
    while (std::getline(rows, line)) {
        if (line.back() != ',' && line != "lag,acf,sigma") {
            ++with_sigma;
            CHECK((line.rfind("100,", 0) == 0 || line.rfind("1000,", 0) == 0));
        }
    }
    CHECK(with_sigma == 2);
    CHECK(acf_text.find("\n0,1,\n") != std::string::npos);
}

TEST_CASE("empty sigma request leaves the sigma column empty") {
    auto config = pareto_config(scratch("nosigma"));
    config.sigma_lags.clear();
    config.rv = false;
    run_pipeline(config);
    const auto acf_text = slurp(config.out_dir / "acf_abs.csv");
    std::istringstream rows(acf_text);
    std::string line;
    std::getline(rows, line);
    CHECK(line == "lag,acf,sigma");
    while (std::getline(rows, line)) CHECK(line.back() == ',');
    CHECK_FALSE(fs::exists(config.out_dir / "rv.csv"));
    CHECK(nlohmann::json::parse(slurp(config.out_dir / "summary.json"))["rv"].is_null());
}

TEST_CASE("a period that excludes all data is an ingest-stage error") {
    auto config = pareto_config(scratch("empty"));
    apply_setting(config, "period", "I");  // synthetic data starts in 2015
    try {
        run_analysis(config);
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "ingest");
        CHECK(std::string(e.what()).find("no records") != std::string::npos);
    }
}

TEST_CASE("identical configs produce byte-identical bundles") {
    auto a = garch_config(scratch("det_a"));
    auto b = garch_config(scratch("det_b"));
    a.rv = b.rv = true;
    b.threads = 1;
    run_pipeline(a);
    run_pipeline(b);
    const auto fa = bundle(a.out_dir);
    const auto fb = bundle(b.out_dir);
    CHECK(fa.size() >= 10);
    CHECK(fa == fb);
}

TEST_CASE("summary numbers are reproduced by single-stage reruns") {
    auto config = garch_config(scratch("trace"));
    run_pipeline(config);
    std::ifstream in(config.out_dir / "returns.csv");
    auto returns = read_returns(in);
    returns.standardized = true;
    const auto summary = nlohmann::json::parse(slurp(config.out_dir / "summary.json"));
    for (const Side side : {Side::positive, Side::negative}) {
        const auto fit = fit_tail(ccdf(returns, side), {2, 20});
        const auto name = std::string("tailfit_") + (side == Side::positive ? "pos" : "neg") + "_2_20.json";
        CHECK(tail_fit_json(fit) == slurp(config.out_dir / name));
        const auto key = side == Side::positive ? "positive_mu" : "negative_mu";
        CHECK(summary["tail_index"][0][key].get<double>() == fit.mu);
    }
    const auto a = acf(absolute_values(returns.values), 300);
    const auto fit = fit_acf_powerlaw(a, {3, 100});
    CHECK(acf_fit_json(fit) == slurp(config.out_dir / "acf_fit_3_100.json"));
    CHECK(summary["acf_exponent"][0]["exponent"].get<double>() == fit.exponent);
}
