#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tailscope/ingest.h"
#include "tailscope/memory.h"
#include "tailscope/returns.h"
#include "tailscope/rv.h"
#include "tailscope/scaling.h"
#include "tailscope/synth.h"

namespace tailscope {

/// Everything a full run needs. Defaults reproduce the standard analysis:
/// 60 s bars, tail regions [2,20] for a single period and [1,10] for the
/// full sample, ACF regions [3,500] and [1500,10000], RV on 300 s bars.
struct RunConfig {
    std::vector<std::filesystem::path> inputs;
    std::string period = "all";  // I, II, full, all (no filter) or custom
    std::optional<TimeRange> range;
    std::int64_t bar_interval = 60;
    BarPrice price_rule = BarPrice::close;
    std::vector<FitRegion> tail_regions;  // empty: default for the period
    double hill_fraction = 0.001;
    std::size_t acf_max_lag = 10000;
    std::vector<std::size_t> sigma_lags{100, 1000};
    std::size_t jackknife_blocks = kDefaultJackknifeBlocks;
    std::vector<LagRegion> acf_regions{{3, 500}, {1500, 10000}};
    bool rv = true;
    std::filesystem::path out_dir;
    unsigned threads = 0;

    // When set, ticks are generated instead of read from `inputs`: one trade
    // per bar of a price path built from the synthetic returns.
    std::optional<SyntheticSpec> synthetic;
    double synthetic_scale = 1e-3;
    std::int64_t synthetic_start = 1420070400;  // 2015-01-01T00:00:00Z

    std::vector<FitRegion> effective_tail_regions() const;
    void validate() const;
};

/// Applies one `key = value` setting. Unknown keys throw.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Flat key-value file: one `key = value` per line, `#` starts a comment.
RunConfig load_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

struct PipelineResults {
    std::string period;
    std::size_t n_ticks = 0;
    std::size_t skipped_lines = 0;
    std::optional<BarSeries> bars;
    ReturnSeries returns;
    ReturnSeries standardized;
    CcdfPoints ccdf_positive;
    CcdfPoints ccdf_negative;
    std::vector<TailFit> tail_fits;  // positive then negative, per region
    HillEstimate hill_positive;
    HillEstimate hill_negative;
    std::size_t hill_k = 0;
    AcfEstimate acf_abs;
    std::vector<AcfPowerLawFit> acf_fits;
    std::optional<RvSeries> rv;
    std::optional<StandardizedReturns> rv_standardized;
    std::optional<NormalityStats> rv_normality;
    std::optional<WhitenessReport> whiteness;
    std::string whiteness_skipped;  // reason, when the series was too short
};

/// Runs every stage in memory. Failures are rethrown as StageError naming
/// the stage.
PipelineResults run_analysis(const RunConfig& config);

/// Writes the plot-ready tables: ccdf_{pos,neg}.csv, fit_{pos,neg}.csv and
/// acf_abs.csv.
void emit_plotdata(const PipelineResults& results, const std::filesystem::path& dir);

/// Writes the complete bundle (plot data, bars, returns, fits, RV, summary).
void emit_bundle(const PipelineResults& results, const RunConfig& config);

PipelineResults run_pipeline(const RunConfig& config);

/// Summary document mirroring the tail-index and ACF-exponent tables.
std::string summary_json(const PipelineResults& results);

// JSON documents for single-stage outputs, shared with the CLI so a stage
// rerun reproduces the bundle bytes.
std::string tail_fit_json(const TailFit& fit);
std::string acf_fit_json(const AcfPowerLawFit& fit);
std::string whiteness_json(const WhitenessReport& report);

void write_ccdf(std::ostream& out, const CcdfPoints& points);
void write_fit_curve(std::ostream& out, const TailFit& fit);
void write_acf(std::ostream& out, const AcfEstimate& estimate);

}  // namespace tailscope
