#pragma once

#include <map>
#include <string>
#include <vector>

#include "slicesim/engine.hpp"

namespace slicesim {

// One concrete (config, slices) point of an experiment. Presets that sweep
// a knob expand into several variants; axes carries the swept values for
// the summary (e.g. {"theta": 10} or {"alpha": 2, "beta": 1}).
struct ExperimentVariant {
    std::string label;
    SystemConfig config;
    std::vector<SliceSpec> slices;
    std::map<std::string, double> axes;
};

struct ExperimentSpec {
    std::string name = "custom";
    std::vector<ExperimentVariant> variants;
    std::vector<PolicyKind> policies{PolicyKind::laco};
    int replications = 1;
    std::uint64_t seed_base = 1;
    int workers = 0;  // 0: pick from hardware
    EngineOptions options;
    std::string mcs_table_path;        // empty: embedded default
    std::vector<std::string> notes;    // documents defaults that fill paper gaps
};

// The five scenario presets: counterphase, chunk_size, heatmap,
// regret_vs_slices, convergence. Throws std::invalid_argument for an
// unknown name.
ExperimentSpec preset(const std::string& name);
std::vector<std::string> preset_names();

// Flat key = value config file with one [slice] section per slice; parsed
// on top of `base` (file keys override preset values, slices replace the
// base slices entirely when present).
ExperimentSpec parse_experiment_file(const std::string& path, ExperimentSpec base);

// Canonical text form; parse(serialize(spec)) == spec for single-variant
// specs (multi-variant presets serialize their first variant plus name).
std::string serialize_experiment(const ExperimentSpec& spec);

struct RunResult {
    std::string variant;
    PolicyKind policy = PolicyKind::laco;
    int replication = 0;
    std::uint64_t seed = 0;
    RunTrace trace;
    int convergence_epoch = 0;
    double regret_at_horizon = -1.0;  // -1: regret not tracked
    double regret_bound = -1.0;
    bool bound_ok = true;
};

struct ExperimentResults {
    std::vector<RunResult> runs;
};

// Runs every variant x policy x replication; replication seeds are
// seed_base + replication index. Dispatches across `workers` threads.
ExperimentResults run_experiment_spec(const ExperimentSpec& spec);

// First epoch index from which the arm choice never changes again
// (horizon if the final arm is held only at the last epoch).
int convergence_epoch(const std::vector<int>& arm_sequence);

// Columnar trace: epoch, arm, per-slice offered/served/dropped/mean_latency/
// max_latency/mean_snr, reward.
std::string trace_csv(const RunTrace& trace);
// Per-slice latency CDF of served bits: latency_ms plus one cumulative
// fraction column per slice.
std::string latency_cdf_csv(const RunTrace& trace, double tti_ms);
// Aggregate summary with config echo, per-run totals, means, regret and
// bound check, and the preset's documented defaults.
std::string summary_json(const ExperimentSpec& spec, const ExperimentResults& results);

// Writes per-run traces, CDFs and summary.json into out_dir (which must
// already exist); files appear atomically via write-then-rename.
void write_outputs(const ExperimentSpec& spec, const ExperimentResults& results,
                   const std::string& out_dir);

// Per-variant, per-policy one-liners: totals, mean delay, convergence
// epoch, regret at the horizon and the bound check.
std::string one_page_report(const ExperimentSpec& spec, const ExperimentResults& results);

}  // namespace slicesim
