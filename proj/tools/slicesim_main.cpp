// Command line front end: preset or config-file driven experiment runs with
// per-run CSV traces, latency CDFs and an aggregate summary.
//
// Exit codes: 0 success, 1 argument error, 2 configuration invalid,
// 3 unknown preset, 4 output directory missing/unwritable.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "slicesim/experiments.hpp"

using namespace slicesim;

int main(int argc, char** argv) {
    CLI::App app{"sliced base-station simulator and slice-allocation policy benchmark"};

    std::string preset_name;
    std::string config_path;
    std::string policy_list;
    std::string out_dir;
    int replications = -1;
    long long seed = -1;
    int horizon = -1;
    int workers = -1;
    bool serve_late = false;

    app.add_option("--preset", preset_name,
                   "scenario preset: counterphase, chunk_size, heatmap, regret_vs_slices, "
                   "convergence");
    app.add_option("--config", config_path, "experiment config file (overrides preset values)");
    app.add_option("--policy", policy_list, "comma list of laco,ucb,ts,rr,oracle");
    app.add_option("--reps", replications, "replications per variant and policy");
    app.add_option("--seed", seed, "seed base; replication r runs with seed base+r");
    app.add_option("--horizon", horizon, "decision epochs per run");
    app.add_option("--out", out_dir, "output directory (must exist)");
    app.add_option("--workers", workers, "concurrent runs (default: hardware)");
    app.add_flag("--serve-late", serve_late,
                 "serve packets past their deadline instead of dropping them");

    CLI11_PARSE(app, argc, argv);

    ExperimentSpec spec;
    try {
        if (!preset_name.empty()) {
            spec = preset(preset_name);
        } else if (config_path.empty()) {
            std::cerr << "error: need --preset and/or --config\n";
            return 1;
        } else {
            spec.variants.push_back({"custom", SystemConfig{}, {}, {}});
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }

    try {
        if (!config_path.empty()) {
            spec = parse_experiment_file(config_path, std::move(spec));
        }
        if (!policy_list.empty()) {
            spec.policies.clear();
            std::istringstream ps(policy_list);
            std::string token;
            while (std::getline(ps, token, ',')) {
                if (!token.empty()) {
                    spec.policies.push_back(parse_policy(token));
                }
            }
        }
        if (replications >= 0) {
            spec.replications = replications;
        }
        if (seed >= 0) {
            spec.seed_base = static_cast<std::uint64_t>(seed);
        }
        if (workers >= 0) {
            spec.workers = workers;
        }
        if (horizon > 0) {
            for (auto& variant : spec.variants) {
                variant.config.horizon_epochs = horizon;
            }
        }
        if (serve_late) {
            spec.options.serve_late = true;
        }
        for (auto& variant : spec.variants) {
            variant.config.validate();
            if (variant.slices.empty()) {
                throw std::invalid_argument("no slices configured");
            }
        }
        if (spec.policies.empty() || spec.replications < 1) {
            throw std::invalid_argument("need at least one policy and one replication");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    // validate the output target before any work so failures leave no files
    if (!out_dir.empty() && !std::filesystem::is_directory(out_dir)) {
        std::cerr << "error: output directory does not exist: " << out_dir << '\n';
        return 4;
    }

    const auto results = run_experiment_spec(spec);

    if (!out_dir.empty()) {
        try {
            write_outputs(spec, results, out_dir);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 4;
        }
    }
    std::cout << one_page_report(spec, results);
    if (!out_dir.empty()) {
        std::cout << "outputs written to " << out_dir << '\n';
    }
    return 0;
}
