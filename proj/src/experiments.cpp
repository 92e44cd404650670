#include "slicesim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace slicesim {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// expected mean payload per PRB per TTI under the preset channel settings
double mean_bits_per_prb(const SystemConfig& config, double rayleigh_scale) {
    SliceSpec probe;
    probe.rayleigh_scale = rayleigh_scale;
    ChannelGenerator gen(probe, config, RngStream(0));
    return gen.mean_bits_per_prb(McsTable::lte_default());
}

SliceSpec make_slice(int id, double delta_ms, double mean_mbps, double std_mbps, double tau) {
    SliceSpec s;
    s.id = id;
    s.latency_tolerance_ms = delta_ms;
    s.throughput_sla_mbps = mean_mbps;
    s.traffic_mean_mbps = mean_mbps;
    s.traffic_std_mbps = std_mbps;
    s.rayleigh_scale = tau;
    return s;
}

ExperimentSpec counterphase_preset() {
    ExperimentSpec spec;
    spec.name = "counterphase";
    SystemConfig cfg;
    cfg.capacity_prbs = 100;
    cfg.chunk_prbs = 10;
    cfg.epoch_ttis = 1000;
    cfg.horizon_epochs = 500;
    cfg.channel_levels = 4;
    cfg.snr_min_db = 4.0;
    cfg.snr_max_db = 32.0;
    std::vector<SliceSpec> slices;
    for (int i = 0; i < 2; ++i) {
        auto s = make_slice(i, 20.0, 24.0, std::sqrt(10.0), 0.2);
        s.throughput_sla_mbps = 40.0;
        s.modulation = SinusoidModulation{8.0, 40.0, 100.0, i == 0 ? 0.0 : M_PI};
        slices.push_back(s);
    }
    spec.variants.push_back({"counterphase", cfg, slices, {}});
    spec.policies = {PolicyKind::laco, PolicyKind::ts, PolicyKind::ucb};
    spec.notes = {
        "traffic: sinusoid 8..40 Mb/s, std sqrt(10) Mb/s, tolerance 20 ms per slice",
        "sinusoid period 100 epochs and opposite phases (not given in the scenario)",
        "rayleigh scale 0.2 per slice, snr window 4..32 dB, 4 channel levels (not given)",
        "decision epoch 1000 TTIs of 1 ms",
    };
    return spec;
}

ExperimentSpec chunk_size_preset() {
    ExperimentSpec spec;
    spec.name = "chunk_size";
    for (int theta : {2, 5, 10}) {
        SystemConfig cfg;
        cfg.capacity_prbs = 100;
        cfg.chunk_prbs = theta;
        cfg.epoch_ttis = 1000;
        cfg.horizon_epochs = 300;
        cfg.channel_levels = 4;
        cfg.snr_min_db = 4.0;
        cfg.snr_max_db = 32.0;
        std::vector<SliceSpec> slices{make_slice(0, 20.0, 12.0, 2.0, 0.2),
                                      make_slice(1, 20.0, 28.0, 2.0, 0.2)};
        spec.variants.push_back(
            {"theta_" + std::to_string(theta), cfg, slices, {{"theta", double(theta)}}});
    }
    spec.policies = {PolicyKind::laco};
    spec.notes = {
        "static scenario: constant means 12 and 28 Mb/s, std 2 Mb/s, equal 20 ms tolerance",
        "asymmetric means give a unique best split (the scenario says equal SLAs only)",
        "horizon 300 epochs of 1000 TTIs",
    };
    return spec;
}

ExperimentSpec heatmap_preset() {
    ExperimentSpec spec;
    spec.name = "heatmap";
    for (int alpha = 1; alpha <= 3; ++alpha) {
        for (int beta = 1; beta <= 3; ++beta) {
            SystemConfig cfg;
            cfg.capacity_prbs = 100;
            cfg.chunk_prbs = 10;
            cfg.epoch_ttis = 1000;
            cfg.horizon_epochs = 200;
            cfg.channel_levels = 4;
            cfg.snr_min_db = 4.0;
            cfg.snr_max_db = 32.0;
            std::vector<SliceSpec> slices{
                make_slice(0, 10.0 * beta, 10.0 * alpha, std::sqrt(10.0), 0.2),
                make_slice(1, 10.0 * beta, 10.0 * alpha, std::sqrt(10.0), 0.2)};
            spec.variants.push_back({"alpha_" + std::to_string(alpha) + "_beta_" +
                                         std::to_string(beta),
                                     cfg, slices,
                                     {{"alpha", double(alpha)}, {"beta", double(beta)}}});
        }
    }
    spec.policies = {PolicyKind::laco};
    spec.notes = {
        "requirement grid: mean 10*alpha Mb/s and tolerance 10*beta ms, alpha/beta in 1..3",
        "horizon 200 epochs (grid cell cost); otherwise the counterphase channel settings",
    };
    return spec;
}

ExperimentSpec regret_preset() {
    ExperimentSpec spec;
    spec.name = "regret_vs_slices";
    for (int slices_n : {2, 3, 4}) {
        SystemConfig cfg;
        cfg.capacity_prbs = 100;
        cfg.chunk_prbs = 20;
        cfg.epoch_ttis = 200;
        cfg.horizon_epochs = 2000;
        cfg.channel_levels = 4;
        cfg.snr_min_db = 4.0;
        cfg.snr_max_db = 32.0;
        // keep the aggregate load inside the expected capacity
        const double capacity_mbps =
            cfg.capacity_prbs * mean_bits_per_prb(cfg, 0.2) * 1000.0 / 1e6;
        const double total_mbps = 0.7 * capacity_mbps;
        double weight_sum = 0.0;
        for (int i = 0; i < slices_n; ++i) {
            weight_sum += 1.0 + 0.25 * i;
        }
        std::vector<SliceSpec> slices;
        for (int i = 0; i < slices_n; ++i) {
            const double share = (1.0 + 0.25 * i) / weight_sum;
            slices.push_back(make_slice(i, 20.0, total_mbps * share, 2.0, 0.2));
        }
        spec.variants.push_back({"slices_" + std::to_string(slices_n), cfg, slices,
                                 {{"slices", double(slices_n)}}});
    }
    spec.policies = {PolicyKind::laco, PolicyKind::ts};
    spec.options.track_regret = true;
    spec.notes = {
        "aggregate load fixed at 70% of expected capacity, split 1 : 1.25 : 1.5 : 1.75",
        "chunk 20 PRBs and 200-TTI epochs keep the per-epoch arm replay affordable",
        "regret currency: per-epoch fraction of workload not dropped, oracle by replay",
    };
    return spec;
}

ExperimentSpec convergence_preset() {
    ExperimentSpec spec;
    spec.name = "convergence";
    auto build = [&](int slices_n, int capacity, double tau, const std::string& label,
                     std::map<std::string, double> axes) {
        SystemConfig cfg;
        cfg.capacity_prbs = capacity;
        cfg.chunk_prbs = capacity / 10;  // 10% of the availability
        cfg.epoch_ttis = 200;
        cfg.horizon_epochs = 1000;
        cfg.channel_levels = 4;
        cfg.snr_min_db = 4.0;
        cfg.snr_max_db = 32.0;
        const double capacity_mbps =
            capacity * mean_bits_per_prb(cfg, tau) * 1000.0 / 1e6;
        const double total_mbps = 0.7 * capacity_mbps;
        double weight_sum = 0.0;
        for (int i = 0; i < slices_n; ++i) {
            weight_sum += 1.0 + 0.4 * i;
        }
        std::vector<SliceSpec> slices;
        for (int i = 0; i < slices_n; ++i) {
            const double share = (1.0 + 0.4 * i) / weight_sum;
            slices.push_back(make_slice(i, 20.0, total_mbps * share, 2.0, tau));
        }
        spec.variants.push_back({label, cfg, slices, std::move(axes)});
    };
    for (int slices_n : {2, 3}) {
        for (int capacity : {50, 100}) {
            build(slices_n, capacity, 0.2,
                  "slices_" + std::to_string(slices_n) + "_cap_" + std::to_string(capacity),
                  {{"slices", double(slices_n)}, {"capacity", double(capacity)}});
        }
    }
    for (double tau : {0.1, 0.2, 0.3, 0.4}) {
        std::ostringstream label;
        label << "tau_" << tau;
        build(3, 100, tau, label.str(), {{"tau", tau}});
    }
    spec.policies = {PolicyKind::laco, PolicyKind::ts, PolicyKind::ucb};
    spec.notes = {
        "bandwidth sweep: 2-3 slices over 50 or 100 PRBs, chunk at 10% of capacity",
        "snr variability sweep: rayleigh scale 0.1..0.4 at 3 slices / 100 PRBs",
        "load 70% of expected capacity, asymmetric 1 : 1.4 : 1.8 split for a unique optimum",
        "convergence epoch: first epoch after which the selected arm never changes",
        "200-TTI epochs (desk scale) over 1000 epochs",
    };
    return spec;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"counterphase", "chunk_size", "heatmap", "regret_vs_slices", "convergence"};
}

ExperimentSpec preset(const std::string& name) {
    if (name == "counterphase") return counterphase_preset();
    if (name == "chunk_size") return chunk_size_preset();
    if (name == "heatmap") return heatmap_preset();
    if (name == "regret_vs_slices") return regret_preset();
    if (name == "convergence") return convergence_preset();
    throw std::invalid_argument("unknown preset '" + name + "'");
}

namespace {

struct ParsedFile {
    std::map<std::string, std::string> system;
    std::vector<std::map<std::string, std::string>> slices;
};

ParsedFile read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("config: cannot open " + path);
    }
    ParsedFile parsed;
    std::map<std::string, std::string>* section = &parsed.system;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        auto trim = [](std::string s) {
            const auto from = s.find_first_not_of(" \t\r");
            const auto to = s.find_last_not_of(" \t\r");
            return from == std::string::npos ? std::string() : s.substr(from, to - from + 1);
        };
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line == "[slice]") {
            parsed.slices.emplace_back();
            section = &parsed.slices.back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not key = value");
        }
        (*section)[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return parsed;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("config: expected boolean, got '" + v + "'");
}

}  // namespace

ExperimentSpec parse_experiment_file(const std::string& path, ExperimentSpec base) {
    const auto parsed = read_key_value_file(path);
    if (base.variants.empty()) {
        base.variants.push_back({"custom", SystemConfig{}, {}, {}});
    }

    auto has = [&](const std::string& key) { return parsed.system.count(key) > 0; };
    auto str = [&](const std::string& key) { return parsed.system.at(key); };
    auto num = [&](const std::string& key) { return std::stod(parsed.system.at(key)); };

    if (has("name")) {
        base.name = str("name");
    }
    for (auto& variant : base.variants) {
        SystemConfig& cfg = variant.config;
        if (has("capacity_prbs")) cfg.capacity_prbs = static_cast<int>(num("capacity_prbs"));
        if (has("chunk_prbs")) cfg.chunk_prbs = static_cast<int>(num("chunk_prbs"));
        if (has("tti_ms")) cfg.tti_ms = num("tti_ms");
        if (has("epoch_ttis")) cfg.epoch_ttis = static_cast<int>(num("epoch_ttis"));
        if (has("horizon_epochs")) cfg.horizon_epochs = static_cast<int>(num("horizon_epochs"));
        if (has("channel_levels")) cfg.channel_levels = static_cast<int>(num("channel_levels"));
        if (has("reward_exponent")) cfg.reward_exponent = num("reward_exponent");
        if (has("snr_min_db")) cfg.snr_min_db = num("snr_min_db");
        if (has("snr_max_db")) cfg.snr_max_db = num("snr_max_db");
        if (has("rayleigh_ref_scale")) cfg.rayleigh_ref_scale = num("rayleigh_ref_scale");

        if (!parsed.slices.empty()) {
            variant.slices.clear();
            int id = 0;
            for (const auto& section : parsed.slices) {
                SliceSpec s;
                s.id = id++;
                auto shas = [&](const std::string& key) { return section.count(key) > 0; };
                auto snum = [&](const std::string& key) { return std::stod(section.at(key)); };
                if (shas("latency_tolerance_ms")) s.latency_tolerance_ms = snum("latency_tolerance_ms");
                if (shas("throughput_sla_mbps")) s.throughput_sla_mbps = snum("throughput_sla_mbps");
                if (shas("traffic_mean_mbps")) s.traffic_mean_mbps = snum("traffic_mean_mbps");
                if (shas("traffic_std_mbps")) s.traffic_std_mbps = snum("traffic_std_mbps");
                if (shas("rayleigh_scale")) s.rayleigh_scale = snum("rayleigh_scale");
                if (shas("sin_low_mbps") || shas("sin_high_mbps")) {
                    SinusoidModulation m;
                    m.low_mbps = shas("sin_low_mbps") ? snum("sin_low_mbps") : 0.0;
                    m.high_mbps = shas("sin_high_mbps") ? snum("sin_high_mbps") : m.low_mbps;
                    if (shas("sin_period_epochs")) m.period_epochs = snum("sin_period_epochs");
                    if (shas("sin_phase_rad")) m.phase_rad = snum("sin_phase_rad");
                    s.modulation = m;
                }
                variant.slices.push_back(s);
            }
        }
    }

    if (has("policies")) {
        base.policies.clear();
        std::istringstream ps(str("policies"));
        std::string token;
        while (std::getline(ps, token, ',')) {
            if (!token.empty()) {
                base.policies.push_back(parse_policy(token));
            }
        }
    }
    if (has("replications")) base.replications = static_cast<int>(num("replications"));
    if (has("seed")) base.seed_base = static_cast<std::uint64_t>(num("seed"));
    if (has("workers")) base.workers = static_cast<int>(num("workers"));
    if (has("serve_late")) base.options.serve_late = parse_bool(str("serve_late"));
    if (has("track_regret")) base.options.track_regret = parse_bool(str("track_regret"));
    if (has("overwrite_mean")) base.options.overwrite_mean = parse_bool(str("overwrite_mean"));
    if (has("ts_prior_mean")) base.options.ts_prior_mean = num("ts_prior_mean");
    if (has("ts_prior_variance")) base.options.ts_prior_variance = num("ts_prior_variance");
    if (has("history_window_epochs"))
        base.options.history_window_epochs = static_cast<int>(num("history_window_epochs"));
    if (has("chain_rate_floor")) base.options.chain_rate_floor = num("chain_rate_floor");
    if (has("classic_zeta")) {
        const auto v = str("classic_zeta");
        if (v == "served") {
            base.options.classic_zeta = EngineOptions::ClassicZeta::served;
        } else if (v == "capacity") {
            base.options.classic_zeta = EngineOptions::ClassicZeta::capacity;
        } else {
            throw std::invalid_argument("config: classic_zeta must be served or capacity");
        }
    }
    if (has("psi_scope")) {
        const auto v = str("psi_scope");
        if (v == "per_arm") {
            base.options.psi_scope = EngineOptions::PsiScope::per_arm;
        } else if (v == "global") {
            base.options.psi_scope = EngineOptions::PsiScope::global;
        } else {
            throw std::invalid_argument("config: psi_scope must be per_arm or global");
        }
    }
    if (has("mcs_table")) base.mcs_table_path = str("mcs_table");

    for (auto& variant : base.variants) {
        variant.config.validate();
        if (variant.slices.empty()) {
            throw std::invalid_argument("config: at least one [slice] section is required");
        }
        for (auto& s : variant.slices) {
            s.validate();
        }
    }
    if (base.policies.empty()) {
        throw std::invalid_argument("config: at least one policy is required");
    }
    if (base.replications < 1) {
        throw std::invalid_argument("config: replications must be >= 1");
    }
    return base;
}

std::string serialize_experiment(const ExperimentSpec& spec) {
    if (spec.variants.empty()) {
        throw std::invalid_argument("serialize: no variants");
    }
    const auto& variant = spec.variants.front();
    const auto& cfg = variant.config;
    std::ostringstream out;
    out << "name = " << spec.name << '\n';
    out << "capacity_prbs = " << cfg.capacity_prbs << '\n';
    out << "chunk_prbs = " << cfg.chunk_prbs << '\n';
    out << "tti_ms = " << fmt_double(cfg.tti_ms) << '\n';
    out << "epoch_ttis = " << cfg.epoch_ttis << '\n';
    out << "horizon_epochs = " << cfg.horizon_epochs << '\n';
    out << "channel_levels = " << cfg.channel_levels << '\n';
    out << "reward_exponent = " << fmt_double(cfg.reward_exponent) << '\n';
    out << "snr_min_db = " << fmt_double(cfg.snr_min_db) << '\n';
    out << "snr_max_db = " << fmt_double(cfg.snr_max_db) << '\n';
    out << "rayleigh_ref_scale = " << fmt_double(cfg.rayleigh_ref_scale) << '\n';
    out << "policies = ";
    for (std::size_t i = 0; i < spec.policies.size(); ++i) {
        out << (i ? "," : "") << policy_name(spec.policies[i]);
    }
    out << '\n';
    out << "replications = " << spec.replications << '\n';
    out << "seed = " << spec.seed_base << '\n';
    out << "workers = " << spec.workers << '\n';
    out << "serve_late = " << (spec.options.serve_late ? "true" : "false") << '\n';
    out << "track_regret = " << (spec.options.track_regret ? "true" : "false") << '\n';
    out << "overwrite_mean = " << (spec.options.overwrite_mean ? "true" : "false") << '\n';
    out << "ts_prior_mean = " << fmt_double(spec.options.ts_prior_mean) << '\n';
    out << "ts_prior_variance = " << fmt_double(spec.options.ts_prior_variance) << '\n';
    out << "history_window_epochs = " << spec.options.history_window_epochs << '\n';
    out << "chain_rate_floor = " << fmt_double(spec.options.chain_rate_floor) << '\n';
    out << "classic_zeta = "
        << (spec.options.classic_zeta == EngineOptions::ClassicZeta::served ? "served"
                                                                            : "capacity")
        << '\n';
    out << "psi_scope = "
        << (spec.options.psi_scope == EngineOptions::PsiScope::per_arm ? "per_arm" : "global")
        << '\n';
    if (!spec.mcs_table_path.empty()) {
        out << "mcs_table = " << spec.mcs_table_path << '\n';
    }
    for (const auto& s : variant.slices) {
        out << "\n[slice]\n";
        out << "latency_tolerance_ms = " << fmt_double(s.latency_tolerance_ms) << '\n';
        out << "throughput_sla_mbps = " << fmt_double(s.throughput_sla_mbps) << '\n';
        out << "traffic_mean_mbps = " << fmt_double(s.traffic_mean_mbps) << '\n';
        out << "traffic_std_mbps = " << fmt_double(s.traffic_std_mbps) << '\n';
        out << "rayleigh_scale = " << fmt_double(s.rayleigh_scale) << '\n';
        if (s.modulation) {
            out << "sin_low_mbps = " << fmt_double(s.modulation->low_mbps) << '\n';
            out << "sin_high_mbps = " << fmt_double(s.modulation->high_mbps) << '\n';
            out << "sin_period_epochs = " << fmt_double(s.modulation->period_epochs) << '\n';
            out << "sin_phase_rad = " << fmt_double(s.modulation->phase_rad) << '\n';
        }
    }
    return out.str();
}

int convergence_epoch(const std::vector<int>& arm_sequence) {
    if (arm_sequence.empty()) {
        return 0;
    }
    int k = static_cast<int>(arm_sequence.size()) - 1;
    while (k > 0 && arm_sequence[static_cast<std::size_t>(k - 1)] == arm_sequence.back()) {
        --k;
    }
    return k;
}

ExperimentResults run_experiment_spec(const ExperimentSpec& spec) {
    struct Job {
        const ExperimentVariant* variant;
        PolicyKind policy;
        int replication;
    };
    std::vector<Job> jobs;
    for (const auto& variant : spec.variants) {
        for (const auto policy : spec.policies) {
            for (int rep = 0; rep < spec.replications; ++rep) {
                jobs.push_back({&variant, policy, rep});
            }
        }
    }
    const McsTable table = spec.mcs_table_path.empty() ? McsTable::lte_default()
                                                       : McsTable::load(spec.mcs_table_path);
    ExperimentResults results;
    results.runs.resize(jobs.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= jobs.size()) {
                return;
            }
            const Job& job = jobs[idx];
            const std::uint64_t seed = spec.seed_base + static_cast<std::uint64_t>(job.replication);
            RunResult result;
            result.variant = job.variant->label;
            result.policy = job.policy;
            result.replication = job.replication;
            result.seed = seed;
            result.trace = run_experiment(job.variant->config, job.variant->slices, table,
                                          job.policy, seed, spec.options);
            result.convergence_epoch = convergence_epoch(result.trace.arm_sequence);
            if (!result.trace.oracle_currency.empty() &&
                !result.trace.arm_sequence.empty() && result.trace.arm_sequence.front() >= 0) {
                const auto regret =
                    empirical_regret(result.trace.arm_sequence, result.trace.oracle_currency);
                result.regret_at_horizon = regret.back();
                // gaps between the best arm's mean currency and the others
                const std::size_t arms = result.trace.oracle_currency.front().size();
                std::vector<double> means(arms, 0.0);
                for (const auto& epoch_vals : result.trace.oracle_currency) {
                    for (std::size_t a = 0; a < arms; ++a) {
                        means[a] += epoch_vals[a];
                    }
                }
                for (auto& m : means) {
                    m /= static_cast<double>(result.trace.oracle_currency.size());
                }
                const double best = *std::max_element(means.begin(), means.end());
                std::vector<double> gaps;
                for (double m : means) {
                    if (best - m > 1e-6) {
                        gaps.push_back(best - m);
                    }
                }
                if (!gaps.empty()) {
                    result.regret_bound = regret_upper_bound(
                        gaps, static_cast<double>(result.trace.arm_sequence.size()));
                    result.bound_ok = result.regret_at_horizon <= result.regret_bound;
                }
            }
            results.runs[idx] = std::move(result);
        }
    };

    int workers = spec.workers > 0 ? spec.workers
                                   : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    return results;
}

std::string trace_csv(const RunTrace& trace) {
    std::ostringstream out;
    out << "epoch,arm";
    for (int i = 0; i < trace.num_slices; ++i) {
        out << ",s" << i << "_offered_bits,s" << i << "_served_bits,s" << i << "_dropped_bits,s"
            << i << "_mean_latency_ms,s" << i << "_max_latency_ms,s" << i << "_mean_snr_db";
    }
    out << ",reward\n";
    for (const auto& record : trace.epochs) {
        out << record.epoch << ',' << record.arm;
        for (const auto& s : record.slices) {
            out << ',' << s.offered_bits << ',' << s.served_bits << ',' << s.dropped_bits << ','
                << fmt_double(s.mean_latency_ms) << ',' << fmt_double(s.max_latency_ms) << ','
                << fmt_double(s.mean_snr_db);
        }
        out << ',' << fmt_double(record.reward) << '\n';
    }
    return out.str();
}

std::string latency_cdf_csv(const RunTrace& trace, double tti_ms) {
    std::size_t max_len = 0;
    std::vector<double> totals(trace.latency_histogram_bits.size(), 0.0);
    for (std::size_t i = 0; i < trace.latency_histogram_bits.size(); ++i) {
        max_len = std::max(max_len, trace.latency_histogram_bits[i].size());
        for (long long bits : trace.latency_histogram_bits[i]) {
            totals[i] += static_cast<double>(bits);
        }
    }
    std::ostringstream out;
    out << "latency_ms";
    for (std::size_t i = 0; i < trace.latency_histogram_bits.size(); ++i) {
        out << ",s" << i << "_cum_fraction";
    }
    out << '\n';
    std::vector<double> cum(trace.latency_histogram_bits.size(), 0.0);
    for (std::size_t lat = 0; lat < max_len; ++lat) {
        out << fmt_double(static_cast<double>(lat) * tti_ms);
        for (std::size_t i = 0; i < trace.latency_histogram_bits.size(); ++i) {
            if (lat < trace.latency_histogram_bits[i].size()) {
                cum[i] += static_cast<double>(trace.latency_histogram_bits[i][lat]);
            }
            out << ',' << fmt_double(totals[i] > 0.0 ? cum[i] / totals[i] : 1.0);
        }
        out << '\n';
    }
    return out.str();
}

namespace {

std::string run_file_name(const RunResult& run) {
    return run.variant + "_" + policy_name(run.policy) + "_rep" +
           std::to_string(run.replication) + ".csv";
}

json config_json(const SystemConfig& cfg) {
    return json{{"capacity_prbs", cfg.capacity_prbs},
                {"chunk_prbs", cfg.chunk_prbs},
                {"tti_ms", cfg.tti_ms},
                {"epoch_ttis", cfg.epoch_ttis},
                {"horizon_epochs", cfg.horizon_epochs},
                {"channel_levels", cfg.channel_levels},
                {"reward_exponent", cfg.reward_exponent},
                {"snr_min_db", cfg.snr_min_db},
                {"snr_max_db", cfg.snr_max_db},
                {"rayleigh_ref_scale", cfg.rayleigh_ref_scale}};
}

json slice_json(const SliceSpec& s) {
    json j{{"id", s.id},
           {"latency_tolerance_ms", s.latency_tolerance_ms},
           {"throughput_sla_mbps", s.throughput_sla_mbps},
           {"traffic_mean_mbps", s.traffic_mean_mbps},
           {"traffic_std_mbps", s.traffic_std_mbps},
           {"rayleigh_scale", s.rayleigh_scale}};
    if (s.modulation) {
        j["sinusoid"] = {{"low_mbps", s.modulation->low_mbps},
                         {"high_mbps", s.modulation->high_mbps},
                         {"period_epochs", s.modulation->period_epochs},
                         {"phase_rad", s.modulation->phase_rad}};
    }
    return j;
}

}  // namespace

std::string summary_json(const ExperimentSpec& spec, const ExperimentResults& results) {
    json root;
    root["experiment"] = spec.name;
    root["notes"] = spec.notes;
    root["replications"] = spec.replications;
    root["seed_base"] = spec.seed_base;
    root["serve_late"] = spec.options.serve_late;
    json policies = json::array();
    for (auto p : spec.policies) {
        policies.push_back(policy_name(p));
    }
    root["policies"] = policies;

    json variants = json::array();
    for (const auto& variant : spec.variants) {
        json vj;
        vj["label"] = variant.label;
        vj["axes"] = variant.axes;
        vj["config"] = config_json(variant.config);
        json slices = json::array();
        for (const auto& s : variant.slices) {
            slices.push_back(slice_json(s));
        }
        vj["slices"] = slices;

        json per_policy;
        for (auto policy : spec.policies) {
            json runs = json::array();
            double dropped_sum = 0.0, delay_sum = 0.0, regret_sum = 0.0, convergence_sum = 0.0;
            int count = 0, regret_count = 0;
            for (const auto& run : results.runs) {
                if (run.variant != variant.label || run.policy != policy) {
                    continue;
                }
                json rj;
                rj["seed"] = run.seed;
                rj["trace_file"] = run_file_name(run);
                long long offered = 0, served = 0, dropped = 0, backlog = 0;
                for (std::size_t i = 0; i < run.trace.total_offered_bits.size(); ++i) {
                    offered += run.trace.total_offered_bits[i];
                    served += run.trace.total_served_bits[i];
                    dropped += run.trace.total_dropped_bits[i];
                    backlog += run.trace.final_backlog_bits[i];
                }
                rj["offered_bits"] = offered;
                rj["served_bits"] = served;
                rj["dropped_bits"] = dropped;
                rj["final_backlog_bits"] = backlog;
                rj["dropped_bits_per_slice"] = run.trace.total_dropped_bits;
                rj["mean_delay_ms"] =
                    run.trace.mean_served_delay_ttis() * variant.config.tti_ms;
                rj["max_served_latency_ms"] = run.trace.max_served_latency_ms;
                rj["conservation_ok"] = run.trace.conservation_ok;
                rj["convergence_epoch"] = run.convergence_epoch;
                if (run.regret_at_horizon >= 0.0) {
                    rj["regret_at_horizon"] = run.regret_at_horizon;
                    rj["regret_upper_bound"] = run.regret_bound;
                    rj["bound_ok"] = run.bound_ok;
                    regret_sum += run.regret_at_horizon;
                    ++regret_count;
                }
                runs.push_back(rj);
                dropped_sum += static_cast<double>(dropped);
                delay_sum += run.trace.mean_served_delay_ttis() * variant.config.tti_ms;
                convergence_sum += run.convergence_epoch;
                ++count;
            }
            json pj;
            pj["runs"] = runs;
            if (count > 0) {
                pj["mean_dropped_bits"] = dropped_sum / count;
                pj["mean_delay_ms"] = delay_sum / count;
                pj["mean_convergence_epoch"] = convergence_sum / count;
                if (regret_count > 0) {
                    pj["mean_regret_at_horizon"] = regret_sum / regret_count;
                }
            }
            per_policy[policy_name(policy)] = pj;
        }
        vj["policies"] = per_policy;
        variants.push_back(vj);
    }
    root["variants"] = variants;
    return root.dump(2);
}

namespace {

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp);
        }
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

void write_outputs(const ExperimentSpec& spec, const ExperimentResults& results,
                   const std::string& out_dir) {
    const std::filesystem::path dir(out_dir);
    if (!std::filesystem::is_directory(dir)) {
        throw std::runtime_error("output directory does not exist: " + out_dir);
    }
    for (const auto& run : results.runs) {
        write_atomic(dir / run_file_name(run), trace_csv(run.trace));
        double tti_ms = 1.0;
        for (const auto& variant : spec.variants) {
            if (variant.label == run.variant) {
                tti_ms = variant.config.tti_ms;
            }
        }
        const auto cdf_name = run.variant + "_" + policy_name(run.policy) + "_rep" +
                              std::to_string(run.replication) + "_latency_cdf.csv";
        write_atomic(dir / cdf_name, latency_cdf_csv(run.trace, tti_ms));
    }
    write_atomic(dir / "summary.json", summary_json(spec, results));
}

std::string one_page_report(const ExperimentSpec& spec, const ExperimentResults& results) {
    std::ostringstream out;
    out << "experiment: " << spec.name << "  (replications " << spec.replications
        << ", seed base " << spec.seed_base << ")\n";
    for (const auto& note : spec.notes) {
        out << "  note: " << note << '\n';
    }
    for (const auto& variant : spec.variants) {
        for (auto policy : spec.policies) {
            long long dropped = 0;
            double delay = 0.0, regret = 0.0, convergence = 0.0;
            int count = 0, regret_count = 0;
            bool bounds_ok = true, conservation = true;
            for (const auto& run : results.runs) {
                if (run.variant != variant.label || run.policy != policy) {
                    continue;
                }
                dropped += run.trace.dropped_bits_total();
                delay += run.trace.mean_served_delay_ttis() * variant.config.tti_ms;
                convergence += run.convergence_epoch;
                conservation = conservation && run.trace.conservation_ok;
                if (run.regret_at_horizon >= 0.0) {
                    regret += run.regret_at_horizon;
                    ++regret_count;
                    bounds_ok = bounds_ok && run.bound_ok;
                }
                ++count;
            }
            if (count == 0) {
                continue;
            }
            out << "  " << variant.label << " / " << policy_name(policy)
                << ": dropped_bits(mean) " << dropped / count << ", mean_delay_ms "
                << delay / count << ", convergence_epoch(mean) " << convergence / count;
            if (regret_count > 0) {
                out << ", regret@N " << regret / regret_count << " ["
                    << (bounds_ok ? "bound ok" : "bound violated") << "]";
            }
            out << (conservation ? "" : "  CONSERVATION VIOLATED") << '\n';
        }
    }
    return out.str();
}

}  // namespace slicesim
