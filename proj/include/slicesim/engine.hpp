#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "slicesim/config.hpp"
#include "slicesim/env.hpp"
#include "slicesim/estimator.hpp"
#include "slicesim/mcs.hpp"
#include "slicesim/policies.hpp"

namespace slicesim {

// Per-slice FIFO of aggregate packets (one per TTI with nonzero demand).
// Under the strict drop policy packets whose waiting time exceeds the
// latency tolerance are expired into the dropped counter and never served;
// with serve_late they stay and their bits count as late service instead.
class VirtualQueue {
  public:
    struct Packet {
        long long arrival_tti;
        long long remaining_bits;
    };
    struct ExpireResult {
        long long dropped_bits = 0;
    };
    struct ServeResult {
        long long served_bits = 0;
        long long served_late_bits = 0;
        long long max_latency_ttis = 0;
        double latency_bits_ttis = 0.0;  // sum of bits * latency, for means
    };

    void push(long long arrival_tti, long long bits);
    ExpireResult expire(long long now_tti, long long delta_ttis);
    // Drains head-first up to the budget. With a histogram supplied, every
    // drained chunk adds its bits at index latency (in TTIs), exact.
    ServeResult serve(long long now_tti, long long budget_bits, long long delta_ttis,
                      std::vector<long long>* latency_histogram_bits = nullptr);

    bool empty() const { return packets_.empty(); }
    long long backlog_bits() const { return backlog_bits_; }

  private:
    std::deque<Packet> packets_;
    long long backlog_bits_ = 0;
};

struct SliceEpochStats {
    long long offered_bits = 0;
    long long served_bits = 0;
    long long dropped_bits = 0;
    double mean_latency_ms = 0.0;
    double max_latency_ms = 0.0;
    double mean_snr_db = 0.0;
};

struct EpochRecord {
    long long epoch = 0;
    int arm = -1;  // -1: no arm (round robin)
    double reward = 0.0;
    std::vector<SliceEpochStats> slices;
};

struct RunTrace {
    std::uint64_t seed = 0;
    std::string policy;
    int num_slices = 0;
    int num_arms = 0;
    std::vector<EpochRecord> epochs;
    std::vector<int> arm_sequence;

    // run-level accounting (exact integers)
    std::vector<long long> total_offered_bits;
    std::vector<long long> total_served_bits;
    std::vector<long long> total_dropped_bits;
    std::vector<long long> final_backlog_bits;
    bool conservation_ok = true;
    double max_served_latency_ms = 0.0;
    bool aborted = false;

    // bits served per latency (in TTIs), per slice; feeds latency CDFs
    std::vector<std::vector<long long>> latency_histogram_bits;

    // reward currency per epoch for the chosen arm and per arm under the
    // oracle replay (only filled when regret tracking is on)
    std::vector<double> chosen_currency;
    std::vector<std::vector<double>> oracle_currency;

    double mean_served_delay_ttis() const;
    long long dropped_bits_total() const;
};

struct EngineOptions {
    bool serve_late = false;
    bool track_regret = false;
    bool overwrite_mean = false;  // replace the running mean by the last reward
    double ts_prior_mean = 0.5;
    double ts_prior_variance = 1.0;
    enum class ClassicZeta { served, capacity };
    ClassicZeta classic_zeta = ClassicZeta::served;
    enum class PsiScope { per_arm, global };
    PsiScope psi_scope = PsiScope::per_arm;
    int history_window_epochs = 0;  // 0: never reset
    // keeps estimated chains irreducible when some transition was never seen
    double chain_rate_floor = 1e-6;
};

// One full run: initialization sweep over all arms (index policies), then
// select -> run epoch -> estimate -> reward -> update until the horizon.
// Bit-identical traces for identical (config, slices, policy, seed).
RunTrace run_experiment(const SystemConfig& config, const std::vector<SliceSpec>& slices,
                        const McsTable& table, PolicyKind policy, std::uint64_t seed,
                        const EngineOptions& options = {});

// Cumulative per-epoch regret against per-epoch oracle means.
std::vector<double> empirical_regret(const std::vector<int>& arm_sequence,
                                     const std::vector<std::vector<double>>& oracle_means);
// Stationary shorthand: one mean vector for every epoch.
std::vector<double> empirical_regret(const std::vector<int>& arm_sequence,
                                     const std::vector<double>& true_means);

// sum over suboptimal arms of 4 log(N)/gap + 8 gap; gaps must be positive.
double regret_upper_bound(const std::vector<double>& gaps, double horizon);

struct ArmDistribution {
    enum class Family { bernoulli, gaussian };
    Family family = Family::bernoulli;
    double mean = 0.0;
    double variance = 1.0;  // gaussian only
};

// log(N) * sum over suboptimal arms of gap / KL(arm, best).
double regret_lower_bound(const std::vector<ArmDistribution>& arms, double horizon);

}  // namespace slicesim
