#pragma once

#include <string>
#include <vector>

#include "slicesim/config.hpp"
#include "slicesim/dtmc.hpp"
#include "slicesim/mcs.hpp"
#include "slicesim/rng.hpp"

namespace slicesim {

enum class PolicyKind { laco, ucb, ts, rr, oracle };

PolicyKind parse_policy(const std::string& name);
std::string policy_name(PolicyKind kind);

// Per-arm pull counts, reward means and model-accuracy values. The mean is
// an exact running mean by default; overwrite mode replaces it with the
// latest reward instead (ablation of the two update readings).
class BanditState {
  public:
    explicit BanditState(int num_arms, bool overwrite_mean = false);

    int arms() const { return static_cast<int>(pulls_.size()); }
    long long pulls(int arm) const { return pulls_[arm]; }
    long long total_pulls() const { return total_pulls_; }
    double mean_reward(int arm) const { return means_[arm]; }
    double accuracy(int arm) const { return accuracy_[arm]; }
    bool initialized() const;  // every arm pulled at least once

    void set_accuracy(int arm, double psi);
    void update(int arm, double reward);

  private:
    std::vector<long long> pulls_;
    std::vector<double> sums_;
    std::vector<double> means_;
    std::vector<double> accuracy_;
    long long total_pulls_ = 0;
    bool overwrite_mean_ = false;
};

// Model reward: latency-ok steady-state mass raised to eta. In [0, 1].
double model_reward(const SteadyState& steady, double eta);

// Classic bandit reward sum_i (zeta_i - lambda_i / delta_i). Units: zeta is
// evaluated over a window of delta_i (bits a slice can carry in one latency
// tolerance), offered_window_bits is the traffic offered over the same
// window, delta in ms.
double classic_reward(const SlicingConfiguration& arm, const std::vector<double>& snr_db,
                      const std::vector<double>& offered_window_bits,
                      const std::vector<double>& delta_ms, const McsTable& table, double tti_ms);

// Index selection: argmax of mean + accuracy * sqrt(2 log(total) / pulls),
// ties to the lowest arm index. Throws std::logic_error before the
// initialization sweep completed.
int laco_select(const BanditState& state);

// Plain UCB index (unit accuracy), implemented independently of laco_select
// so the two can be cross-checked.
int ucb_select(const BanditState& state);

// Thompson sampling with Gaussian posteriors N(mean, 1/(pulls+1)); arms
// never pulled sample from N(prior_mean, prior_variance).
int ts_select(const BanditState& state, RngStream& stream, double prior_mean,
              double prior_variance);

// Argmax of externally supplied true means, ties to the lowest index.
int oracle_select(const std::vector<double>& true_means);

// TTI-level round-robin chunk dealing: chunks cycle over slices that have
// backlog, starting offset rotates each TTI; slices with empty buffers are
// skipped. Returns a PRB count per slice (not an arm).
std::vector<int> round_robin_allocation(const std::vector<bool>& has_backlog, long long tti,
                                        const SystemConfig& config);

}  // namespace slicesim
