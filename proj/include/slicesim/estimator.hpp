#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "slicesim/dtmc.hpp"

namespace slicesim {

// Transition counts of one slice under one arm: h[g][a][b] counts delay-flag
// moves a -> b observed while the channel sat at level g, plus unit-step
// counts of the channel level itself (multi-level jumps between consecutive
// TTIs are folded into sequences of single steps). An optional sliding
// window (in epochs) ages counts out for non-stationary scenarios; the
// default keeps everything.
class ObservationHistory {
  public:
    explicit ObservationHistory(int levels);

    void record_transition(int level, int from_delay, int to_delay);
    void record_level_step(int from_level, int to_level);

    // Sliding window control. end_epoch() closes the current epoch bucket;
    // with a window of W epochs, counts older than W epochs are dropped.
    void set_window_epochs(int epochs) { window_epochs_ = epochs; }
    void end_epoch();

    int levels() const { return levels_; }
    long long total() const { return total_; }
    long long count(int level, int from_delay, int to_delay) const;
    long long pair_total(int from_delay, int to_delay) const;  // summed over levels
    long long steps_up(int level) const { return steps_up_[level]; }
    long long steps_down(int level) const { return steps_down_[level]; }
    long long steps_from(int level) const { return steps_from_[level]; }

    // Line-oriented text format, one "level from_delay to_delay count" row
    // per nonzero counter.
    void serialize_transitions(std::ostream& out) const;
    static ObservationHistory parse_transitions(std::istream& in, int levels);

  private:
    struct Counts {
        std::vector<long long> h;  // levels * 4, index (g*2 + a)*2 + b
        std::vector<long long> up, down, from;
        void resize(int levels);
        void add(const Counts& other, long long sign);
    };

    long long& cell(Counts& c, int g, int a, int b) const;

    int levels_;
    int window_epochs_ = 0;  // 0 = never reset
    long long total_ = 0;
    Counts counts_;
    std::vector<long long> steps_up_, steps_down_, steps_from_;
    std::vector<Counts> window_;  // per-epoch deltas, only kept while windowed
    Counts current_epoch_;
};

// EM output. rho[w][a][b] is the estimated probability the delay flag moves
// a -> b when the latent level is w; rows are conditional distributions
// (rho[w][a][0] + rho[w][a][1] = 1). posterior[a][b][w] is the latent
// responsibility of a single observed a -> b move; by the model structure it
// carries no residual dependence on the observed level.
struct LatentEstimate {
    int latent_count = 0;
    std::vector<std::array<std::array<double, 2>, 2>> rho;
    std::vector<double> prior;
    std::array<std::array<std::vector<double>, 2>, 2> posterior;
    bool converged = false;
    int iterations = 0;
    std::vector<double> delta_history;  // max parameter change per iteration

    double rho_at(int w, int a, int b) const { return rho[w][a][b]; }
};

struct EmOptions {
    int max_iterations = 500;
    double tolerance = 1e-6;
    int latent_count = 0;  // 0: use the history's level count
};

// Fixed-point iteration posterior -> likelihood -> prior. Deterministic:
// priors start uniform, rho starts from level-conditional frequencies with
// add-one smoothing. Throws std::invalid_argument on an empty history.
LatentEstimate em_estimate(const ObservationHistory& history, const EmOptions& options = {});

// Weight of each latent level given the observed history (multiplicity
// weighted over the recorded moves). Uniform when the history is empty.
std::vector<double> latent_weights(const LatentEstimate& estimate,
                                   const ObservationHistory& history);

// Aggregate delay-flag transition probability: sum_w weights[w] * rho[w][a][b].
double inferred_transition(int from_delay, int to_delay, const LatentEstimate& estimate,
                           const std::vector<double>& weights);

// Markov accuracy (sum w)^2 / (W * sum w^2): 1 for uniform weights, 1/W for
// one-hot; scales the exploration bonus of the model-aware policy.
double markov_accuracy(const std::vector<double>& weights);

// Bridge estimates into chain parameters: violate/recover from rho, up/down
// from empirical unit-step frequencies. If a level's rates would push the
// stay probability negative, (up, down, violate, recover) at that level are
// shrunk by one common factor.
DtmcParams dtmc_params_from_estimates(const LatentEstimate& estimate,
                                      const ObservationHistory& history);

}  // namespace slicesim
