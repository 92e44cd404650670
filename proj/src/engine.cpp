#include "slicesim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slicesim {

void VirtualQueue::push(long long arrival_tti, long long bits) {
    if (bits <= 0) {
        return;
    }
    packets_.push_back({arrival_tti, bits});
    backlog_bits_ += bits;
}

VirtualQueue::ExpireResult VirtualQueue::expire(long long now_tti, long long delta_ttis) {
    ExpireResult result;
    while (!packets_.empty() && now_tti - packets_.front().arrival_tti > delta_ttis) {
        result.dropped_bits += packets_.front().remaining_bits;
        backlog_bits_ -= packets_.front().remaining_bits;
        packets_.pop_front();
    }
    return result;
}

VirtualQueue::ServeResult VirtualQueue::serve(long long now_tti, long long budget_bits,
                                              long long delta_ttis,
                                              std::vector<long long>* latency_histogram_bits) {
    ServeResult result;
    long long budget = budget_bits;
    while (budget > 0 && !packets_.empty()) {
        Packet& head = packets_.front();
        const long long chunk = std::min(budget, head.remaining_bits);
        const long long latency = now_tti - head.arrival_tti;
        head.remaining_bits -= chunk;
        backlog_bits_ -= chunk;
        budget -= chunk;
        result.served_bits += chunk;
        result.latency_bits_ttis += static_cast<double>(chunk) * static_cast<double>(latency);
        result.max_latency_ttis = std::max(result.max_latency_ttis, latency);
        if (latency > delta_ttis) {
            result.served_late_bits += chunk;
        }
        if (latency_histogram_bits != nullptr) {
            if (latency_histogram_bits->size() <= static_cast<std::size_t>(latency)) {
                latency_histogram_bits->resize(static_cast<std::size_t>(latency) + 1, 0);
            }
            (*latency_histogram_bits)[static_cast<std::size_t>(latency)] += chunk;
        }
        if (head.remaining_bits == 0) {
            packets_.pop_front();
        }
    }
    return result;
}

double RunTrace::mean_served_delay_ttis() const {
    double bits = 0.0;
    double bits_ttis = 0.0;
    for (const auto& slice_hist : latency_histogram_bits) {
        for (std::size_t lat = 0; lat < slice_hist.size(); ++lat) {
            bits += static_cast<double>(slice_hist[lat]);
            bits_ttis += static_cast<double>(slice_hist[lat]) * static_cast<double>(lat);
        }
    }
    return bits > 0.0 ? bits_ttis / bits : 0.0;
}

long long RunTrace::dropped_bits_total() const {
    long long total = 0;
    for (long long d : total_dropped_bits) {
        total += d;
    }
    return total;
}

namespace {

struct EpochSamples {
    std::vector<std::vector<long long>> demand_bits;  // [slice][tti]
    std::vector<std::vector<ChannelSample>> channel;
};

struct SliceRunState {
    VirtualQueue queue;
    int prev_level = 0;
    int prev_delay = 0;
    bool has_prev = false;
};

struct EpochOutcome {
    std::vector<SliceEpochStats> stats;
    long long offered_total = 0;
    long long served_total = 0;
    long long dropped_total = 0;
    long long backlog_start_total = 0;
};

class Engine {
  public:
    Engine(const SystemConfig& config, const std::vector<SliceSpec>& slices, const McsTable& table,
           PolicyKind policy, std::uint64_t seed, const EngineOptions& options)
        : config_(config),
          slices_(slices),
          table_(table),
          policy_(policy),
          options_(options),
          seed_(seed),
          arms_(enumerate_arms(static_cast<int>(slices.size()), config)),
          state_(static_cast<int>(arms_.size()), options.overwrite_mean),
          policy_stream_(substream_seed(seed, 0, 0, StreamPurpose::policy)) {
        const int n = static_cast<int>(slices_.size());
        for (int i = 0; i < n; ++i) {
            const auto u = static_cast<std::uint64_t>(i);
            slices_[static_cast<std::size_t>(i)].validate();
            traffic_.emplace_back(slices_[static_cast<std::size_t>(i)], config_,
                                  RngStream(substream_seed(seed, 0, u, StreamPurpose::traffic)));
            channel_.emplace_back(slices_[static_cast<std::size_t>(i)], config_,
                                  RngStream(substream_seed(seed, 0, u, StreamPurpose::channel)));
            delta_ttis_.push_back(std::max<long long>(
                1, std::llround(slices_[static_cast<std::size_t>(i)].latency_tolerance_ms /
                                config_.tti_ms)));
        }
        run_state_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            std::vector<ObservationHistory> per_arm;
            per_arm.reserve(arms_.size());
            for (std::size_t a = 0; a < arms_.size(); ++a) {
                per_arm.emplace_back(config_.channel_levels);
                per_arm.back().set_window_epochs(options_.history_window_epochs);
            }
            histories_.push_back(std::move(per_arm));
            global_history_.emplace_back(config_.channel_levels);
        }
        setup_normalization();
    }

    RunTrace run();

  private:
    void setup_normalization();
    EpochSamples draw_samples(long long epoch);
    EpochOutcome run_tti_loop(const std::vector<int>& prbs, const EpochSamples& samples,
                              long long epoch, std::vector<SliceRunState>& states, int record_arm,
                              RunTrace* trace);
    static double currency(const EpochOutcome& outcome);
    double classic_value(const std::vector<int>& prbs, const EpochOutcome& outcome) const;
    double model_reward_for(int arm);
    void refresh_accuracy(int arm);
    int select_arm();
    std::vector<double> replay_all_arms(const EpochSamples& samples, long long epoch);

    SystemConfig config_;
    std::vector<SliceSpec> slices_;
    const McsTable& table_;
    PolicyKind policy_;
    EngineOptions options_;
    std::uint64_t seed_;
    std::vector<SlicingConfiguration> arms_;
    BanditState state_;
    RngStream policy_stream_;
    std::vector<TrafficGenerator> traffic_;
    std::vector<ChannelGenerator> channel_;
    std::vector<long long> delta_ttis_;
    std::vector<SliceRunState> run_state_;
    std::vector<std::vector<ObservationHistory>> histories_;  // [slice][arm]
    std::vector<ObservationHistory> global_history_;          // [slice], all arms pooled
    double classic_lo_ = 0.0;
    double classic_hi_ = 1.0;
};

void Engine::setup_normalization() {
    // Affine map for the classic reward, fixed at setup from the expected
    // per-arm value at nominal (time-average) load and the channel's
    // stationary MCS mix; realized values clamp into [0, 1].
    const int n = static_cast<int>(slices_.size());
    std::vector<double> mean_gamma(static_cast<std::size_t>(n));
    std::vector<double> mean_demand_tti(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        mean_gamma[static_cast<std::size_t>(i)] =
            channel_[static_cast<std::size_t>(i)].mean_bits_per_prb(table_);
        const auto& spec = slices_[static_cast<std::size_t>(i)];
        double mean_mbps = spec.traffic_mean_mbps;
        if (spec.modulation) {
            mean_mbps = (spec.modulation->low_mbps + spec.modulation->high_mbps) / 2.0;
        }
        mean_demand_tti[static_cast<std::size_t>(i)] = mean_mbps * 1000.0 * config_.tti_ms;
    }
    double lo = 1e300, hi = -1e300;
    for (const auto& arm : arms_) {
        double value = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const double capacity_tti = arm.prbs[idx] * mean_gamma[idx];
            const double served_tti = options_.classic_zeta == EngineOptions::ClassicZeta::served
                                          ? std::min(capacity_tti, mean_demand_tti[idx])
                                          : capacity_tti;
            const double window = static_cast<double>(delta_ttis_[idx]);
            value += served_tti * window -
                     mean_demand_tti[idx] * window / slices_[idx].latency_tolerance_ms;
        }
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    }
    if (hi - lo < 1e-9) {
        hi = lo + 1.0;
    }
    classic_lo_ = lo;
    classic_hi_ = hi;
}

EpochSamples Engine::draw_samples(long long epoch) {
    EpochSamples samples;
    const int n = static_cast<int>(slices_.size());
    samples.demand_bits.resize(static_cast<std::size_t>(n));
    samples.channel.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& demand = samples.demand_bits[static_cast<std::size_t>(i)];
        auto& chan = samples.channel[static_cast<std::size_t>(i)];
        demand.reserve(static_cast<std::size_t>(config_.epoch_ttis));
        chan.reserve(static_cast<std::size_t>(config_.epoch_ttis));
        for (int t = 0; t < config_.epoch_ttis; ++t) {
            const long long tti = epoch * config_.epoch_ttis + t;
            demand.push_back(
                traffic_[static_cast<std::size_t>(i)].draw(epoch, tti).demand_bits);
            chan.push_back(channel_[static_cast<std::size_t>(i)].draw(tti));
        }
    }
    return samples;
}

EpochOutcome Engine::run_tti_loop(const std::vector<int>& prbs, const EpochSamples& samples,
                                  long long epoch, std::vector<SliceRunState>& states,
                                  int record_arm, RunTrace* trace) {
    const int n = static_cast<int>(slices_.size());
    const bool record = trace != nullptr;
    EpochOutcome outcome;
    outcome.stats.resize(static_cast<std::size_t>(n));
    std::vector<double> snr_sum(static_cast<std::size_t>(n), 0.0);
    std::vector<double> latency_bits_ttis(static_cast<std::size_t>(n), 0.0);
    std::vector<long long> max_latency(static_cast<std::size_t>(n), 0);
    for (const auto& s : states) {
        outcome.backlog_start_total += s.queue.backlog_bits();
    }

    const bool rr = prbs.empty();
    std::vector<bool> backlog(static_cast<std::size_t>(n));
    for (int t = 0; t < config_.epoch_ttis; ++t) {
        const long long tti = epoch * config_.epoch_ttis + t;
        for (int i = 0; i < n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const long long demand = samples.demand_bits[idx][static_cast<std::size_t>(t)];
            states[idx].queue.push(tti, demand);
            outcome.stats[idx].offered_bits += demand;
        }
        std::vector<long long> dropped_now(static_cast<std::size_t>(n), 0);
        if (!options_.serve_late) {
            for (int i = 0; i < n; ++i) {
                const auto idx = static_cast<std::size_t>(i);
                dropped_now[idx] = states[idx].queue.expire(tti, delta_ttis_[idx]).dropped_bits;
            }
        }
        std::vector<int> rr_prbs;
        if (rr) {
            for (int i = 0; i < n; ++i) {
                backlog[static_cast<std::size_t>(i)] =
                    !states[static_cast<std::size_t>(i)].queue.empty();
            }
            rr_prbs = round_robin_allocation(backlog, tti, config_);
        }
        const std::vector<int>& alloc = rr ? rr_prbs : prbs;

        for (int i = 0; i < n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const auto& chan = samples.channel[idx][static_cast<std::size_t>(t)];
            snr_sum[idx] += chan.snr_db;
            const long long budget = zeta_bits(alloc[idx], chan.snr_db, table_);
            const auto served =
                states[idx].queue.serve(tti, budget, delta_ttis_[idx],
                                        record ? &trace->latency_histogram_bits[idx] : nullptr);

            auto& st = outcome.stats[idx];
            st.served_bits += served.served_bits;
            st.dropped_bits += dropped_now[idx];
            latency_bits_ttis[idx] += served.latency_bits_ttis;
            max_latency[idx] = std::max(max_latency[idx], served.max_latency_ttis);

            if (record) {
                const int d_now =
                    (dropped_now[idx] > 0 || served.served_late_bits > 0) ? 1 : 0;
                auto& rs = states[idx];
                if (rs.has_prev) {
                    if (record_arm >= 0) {
                        auto& h = histories_[idx][static_cast<std::size_t>(record_arm)];
                        h.record_transition(chan.level, rs.prev_delay, d_now);
                        h.record_level_step(rs.prev_level, chan.level);
                    }
                    auto& gh = global_history_[idx];
                    gh.record_transition(chan.level, rs.prev_delay, d_now);
                    gh.record_level_step(rs.prev_level, chan.level);
                }
                rs.prev_level = chan.level;
                rs.prev_delay = d_now;
                rs.has_prev = true;
                trace->max_served_latency_ms =
                    std::max(trace->max_served_latency_ms,
                             static_cast<double>(served.max_latency_ttis) * config_.tti_ms);
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        auto& st = outcome.stats[idx];
        st.mean_snr_db = snr_sum[idx] / config_.epoch_ttis;
        st.mean_latency_ms = st.served_bits > 0
                                 ? latency_bits_ttis[idx] / st.served_bits * config_.tti_ms
                                 : 0.0;
        st.max_latency_ms = static_cast<double>(max_latency[idx]) * config_.tti_ms;
        outcome.offered_total += st.offered_bits;
        outcome.served_total += st.served_bits;
        outcome.dropped_total += st.dropped_bits;
    }
    return outcome;
}

double Engine::currency(const EpochOutcome& outcome) {
    // fraction of the epoch's workload not lost to deadline expiry
    const double denom =
        static_cast<double>(outcome.offered_total + outcome.backlog_start_total);
    if (denom <= 0.0) {
        return 1.0;
    }
    return 1.0 - static_cast<double>(outcome.dropped_total) / denom;
}

double Engine::classic_value(const std::vector<int>& prbs, const EpochOutcome& outcome) const {
    const int n = static_cast<int>(slices_.size());
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const auto& st = outcome.stats[idx];
        const double window = static_cast<double>(delta_ttis_[idx]);
        const double window_scale = window / config_.epoch_ttis;
        double zeta_window = 0.0;
        if (options_.classic_zeta == EngineOptions::ClassicZeta::served) {
            zeta_window = static_cast<double>(st.served_bits) * window_scale;
        } else {
            zeta_window =
                static_cast<double>(zeta_bits(prbs[idx], st.mean_snr_db, table_)) * window;
        }
        const double offered_window = static_cast<double>(st.offered_bits) * window_scale;
        value += zeta_window - offered_window / slices_[idx].latency_tolerance_ms;
    }
    return value;
}

double Engine::model_reward_for(int arm) {
    double reward = 1.0;
    const double eta = config_.reward_exponent;
    for (std::size_t i = 0; i < slices_.size(); ++i) {
        auto& hist = histories_[i][static_cast<std::size_t>(arm)];
        double ok_mass = 0.5;  // uninformed
        if (hist.total() > 0) {
            const auto est = em_estimate(hist);
            auto params = dtmc_params_from_estimates(est, hist);
            // floor interior rates so the estimated chain stays irreducible
            const double floor = options_.chain_rate_floor;
            const int g = params.levels();
            for (int k = 0; k < g; ++k) {
                if (k + 1 < g) {
                    params.up[k] = std::max(params.up[k], floor);
                }
                if (k > 0) {
                    params.down[k] = std::max(params.down[k], floor);
                }
                params.violate[k] = std::clamp(params.violate[k], floor, 1.0 - floor);
                params.recover[k] = std::clamp(params.recover[k], floor, 1.0 - floor);
                const double pq = params.up[k] + params.down[k];
                const double worst = pq + std::max(params.violate[k], params.recover[k]);
                if (worst > 1.0) {
                    const double scale = 1.0 / worst;
                    params.up[k] *= scale;
                    params.down[k] *= scale;
                    params.violate[k] *= scale;
                    params.recover[k] *= scale;
                }
            }
            try {
                const auto steady = steady_state(TransitionMatrix::build(params));
                ok_mass = latency_ok_mass(steady);
            } catch (const ReducibleChainError&) {
                ok_mass = 0.5;
            }
        }
        reward *= std::pow(ok_mass, eta);
    }
    return reward;
}

void Engine::refresh_accuracy(int arm) {
    double psi_sum = 0.0;
    for (std::size_t i = 0; i < slices_.size(); ++i) {
        const auto& hist = options_.psi_scope == EngineOptions::PsiScope::global
                               ? global_history_[i]
                               : histories_[i][static_cast<std::size_t>(arm)];
        double psi = 1.0;
        if (hist.total() > 0) {
            const auto est = em_estimate(hist);
            psi = markov_accuracy(latent_weights(est, hist));
        }
        psi_sum += psi;
    }
    state_.set_accuracy(arm, psi_sum / static_cast<double>(slices_.size()));
}

int Engine::select_arm() {
    switch (policy_) {
        case PolicyKind::laco:
            return laco_select(state_);
        case PolicyKind::ucb:
            return ucb_select(state_);
        case PolicyKind::ts:
            return ts_select(state_, policy_stream_, options_.ts_prior_mean,
                             options_.ts_prior_variance);
        default:
            throw std::logic_error("select_arm: not an index policy");
    }
}

std::vector<double> Engine::replay_all_arms(const EpochSamples& samples, long long epoch) {
    std::vector<double> values;
    values.reserve(arms_.size());
    for (const auto& arm : arms_) {
        std::vector<SliceRunState> copy = run_state_;
        const auto outcome = run_tti_loop(arm.prbs, samples, epoch, copy, -1, nullptr);
        values.push_back(currency(outcome));
    }
    return values;
}

RunTrace Engine::run() {
    RunTrace trace;
    trace.seed = seed_;
    trace.policy = policy_name(policy_);
    trace.num_slices = static_cast<int>(slices_.size());
    trace.num_arms = static_cast<int>(arms_.size());
    trace.latency_histogram_bits.assign(slices_.size(), {});

    const bool index_policy = policy_ == PolicyKind::laco || policy_ == PolicyKind::ucb ||
                              policy_ == PolicyKind::ts;
    const int num_arms = static_cast<int>(arms_.size());
    std::vector<long long> offered_totals(slices_.size(), 0);
    std::vector<long long> served_totals(slices_.size(), 0);
    std::vector<long long> dropped_totals(slices_.size(), 0);

    for (long long epoch = 0; epoch < config_.horizon_epochs; ++epoch) {
        const auto samples = draw_samples(epoch);

        std::vector<double> oracle_values;
        const bool need_replay = options_.track_regret || policy_ == PolicyKind::oracle;
        if (need_replay) {
            oracle_values = replay_all_arms(samples, epoch);
        }

        int arm = -1;
        if (policy_ == PolicyKind::oracle) {
            arm = oracle_select(oracle_values);
        } else if (index_policy) {
            arm = epoch < num_arms ? static_cast<int>(epoch) : select_arm();
        }
        if (arm >= num_arms) {
            trace.aborted = true;
            break;
        }

        const std::vector<int> empty_alloc;
        const auto outcome = run_tti_loop(arm >= 0 ? arms_[static_cast<std::size_t>(arm)].prbs
                                                   : empty_alloc,
                                          samples, epoch, run_state_, arm, &trace);

        // close the epoch for the touched histories (sliding window rotation)
        if (arm >= 0) {
            for (std::size_t i = 0; i < slices_.size(); ++i) {
                histories_[i][static_cast<std::size_t>(arm)].end_epoch();
            }
        }

        double reward = 0.0;
        if (index_policy) {
            if (policy_ == PolicyKind::laco) {
                reward = model_reward_for(arm);
            } else {
                const double raw =
                    classic_value(arms_[static_cast<std::size_t>(arm)].prbs, outcome);
                reward = std::clamp((raw - classic_lo_) / (classic_hi_ - classic_lo_), 0.0, 1.0);
            }
            state_.update(arm, reward);
            if (policy_ == PolicyKind::laco) {
                refresh_accuracy(arm);
            }
        } else {
            reward = currency(outcome);
        }

        EpochRecord record;
        record.epoch = epoch;
        record.arm = arm;
        record.reward = reward;
        record.slices = outcome.stats;
        trace.epochs.push_back(std::move(record));
        trace.arm_sequence.push_back(arm);
        if (need_replay) {
            trace.chosen_currency.push_back(currency(outcome));
            trace.oracle_currency.push_back(std::move(oracle_values));
        }

        for (std::size_t i = 0; i < slices_.size(); ++i) {
            offered_totals[i] += outcome.stats[i].offered_bits;
            served_totals[i] += outcome.stats[i].served_bits;
            dropped_totals[i] += outcome.stats[i].dropped_bits;
            const long long backlog = run_state_[i].queue.backlog_bits();
            if (offered_totals[i] != served_totals[i] + dropped_totals[i] + backlog) {
                trace.conservation_ok = false;
            }
        }
    }

    trace.total_offered_bits = offered_totals;
    trace.total_served_bits = served_totals;
    trace.total_dropped_bits = dropped_totals;
    trace.final_backlog_bits.clear();
    for (auto& s : run_state_) {
        trace.final_backlog_bits.push_back(s.queue.backlog_bits());
    }
    return trace;
}

}  // namespace

RunTrace run_experiment(const SystemConfig& config, const std::vector<SliceSpec>& slices,
                        const McsTable& table, PolicyKind policy, std::uint64_t seed,
                        const EngineOptions& options) {
    config.validate();
    if (slices.empty()) {
        throw std::invalid_argument("run_experiment: need at least one slice");
    }
    Engine engine(config, slices, table, policy, seed, options);
    return engine.run();
}

std::vector<double> empirical_regret(const std::vector<int>& arm_sequence,
                                     const std::vector<std::vector<double>>& oracle_means) {
    if (oracle_means.size() != arm_sequence.size()) {
        throw std::invalid_argument("empirical_regret: need oracle means per epoch");
    }
    std::vector<double> cumulative;
    cumulative.reserve(arm_sequence.size());
    double total = 0.0;
    for (std::size_t n = 0; n < arm_sequence.size(); ++n) {
        const auto& means = oracle_means[n];
        const int best = oracle_select(means);
        const int chosen = arm_sequence[n];
        if (chosen < 0 || chosen >= static_cast<int>(means.size())) {
            throw std::invalid_argument("empirical_regret: arm index out of range");
        }
        total += means[static_cast<std::size_t>(best)] - means[static_cast<std::size_t>(chosen)];
        cumulative.push_back(total);
    }
    return cumulative;
}

std::vector<double> empirical_regret(const std::vector<int>& arm_sequence,
                                     const std::vector<double>& true_means) {
    std::vector<std::vector<double>> per_epoch(arm_sequence.size(), true_means);
    return empirical_regret(arm_sequence, per_epoch);
}

double regret_upper_bound(const std::vector<double>& gaps, double horizon) {
    if (horizon < 1.0) {
        throw std::invalid_argument("regret_upper_bound: horizon must be >= 1");
    }
    double bound = 0.0;
    for (double gap : gaps) {
        if (gap <= 0.0) {
            throw std::invalid_argument("regret_upper_bound: gaps must be positive");
        }
        bound += 4.0 * std::log(horizon) / gap + 8.0 * gap;
    }
    return bound;
}

namespace {

double kl_divergence(const ArmDistribution& a, const ArmDistribution& b) {
    if (a.family != b.family) {
        throw std::invalid_argument("regret_lower_bound: mixed distribution families");
    }
    if (a.family == ArmDistribution::Family::bernoulli) {
        const double p = a.mean;
        const double q = b.mean;
        if (p < 0.0 || p > 1.0 || q <= 0.0 || q >= 1.0) {
            throw std::invalid_argument("regret_lower_bound: KL undefined at the boundary");
        }
        double kl = 0.0;
        if (p > 0.0) {
            kl += p * std::log(p / q);
        }
        if (p < 1.0) {
            kl += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
        }
        return kl;
    }
    if (a.variance <= 0.0 || b.variance <= 0.0) {
        throw std::invalid_argument("regret_lower_bound: gaussian variance must be positive");
    }
    const double gap = a.mean - b.mean;
    return gap * gap / (2.0 * b.variance);
}

}  // namespace

double regret_lower_bound(const std::vector<ArmDistribution>& arms, double horizon) {
    if (arms.empty()) {
        throw std::invalid_argument("regret_lower_bound: no arms");
    }
    if (horizon < 1.0) {
        throw std::invalid_argument("regret_lower_bound: horizon must be >= 1");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < arms.size(); ++i) {
        if (arms[i].mean > arms[best].mean) {
            best = i;
        }
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < arms.size(); ++i) {
        const double gap = arms[best].mean - arms[i].mean;
        if (gap <= 0.0) {
            continue;
        }
        sum += gap / kl_divergence(arms[i], arms[best]);
    }
    return std::log(horizon) * sum;
}

}  // namespace slicesim
