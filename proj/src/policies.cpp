#include "slicesim/policies.hpp"

#include <cmath>
#include <stdexcept>

#include "slicesim/env.hpp"

namespace slicesim {

PolicyKind parse_policy(const std::string& name) {
    if (name == "laco") return PolicyKind::laco;
    if (name == "ucb") return PolicyKind::ucb;
    if (name == "ts") return PolicyKind::ts;
    if (name == "rr") return PolicyKind::rr;
    if (name == "oracle") return PolicyKind::oracle;
    throw std::invalid_argument("unknown policy '" + name + "'");
}

std::string policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::laco: return "laco";
        case PolicyKind::ucb: return "ucb";
        case PolicyKind::ts: return "ts";
        case PolicyKind::rr: return "rr";
        case PolicyKind::oracle: return "oracle";
    }
    return "?";
}

BanditState::BanditState(int num_arms, bool overwrite_mean)
    : pulls_(static_cast<std::size_t>(num_arms), 0),
      sums_(static_cast<std::size_t>(num_arms), 0.0),
      means_(static_cast<std::size_t>(num_arms), 0.0),
      accuracy_(static_cast<std::size_t>(num_arms), 1.0),
      overwrite_mean_(overwrite_mean) {
    if (num_arms < 1) {
        throw std::invalid_argument("bandit state: need at least one arm");
    }
}

bool BanditState::initialized() const {
    for (long long z : pulls_) {
        if (z == 0) {
            return false;
        }
    }
    return true;
}

void BanditState::set_accuracy(int arm, double psi) {
    if (psi <= 0.0 || psi > 1.0) {
        throw std::invalid_argument("bandit state: accuracy must lie in (0, 1]");
    }
    accuracy_[arm] = psi;
}

void BanditState::update(int arm, double reward) {
    ++pulls_[arm];
    ++total_pulls_;
    sums_[arm] += reward;
    means_[arm] = overwrite_mean_ ? reward : sums_[arm] / static_cast<double>(pulls_[arm]);
}

double model_reward(const SteadyState& steady, double eta) {
    if (eta < 0.0 || eta > 1.0) {
        throw std::invalid_argument("model_reward: eta must be in [0, 1]");
    }
    return std::pow(latency_ok_mass(steady), eta);
}

double classic_reward(const SlicingConfiguration& arm, const std::vector<double>& snr_db,
                      const std::vector<double>& offered_window_bits,
                      const std::vector<double>& delta_ms, const McsTable& table, double tti_ms) {
    const std::size_t n = arm.prbs.size();
    if (snr_db.size() != n || offered_window_bits.size() != n || delta_ms.size() != n) {
        throw std::invalid_argument("classic_reward: per-slice vectors must match the arm");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double window_ttis = delta_ms[i] / tti_ms;
        const double zeta_window =
            static_cast<double>(zeta_bits(arm.prbs[i], snr_db[i], table)) * window_ttis;
        sum += zeta_window - offered_window_bits[i] / delta_ms[i];
    }
    return sum;
}

namespace {

int index_argmax(const BanditState& state, bool use_accuracy) {
    if (!state.initialized()) {
        throw std::logic_error("select: initialization sweep incomplete (some arm never pulled)");
    }
    const double log_total = std::log(static_cast<double>(state.total_pulls()));
    int best = 0;
    double best_index = -1e300;
    for (int arm = 0; arm < state.arms(); ++arm) {
        const double psi = use_accuracy ? state.accuracy(arm) : 1.0;
        const double bonus =
            psi * std::sqrt(2.0 * log_total / static_cast<double>(state.pulls(arm)));
        const double value = state.mean_reward(arm) + bonus;
        if (value > best_index) {
            best_index = value;
            best = arm;
        }
    }
    return best;
}

}  // namespace

int laco_select(const BanditState& state) { return index_argmax(state, true); }

int ucb_select(const BanditState& state) { return index_argmax(state, false); }

int ts_select(const BanditState& state, RngStream& stream, double prior_mean,
              double prior_variance) {
    if (prior_variance <= 0.0) {
        throw std::invalid_argument("ts_select: prior variance must be positive");
    }
    int best = 0;
    double best_sample = -1e300;
    for (int arm = 0; arm < state.arms(); ++arm) {
        const long long z = state.pulls(arm);
        const double mean = z == 0 ? prior_mean : state.mean_reward(arm);
        const double variance = z == 0 ? prior_variance : 1.0 / static_cast<double>(z + 1);
        const double sample = stream.normal(mean, std::sqrt(variance));
        if (sample > best_sample) {
            best_sample = sample;
            best = arm;
        }
    }
    return best;
}

int oracle_select(const std::vector<double>& true_means) {
    if (true_means.empty()) {
        throw std::invalid_argument("oracle_select: no arms");
    }
    int best = 0;
    for (int arm = 1; arm < static_cast<int>(true_means.size()); ++arm) {
        if (true_means[arm] > true_means[best]) {
            best = arm;
        }
    }
    return best;
}

std::vector<int> round_robin_allocation(const std::vector<bool>& has_backlog, long long tti,
                                        const SystemConfig& config) {
    const int slices = static_cast<int>(has_backlog.size());
    std::vector<int> prbs(static_cast<std::size_t>(slices), 0);
    bool any = false;
    for (bool b : has_backlog) {
        any = any || b;
    }
    if (!any) {
        return prbs;
    }
    int cursor = static_cast<int>(tti % slices);
    for (int chunk = 0; chunk < config.chunks(); ++chunk) {
        while (!has_backlog[cursor]) {
            cursor = (cursor + 1) % slices;
        }
        prbs[cursor] += config.chunk_prbs;
        cursor = (cursor + 1) % slices;
    }
    return prbs;
}

}  // namespace slicesim
