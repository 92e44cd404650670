#include "slicesim/config.hpp"

#include <stdexcept>

namespace slicesim {

void SystemConfig::validate() const {
    if (capacity_prbs <= 0) {
        throw std::invalid_argument("config: capacity_prbs must be positive");
    }
    if (chunk_prbs <= 0 || capacity_prbs % chunk_prbs != 0) {
        throw std::invalid_argument("config: chunk_prbs must divide capacity_prbs");
    }
    if (tti_ms <= 0.0) {
        throw std::invalid_argument("config: tti_ms must be positive");
    }
    if (epoch_ttis < 1) {
        throw std::invalid_argument("config: epoch_ttis must be >= 1");
    }
    if (horizon_epochs < 1) {
        throw std::invalid_argument("config: horizon_epochs must be >= 1");
    }
    if (channel_levels < 1) {
        throw std::invalid_argument("config: channel_levels must be >= 1");
    }
    if (reward_exponent < 0.0 || reward_exponent > 1.0) {
        throw std::invalid_argument("config: reward_exponent must be in [0, 1]");
    }
    if (snr_max_db <= snr_min_db) {
        throw std::invalid_argument("config: snr_max_db must exceed snr_min_db");
    }
    if (rayleigh_ref_scale <= 0.0) {
        throw std::invalid_argument("config: rayleigh_ref_scale must be positive");
    }
}

void SliceSpec::validate() const {
    if (latency_tolerance_ms <= 0.0) {
        throw std::invalid_argument("slice: latency_tolerance_ms must be positive");
    }
    if (traffic_std_mbps < 0.0) {
        throw std::invalid_argument("slice: traffic_std_mbps must be >= 0");
    }
    if (traffic_mean_mbps < 0.0) {
        throw std::invalid_argument("slice: traffic_mean_mbps must be >= 0");
    }
    if (rayleigh_scale <= 0.0) {
        throw std::invalid_argument("slice: rayleigh_scale must be positive");
    }
    if (modulation) {
        if (modulation->low_mbps <= 0.0 || modulation->high_mbps < modulation->low_mbps) {
            throw std::invalid_argument("slice: sinusoid needs 0 < low <= high");
        }
        if (modulation->period_epochs <= 0.0) {
            throw std::invalid_argument("slice: sinusoid period must be positive");
        }
    }
}

std::uint64_t arm_count(int num_slices, int chunks) {
    // (chunks + num_slices - 1) choose (num_slices - 1)
    std::uint64_t result = 1;
    for (int i = 1; i <= num_slices - 1; ++i) {
        result = result * static_cast<std::uint64_t>(chunks + i) / static_cast<std::uint64_t>(i);
    }
    return result;
}

namespace {

void compose(int remaining_chunks, int slots_left, int chunk_prbs,
             std::vector<int>& current, std::vector<SlicingConfiguration>& out) {
    if (slots_left == 1) {
        current.push_back(remaining_chunks * chunk_prbs);
        out.push_back({static_cast<int>(out.size()), current});
        current.pop_back();
        return;
    }
    for (int take = 0; take <= remaining_chunks; ++take) {
        current.push_back(take * chunk_prbs);
        compose(remaining_chunks - take, slots_left - 1, chunk_prbs, current, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<SlicingConfiguration> enumerate_arms(int num_slices, const SystemConfig& config) {
    if (num_slices < 1) {
        throw std::invalid_argument("enumerate_arms: need at least one slice");
    }
    config.validate();
    std::vector<SlicingConfiguration> arms;
    arms.reserve(arm_count(num_slices, config.chunks()));
    std::vector<int> current;
    compose(config.chunks(), num_slices, config.chunk_prbs, current, arms);
    return arms;
}

}  // namespace slicesim
