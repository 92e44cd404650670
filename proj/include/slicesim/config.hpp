#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace slicesim {

// Sinusoidal mean-rate modulation across decision epochs:
//   mean(n) = low + (high - low) * (1 + sin(2*pi*n/period + phase)) / 2
struct SinusoidModulation {
    double low_mbps = 0.0;
    double high_mbps = 0.0;
    double period_epochs = 1.0;
    double phase_rad = 0.0;
};

// Base-station level knobs shared by every slice.
struct SystemConfig {
    int capacity_prbs = 100;       // C
    int chunk_prbs = 10;           // allocation granularity
    double tti_ms = 1.0;           // scheduling tick
    int epoch_ttis = 1000;         // TTIs per decision epoch
    int horizon_epochs = 500;      // decision epochs per run
    int channel_levels = 4;        // quantized channel quality levels
    double reward_exponent = 1.0;  // eta in [0, 1]
    std::uint64_t rng_seed = 1;

    // SNR operating window the Rayleigh draws are mapped onto, anchored at
    // rayleigh_ref_scale (see ChannelGenerator).
    double snr_min_db = 0.0;
    double snr_max_db = 30.0;
    double rayleigh_ref_scale = 0.2;

    void validate() const;
    int chunks() const { return capacity_prbs / chunk_prbs; }
};

// Per-tenant SLA plus traffic/channel statistics.
struct SliceSpec {
    int id = 0;
    double latency_tolerance_ms = 20.0;  // Delta
    double throughput_sla_mbps = 0.0;    // informational
    double traffic_mean_mbps = 0.0;
    double traffic_std_mbps = 0.0;
    std::optional<SinusoidModulation> modulation;
    double rayleigh_scale = 0.2;

    void validate() const;
};

// One point of the action space: a PRB split summing to capacity, every
// entry a multiple of the chunk size. arm_index is the position in the
// lexicographically ordered enumeration and is stable across runs.
struct SlicingConfiguration {
    int arm_index = 0;
    std::vector<int> prbs;
};

// All ordered compositions of C/chunk chunks over num_slices slices, scaled
// back to PRBs, in lexicographic order of the allocation vector.
std::vector<SlicingConfiguration> enumerate_arms(int num_slices, const SystemConfig& config);

// Composition count without enumerating: (chunks + slices - 1) choose (slices - 1).
std::uint64_t arm_count(int num_slices, int chunks);

}  // namespace slicesim
