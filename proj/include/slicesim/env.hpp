#pragma once

#include <cstdint>
#include <vector>

#include "slicesim/config.hpp"
#include "slicesim/mcs.hpp"
#include "slicesim/rng.hpp"

namespace slicesim {

struct TrafficSample {
    int slice_id = 0;
    long long tti = 0;
    long long demand_bits = 0;  // >= 0, negative Normal draws clamp to 0
};

struct ChannelSample {
    int slice_id = 0;
    long long tti = 0;
    double snr_db = 0.0;
    int level = 0;  // quantized into [0, channel_levels)
};

// Per-TTI aggregate demand of one slice. The Normal draw is taken in bits
// per TTI (rate in Mb/s converted at tti_ms) and clamped at zero; clamping
// biases the realized mean upward once std approaches the mean.
class TrafficGenerator {
  public:
    TrafficGenerator(const SliceSpec& spec, const SystemConfig& config, RngStream stream);

    TrafficSample draw(long long epoch, long long tti);

    // Epoch-dependent mean rate, sinusoid applied when configured.
    double mean_mbps(long long epoch) const;
    double mean_bits_per_tti(long long epoch) const;

  private:
    SliceSpec spec_;
    double tti_ms_;
    RngStream stream_;
};

// Per-TTI SNR of one slice: a Rayleigh(scale) draw mapped affinely onto
// [snr_min_db, snr_max_db]. The map is anchored so the 1st..99th percentile
// range of a Rayleigh(rayleigh_ref_scale) reference spans the window; slices
// with a larger scale spread proportionally wider (and clamp at the window
// edges), smaller scales concentrate. Draws are i.i.d. across TTIs.
class ChannelGenerator {
  public:
    ChannelGenerator(const SliceSpec& spec, const SystemConfig& config, RngStream stream);

    ChannelSample draw(long long tti);

    // Raw Rayleigh draw before the dB mapping (variance (4-pi)/2 * scale^2).
    double draw_raw(long long tti);

    double snr_from_raw(double raw) const;
    int level_from_snr(double snr_db) const;

    // Exact level / MCS occupancy probabilities implied by the mapping,
    // from the Rayleigh CDF. Used for capacity planning and normalization.
    std::vector<double> level_probabilities() const;
    std::vector<double> mcs_probabilities(const McsTable& table) const;
    double mean_bits_per_prb(const McsTable& table) const;

  private:
    SliceSpec spec_;
    double snr_min_db_;
    double snr_max_db_;
    int levels_;
    double raw_lo_;  // reference 1st percentile
    double raw_hi_;  // reference 99th percentile
    RngStream stream_;
};

// Service mapping: bits one TTI can carry on `prbs` at the given SNR.
long long zeta_bits(int prbs, double snr_db, const McsTable& table);

// Average epoch capacity (Sum_m Gamma_m pi_m) * epoch_ttis * prbs, with
// pi a distribution over the table's MCS entries (plus, as entry -1 is not
// representable, index 0 of pi may absorb the out-of-range mass at 0 bits
// by the caller's convention). Rejects pi that does not sum to 1 (1e-9).
double capacity_estimate(const std::vector<double>& mcs_distribution, long long epoch_ttis,
                         int prbs, const McsTable& table);

}  // namespace slicesim
