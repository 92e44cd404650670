#include "slicesim/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slicesim {

namespace {

double rayleigh_quantile(double scale, double p) {
    return scale * std::sqrt(-2.0 * std::log(1.0 - p));
}

double rayleigh_cdf(double scale, double x) {
    if (x <= 0.0) {
        return 0.0;
    }
    const double z = x / scale;
    return 1.0 - std::exp(-0.5 * z * z);
}

}  // namespace

TrafficGenerator::TrafficGenerator(const SliceSpec& spec, const SystemConfig& config,
                                   RngStream stream)
    : spec_(spec), tti_ms_(config.tti_ms), stream_(stream) {
    spec_.validate();
}

double TrafficGenerator::mean_mbps(long long epoch) const {
    if (!spec_.modulation) {
        return spec_.traffic_mean_mbps;
    }
    const auto& m = *spec_.modulation;
    const double s = std::sin(2.0 * M_PI * static_cast<double>(epoch) / m.period_epochs +
                              m.phase_rad);
    return m.low_mbps + (m.high_mbps - m.low_mbps) * (1.0 + s) / 2.0;
}

double TrafficGenerator::mean_bits_per_tti(long long epoch) const {
    // Mb/s -> bits per ms is a factor 1000; scale by the TTI length.
    return mean_mbps(epoch) * 1000.0 * tti_ms_;
}

TrafficSample TrafficGenerator::draw(long long epoch, long long tti) {
    const double mean_bits = mean_bits_per_tti(epoch);
    const double std_bits = spec_.traffic_std_mbps * 1000.0 * tti_ms_;
    double bits = mean_bits;
    if (std_bits > 0.0) {
        bits = stream_.normal(mean_bits, std_bits);
    }
    const long long demand = bits <= 0.0 ? 0 : std::llround(bits);
    return {spec_.id, tti, demand};
}

ChannelGenerator::ChannelGenerator(const SliceSpec& spec, const SystemConfig& config,
                                   RngStream stream)
    : spec_(spec),
      snr_min_db_(config.snr_min_db),
      snr_max_db_(config.snr_max_db),
      levels_(config.channel_levels),
      raw_lo_(rayleigh_quantile(config.rayleigh_ref_scale, 0.01)),
      raw_hi_(rayleigh_quantile(config.rayleigh_ref_scale, 0.99)),
      stream_(stream) {
    spec_.validate();
}

double ChannelGenerator::draw_raw(long long) { return stream_.rayleigh(spec_.rayleigh_scale); }

double ChannelGenerator::snr_from_raw(double raw) const {
    const double span = snr_max_db_ - snr_min_db_;
    const double snr = snr_min_db_ + (raw - raw_lo_) / (raw_hi_ - raw_lo_) * span;
    return std::clamp(snr, snr_min_db_, snr_max_db_);
}

int ChannelGenerator::level_from_snr(double snr_db) const {
    const double span = snr_max_db_ - snr_min_db_;
    const int level = static_cast<int>((snr_db - snr_min_db_) / span * levels_);
    return std::clamp(level, 0, levels_ - 1);
}

ChannelSample ChannelGenerator::draw(long long tti) {
    const double raw = draw_raw(tti);
    const double snr = snr_from_raw(raw);
    return {spec_.id, tti, snr, level_from_snr(snr)};
}

std::vector<double> ChannelGenerator::level_probabilities() const {
    // P(level = k) = P(raw in the k-th equal-width SNR bin), closed form.
    std::vector<double> probs(static_cast<std::size_t>(levels_), 0.0);
    const double span = snr_max_db_ - snr_min_db_;
    auto raw_at_snr = [&](double snr) {
        return raw_lo_ + (snr - snr_min_db_) / span * (raw_hi_ - raw_lo_);
    };
    double prev_cdf = 0.0;
    for (int k = 0; k < levels_; ++k) {
        const double upper_snr = snr_min_db_ + span * (k + 1) / levels_;
        const double cdf = k + 1 == levels_
                               ? 1.0
                               : rayleigh_cdf(spec_.rayleigh_scale, raw_at_snr(upper_snr));
        probs[static_cast<std::size_t>(k)] = cdf - prev_cdf;
        prev_cdf = cdf;
    }
    return probs;
}

std::vector<double> ChannelGenerator::mcs_probabilities(const McsTable& table) const {
    // Leading slot is the no-service mass (SNR below the lowest threshold),
    // slot i+1 matches table.entries()[i].
    const auto& entries = table.entries();
    std::vector<double> probs(entries.size() + 1, 0.0);
    const double span = snr_max_db_ - snr_min_db_;
    auto raw_at_snr = [&](double snr) {
        return raw_lo_ + (snr - snr_min_db_) / span * (raw_hi_ - raw_lo_);
    };
    auto cdf_at_snr = [&](double snr) {
        // Clamping folds out-of-window mass onto the window edges.
        if (snr <= snr_min_db_) {
            return 0.0;
        }
        if (snr >= snr_max_db_) {
            return 1.0;
        }
        return rayleigh_cdf(spec_.rayleigh_scale, raw_at_snr(snr));
    };
    double prev = cdf_at_snr(entries.front().snr_threshold_db);
    probs[0] = prev;  // below the lowest threshold: no service
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const double upper =
            i + 1 < entries.size() ? cdf_at_snr(entries[i + 1].snr_threshold_db) : 1.0;
        probs[i + 1] = upper - prev;
        prev = upper;
    }
    return probs;
}

double ChannelGenerator::mean_bits_per_prb(const McsTable& table) const {
    const auto probs = mcs_probabilities(table);
    const auto& entries = table.entries();
    double mean = 0.0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        mean += probs[i + 1] * entries[i].bits_per_prb_tti;
    }
    return mean;
}

long long zeta_bits(int prbs, double snr_db, const McsTable& table) {
    if (prbs < 0) {
        throw std::invalid_argument("zeta: negative PRB count");
    }
    return static_cast<long long>(prbs) * table.lookup(snr_db).bits_per_prb_tti;
}

double capacity_estimate(const std::vector<double>& mcs_distribution, long long epoch_ttis,
                         int prbs, const McsTable& table) {
    const auto& entries = table.entries();
    const bool with_sentinel = mcs_distribution.size() == entries.size() + 1;
    if (!with_sentinel && mcs_distribution.size() != entries.size()) {
        throw std::invalid_argument("capacity_estimate: distribution size mismatch");
    }
    double total = 0.0;
    for (double p : mcs_distribution) {
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("capacity_estimate: distribution must sum to 1");
    }
    double mean_bits = 0.0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const double p = with_sentinel ? mcs_distribution[i + 1] : mcs_distribution[i];
        mean_bits += p * entries[i].bits_per_prb_tti;
    }
    return mean_bits * static_cast<double>(epoch_ttis) * prbs;
}

}  // namespace slicesim
