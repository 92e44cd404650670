#include "slicesim/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace slicesim {

void ObservationHistory::Counts::resize(int levels) {
    h.assign(static_cast<std::size_t>(levels) * 4, 0);
    up.assign(static_cast<std::size_t>(levels), 0);
    down.assign(static_cast<std::size_t>(levels), 0);
    from.assign(static_cast<std::size_t>(levels), 0);
}

void ObservationHistory::Counts::add(const Counts& other, long long sign) {
    for (std::size_t i = 0; i < h.size(); ++i) {
        h[i] += sign * other.h[i];
    }
    for (std::size_t i = 0; i < up.size(); ++i) {
        up[i] += sign * other.up[i];
        down[i] += sign * other.down[i];
        from[i] += sign * other.from[i];
    }
}

ObservationHistory::ObservationHistory(int levels) : levels_(levels) {
    if (levels < 1) {
        throw std::invalid_argument("history: levels must be >= 1");
    }
    counts_.resize(levels);
    current_epoch_.resize(levels);
    steps_up_.assign(static_cast<std::size_t>(levels), 0);
    steps_down_.assign(static_cast<std::size_t>(levels), 0);
    steps_from_.assign(static_cast<std::size_t>(levels), 0);
}

long long& ObservationHistory::cell(Counts& c, int g, int a, int b) const {
    return c.h[(static_cast<std::size_t>(g) * 2 + a) * 2 + b];
}

void ObservationHistory::record_transition(int level, int from_delay, int to_delay) {
    if (level < 0 || level >= levels_ || (from_delay & ~1) != 0 || (to_delay & ~1) != 0) {
        throw std::invalid_argument("history: invalid (level, a, b) triple");
    }
    ++cell(counts_, level, from_delay, to_delay);
    ++total_;
    if (window_epochs_ > 0) {
        ++cell(current_epoch_, level, from_delay, to_delay);
    }
}

void ObservationHistory::record_level_step(int from_level, int to_level) {
    if (from_level < 0 || from_level >= levels_ || to_level < 0 || to_level >= levels_) {
        throw std::invalid_argument("history: level step out of range");
    }
    const int dir = to_level > from_level ? 1 : to_level < from_level ? -1 : 0;
    if (dir == 0) {
        ++steps_from_[from_level];
        ++counts_.from[from_level];
        if (window_epochs_ > 0) {
            ++current_epoch_.from[from_level];
        }
        return;
    }
    for (int g = from_level; g != to_level; g += dir) {
        ++steps_from_[g];
        ++counts_.from[g];
        auto& column = dir > 0 ? steps_up_ : steps_down_;
        ++column[g];
        auto& ccol = dir > 0 ? counts_.up : counts_.down;
        ++ccol[g];
        if (window_epochs_ > 0) {
            ++current_epoch_.from[g];
            auto& wcol = dir > 0 ? current_epoch_.up : current_epoch_.down;
            ++wcol[g];
        }
    }
}

void ObservationHistory::end_epoch() {
    if (window_epochs_ <= 0) {
        return;
    }
    window_.push_back(current_epoch_);
    current_epoch_.resize(levels_);
    while (static_cast<int>(window_.size()) > window_epochs_) {
        const Counts& old = window_.front();
        counts_.add(old, -1);
        for (long long c : old.h) {
            total_ -= c;
        }
        for (int g = 0; g < levels_; ++g) {
            steps_up_[g] -= old.up[g];
            steps_down_[g] -= old.down[g];
            steps_from_[g] -= old.from[g];
        }
        window_.erase(window_.begin());
    }
}

long long ObservationHistory::count(int level, int from_delay, int to_delay) const {
    return counts_.h[(static_cast<std::size_t>(level) * 2 + from_delay) * 2 + to_delay];
}

long long ObservationHistory::pair_total(int from_delay, int to_delay) const {
    long long sum = 0;
    for (int g = 0; g < levels_; ++g) {
        sum += count(g, from_delay, to_delay);
    }
    return sum;
}

void ObservationHistory::serialize_transitions(std::ostream& out) const {
    for (int g = 0; g < levels_; ++g) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                if (count(g, a, b) > 0) {
                    out << g << ' ' << a << ' ' << b << ' ' << count(g, a, b) << '\n';
                }
            }
        }
    }
}

ObservationHistory ObservationHistory::parse_transitions(std::istream& in, int levels) {
    ObservationHistory history(levels);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        int g = 0, a = 0, b = 0;
        long long n = 0;
        if (!(ls >> g >> a >> b >> n)) {
            throw std::invalid_argument("history: malformed line '" + line + "'");
        }
        for (long long i = 0; i < n; ++i) {
            history.record_transition(g, a, b);
        }
    }
    return history;
}

LatentEstimate em_estimate(const ObservationHistory& history, const EmOptions& options) {
    if (history.total() < 1) {
        throw std::invalid_argument("em_estimate: empty history");
    }
    const int levels = history.levels();
    const int W = options.latent_count > 0 ? options.latent_count : levels;
    if (W > levels) {
        throw std::invalid_argument("em_estimate: latent count exceeds level count");
    }

    LatentEstimate est;
    est.latent_count = W;
    est.prior.assign(static_cast<std::size_t>(W), 1.0 / W);
    est.rho.resize(static_cast<std::size_t>(W));
    for (int w = 0; w < W; ++w) {
        for (int a = 0; a < 2; ++a) {
            // level-conditional frequencies with add-one smoothing
            const double n0 = static_cast<double>(history.count(w, a, 0));
            const double n1 = static_cast<double>(history.count(w, a, 1));
            est.rho[w][a][0] = (n0 + 1.0) / (n0 + n1 + 2.0);
            est.rho[w][a][1] = (n1 + 1.0) / (n0 + n1 + 2.0);
        }
    }
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            est.posterior[a][b].assign(static_cast<std::size_t>(W), 1.0 / W);
        }
    }

    double pair_counts[2][2];
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            pair_counts[a][b] = static_cast<double>(history.pair_total(a, b));
        }
    }
    // per-level totals for the prior update
    std::vector<double> level_totals(static_cast<std::size_t>(W), 0.0);
    for (int w = 0; w < W; ++w) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                level_totals[w] += static_cast<double>(history.count(w, a, b));
            }
        }
    }

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        // E step: responsibilities per observed move type
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                double norm = 0.0;
                for (int w = 0; w < W; ++w) {
                    norm += est.rho[w][a][b] * est.prior[w];
                }
                for (int w = 0; w < W; ++w) {
                    est.posterior[a][b][w] = norm > 0.0 ? est.rho[w][a][b] * est.prior[w] / norm
                                                        : 1.0 / W;
                }
            }
        }

        double delta = 0.0;

        // M step, transition kernels: the numerator pools counts across
        // levels; rows are normalized per from-state so each rho[w][a][.]
        // stays a conditional distribution.
        for (int w = 0; w < W; ++w) {
            for (int a = 0; a < 2; ++a) {
                const double n0 = pair_counts[a][0] * est.posterior[a][0][w];
                const double n1 = pair_counts[a][1] * est.posterior[a][1][w];
                if (n0 + n1 <= 0.0) {
                    continue;  // nothing observed from this state, keep current row
                }
                const double r0 = n0 / (n0 + n1);
                delta = std::max(delta, std::abs(r0 - est.rho[w][a][0]));
                est.rho[w][a][0] = r0;
                est.rho[w][a][1] = 1.0 - r0;
            }
        }

        // M step, priors: average responsibility among the moves recorded at
        // the latent value's own level, then renormalized.
        std::vector<double> raw(static_cast<std::size_t>(W), 0.0);
        double raw_total = 0.0;
        for (int w = 0; w < W; ++w) {
            if (level_totals[w] <= 0.0) {
                continue;
            }
            double acc = 0.0;
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    acc += static_cast<double>(history.count(w, a, b)) * est.posterior[a][b][w];
                }
            }
            raw[w] = acc / level_totals[w];
            raw_total += raw[w];
        }
        for (int w = 0; w < W; ++w) {
            const double p = raw_total > 0.0 ? raw[w] / raw_total : 1.0 / W;
            delta = std::max(delta, std::abs(p - est.prior[w]));
            est.prior[w] = p;
        }

        est.delta_history.push_back(delta);
        est.iterations = iter + 1;
        if (delta < options.tolerance) {
            est.converged = true;
            break;
        }
    }
    return est;
}

std::vector<double> latent_weights(const LatentEstimate& estimate,
                                   const ObservationHistory& history) {
    const int W = estimate.latent_count;
    std::vector<double> weights(static_cast<std::size_t>(W), 1.0 / W);
    double denom = 0.0;
    std::vector<double> numer(static_cast<std::size_t>(W), 0.0);
    for (int w = 0; w < W; ++w) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                numer[w] += static_cast<double>(history.pair_total(a, b)) * estimate.rho[w][a][b];
            }
        }
        denom += numer[w];
    }
    if (denom <= 0.0) {
        return weights;  // no observations: uniform
    }
    for (int w = 0; w < W; ++w) {
        weights[w] = numer[w] / denom;
    }
    return weights;
}

double inferred_transition(int from_delay, int to_delay, const LatentEstimate& estimate,
                           const std::vector<double>& weights) {
    if (weights.size() != static_cast<std::size_t>(estimate.latent_count)) {
        throw std::invalid_argument("inferred_transition: weight size mismatch");
    }
    double p = 0.0;
    for (int w = 0; w < estimate.latent_count; ++w) {
        p += weights[w] * estimate.rho[w][from_delay][to_delay];
    }
    return p;
}

double markov_accuracy(const std::vector<double>& weights) {
    if (weights.empty()) {
        throw std::invalid_argument("markov_accuracy: empty weights");
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double w : weights) {
        if (w < 0.0) {
            throw std::invalid_argument("markov_accuracy: negative weight");
        }
        sum += w;
        sum_sq += w * w;
    }
    if (sum_sq == 0.0) {
        throw std::invalid_argument("markov_accuracy: all-zero weights");
    }
    return sum * sum / (static_cast<double>(weights.size()) * sum_sq);
}

DtmcParams dtmc_params_from_estimates(const LatentEstimate& estimate,
                                      const ObservationHistory& history) {
    const int g = history.levels();
    if (estimate.latent_count != g) {
        throw std::invalid_argument("dtmc_params_from_estimates: latent count must equal levels");
    }
    DtmcParams params;
    params.up.assign(static_cast<std::size_t>(g), 0.0);
    params.down.assign(static_cast<std::size_t>(g), 0.0);
    params.violate.assign(static_cast<std::size_t>(g), 0.0);
    params.recover.assign(static_cast<std::size_t>(g), 0.0);
    for (int i = 0; i < g; ++i) {
        const long long from = history.steps_from(i);
        if (from > 0) {
            params.up[i] = static_cast<double>(history.steps_up(i)) / from;
            params.down[i] = static_cast<double>(history.steps_down(i)) / from;
        }
        params.violate[i] = estimate.rho[i][0][1];
        params.recover[i] = estimate.rho[i][1][0];
    }
    params.up[g - 1] = 0.0;
    params.down[0] = 0.0;
    for (int i = 0; i < g; ++i) {
        const double pq = params.up[i] + params.down[i];
        double scale = 1.0;
        if (pq + params.violate[i] > 1.0) {
            scale = std::min(scale, 1.0 / (pq + params.violate[i]));
        }
        if (pq + params.recover[i] > 1.0) {
            scale = std::min(scale, 1.0 / (pq + params.recover[i]));
        }
        if (scale < 1.0) {
            params.up[i] *= scale;
            params.down[i] *= scale;
            params.violate[i] *= scale;
            params.recover[i] *= scale;
        }
    }
    params.validate();
    return params;
}

}  // namespace slicesim
