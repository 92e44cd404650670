#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <sstream>

#include "slicesim/estimator.hpp"
#include "slicesim/rng.hpp"

using namespace slicesim;

namespace {

// Forward simulation of the generative model: each step draws a level
// (uniform), then moves the delay flag with that level's true kernel.
ObservationHistory simulate_history(const std::vector<std::array<double, 2>>& flip_probs,
                                    long long steps, RngStream& rng) {
    // flip_probs[g] = {violate prob from d=0, recover prob from d=1}
    const int levels = static_cast<int>(flip_probs.size());
    ObservationHistory history(levels);
    int delay = 0;
    for (long long i = 0; i < steps; ++i) {
        const int g = static_cast<int>(rng.uniform() * levels);
        const double flip = delay == 0 ? flip_probs[g][0] : flip_probs[g][1];
        const int next = rng.uniform() < flip ? 1 - delay : delay;
        history.record_transition(g, delay, next);
        delay = next;
    }
    return history;
}

}  // namespace

TEST_CASE("recording transitions accumulates counts per (level, a, b)") {
    ObservationHistory history(4);
    CHECK(history.total() == 0);
    history.record_transition(2, 0, 1);
    CHECK(history.total() == 1);
    CHECK(history.count(2, 0, 1) == 1);
    history.record_transition(2, 0, 1);
    CHECK(history.count(2, 0, 1) == 2);
    history.record_transition(1, 1, 1);
    history.record_transition(3, 0, 0);
    CHECK(history.count(1, 1, 1) == 1);
    CHECK(history.count(3, 0, 0) == 1);
    CHECK(history.count(2, 0, 1) == 2);
    CHECK(history.total() == 4);
    CHECK_THROWS_AS(history.record_transition(4, 0, 1), std::invalid_argument);
}

TEST_CASE("em on a single-level history concentrates the prior there") {
    RngStream rng(31);
    ObservationHistory history(4);
    // all moves happen at level 2, true violate 0.3 / recover 0.45
    int delay = 0;
    for (int i = 0; i < 20000; ++i) {
        const double flip = delay == 0 ? 0.3 : 0.45;
        const int next = rng.uniform() < flip ? 1 - delay : delay;
        history.record_transition(2, delay, next);
        delay = next;
    }
    const auto est = em_estimate(history);
    CHECK(est.converged);
    CHECK(est.prior[2] >= 0.99);
    // kernel at the observed level matches direct counting
    for (int a = 0; a < 2; ++a) {
        const double n0 = static_cast<double>(history.count(2, a, 0));
        const double n1 = static_cast<double>(history.count(2, a, 1));
        CHECK(est.rho_at(2, a, 1) == doctest::Approx(n1 / (n0 + n1)).epsilon(1e-3));
    }
}

TEST_CASE("em recovers well-separated kernels from the generative model") {
    RngStream rng(97);
    const std::vector<std::array<double, 2>> truth{
        {0.10, 0.90}, {0.35, 0.65}, {0.60, 0.40}, {0.85, 0.15}};
    const auto history = simulate_history(truth, 100000, rng);
    const auto est = em_estimate(history);
    CHECK(est.converged);
    for (int w = 0; w < 4; ++w) {
        CHECK(std::abs(est.rho_at(w, 0, 1) - truth[w][0]) < 0.02);
        CHECK(std::abs(est.rho_at(w, 1, 0) - truth[w][1]) < 0.02);
        CHECK(est.rho_at(w, 0, 0) + est.rho_at(w, 0, 1) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(est.rho_at(w, 1, 0) + est.rho_at(w, 1, 1) == doctest::Approx(1.0).epsilon(1e-8));
    }
    double prior_sum = 0.0;
    for (double p : est.prior) {
        prior_sum += p;
    }
    CHECK(prior_sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("estimation error shrinks with more samples") {
    const std::vector<std::array<double, 2>> truth{
        {0.10, 0.90}, {0.35, 0.65}, {0.60, 0.40}, {0.85, 0.15}};
    auto worst_error = [&](long long steps, std::uint64_t seed) {
        RngStream rng(seed);
        const auto est = em_estimate(simulate_history(truth, steps, rng));
        double err = 0.0;
        for (int w = 0; w < 4; ++w) {
            err = std::max(err, std::abs(est.rho_at(w, 0, 1) - truth[w][0]));
            err = std::max(err, std::abs(est.rho_at(w, 1, 0) - truth[w][1]));
        }
        return err;
    };
    CHECK(worst_error(100000, 5) < worst_error(1000, 5));
}

TEST_CASE("uniform counts keep the prior uniform") {
    ObservationHistory history(3);
    for (int g = 0; g < 3; ++g) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                for (int k = 0; k < 50; ++k) {
                    history.record_transition(g, a, b);
                }
            }
        }
    }
    const auto est = em_estimate(history);
    for (int w = 0; w < 3; ++w) {
        CHECK(est.prior[w] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    }
}

TEST_CASE("em rejects an empty history and posteriors normalize") {
    ObservationHistory empty(2);
    CHECK_THROWS_AS(em_estimate(empty), std::invalid_argument);

    RngStream rng(15);
    const auto history =
        simulate_history({{0.2, 0.7}, {0.5, 0.5}}, 5000, rng);
    const auto est = em_estimate(history);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            double sum = 0.0;
            for (int w = 0; w < est.latent_count; ++w) {
                sum += est.posterior[a][b][w];
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("parameter change is non-increasing over the final iterations") {
    RngStream rng(55);
    const auto history = simulate_history(
        {{0.15, 0.8}, {0.4, 0.6}, {0.7, 0.3}}, 30000, rng);
    const auto est = em_estimate(history);
    const auto& deltas = est.delta_history;
    const std::size_t tail = deltas.size() > 10 ? deltas.size() - 10 : 0;
    for (std::size_t i = tail + 1; i < deltas.size(); ++i) {
        CHECK(deltas[i] <= deltas[i - 1] + 1e-12);
    }
}

TEST_CASE("latent weights degenerate cases") {
    RngStream rng(70);
    const auto single = simulate_history({{0.3, 0.6}}, 2000, rng);
    const auto est1 = em_estimate(single);
    const auto w1 = latent_weights(est1, single);
    REQUIRE(w1.size() == 1);
    CHECK(w1[0] == doctest::Approx(1.0));

    // identical kernels across levels make the numerator level-blind
    ObservationHistory history(3);
    for (int g = 0; g < 3; ++g) {
        for (int k = 0; k < 100; ++k) {
            history.record_transition(g, 0, 1);
            history.record_transition(g, 1, 0);
            history.record_transition(g, 0, 0);
            history.record_transition(g, 1, 1);
        }
    }
    auto est = em_estimate(history);
    for (int w = 0; w < 3; ++w) {
        est.rho[w][0] = {0.5, 0.5};
        est.rho[w][1] = {0.5, 0.5};
    }
    const auto weights = latent_weights(est, history);
    for (double w : weights) {
        CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("latent weights match a direct evaluation of the formula") {
    ObservationHistory history(2);
    for (int k = 0; k < 30; ++k) history.record_transition(0, 0, 1);
    for (int k = 0; k < 10; ++k) history.record_transition(0, 1, 0);
    for (int k = 0; k < 25; ++k) history.record_transition(1, 0, 0);
    for (int k = 0; k < 35; ++k) history.record_transition(1, 1, 1);
    const auto est = em_estimate(history);
    const auto weights = latent_weights(est, history);
    // direct evaluation: multiplicity-weighted kernel mass per latent value
    double denom = 0.0;
    std::vector<double> numer(2, 0.0);
    for (int w = 0; w < 2; ++w) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                numer[w] += static_cast<double>(history.pair_total(a, b)) * est.rho_at(w, a, b);
            }
        }
        denom += numer[w];
    }
    CHECK(weights[0] == doctest::Approx(numer[0] / denom).epsilon(1e-12));
    CHECK(weights[1] == doctest::Approx(numer[1] / denom).epsilon(1e-12));
    CHECK(weights[0] + weights[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inferred transitions are convex combinations of the kernels") {
    RngStream rng(88);
    const auto history = simulate_history(
        {{0.2, 0.8}, {0.4, 0.6}, {0.6, 0.4}, {0.8, 0.2}}, 50000, rng);
    const auto est = em_estimate(history);
    const auto weights = latent_weights(est, history);

    // one-hot weights pick out a single kernel
    std::vector<double> onehot(4, 0.0);
    onehot[2] = 1.0;
    CHECK(inferred_transition(0, 1, est, onehot) == doctest::Approx(est.rho_at(2, 0, 1)));

    // uniform weights give the arithmetic mean
    std::vector<double> uniform(4, 0.25);
    double mean = 0.0;
    for (int w = 0; w < 4; ++w) {
        mean += 0.25 * est.rho_at(w, 0, 1);
    }
    CHECK(inferred_transition(0, 1, est, uniform) == doctest::Approx(mean).epsilon(1e-12));

    // random weights: dot-product oracle plus convexity bounds
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> w(4);
        double total = 0.0;
        for (auto& v : w) {
            v = rng.uniform();
            total += v;
        }
        for (auto& v : w) {
            v /= total;
        }
        double expected = 0.0;
        double lo = 1.0, hi = 0.0;
        for (int k = 0; k < 4; ++k) {
            expected += w[k] * est.rho_at(k, 0, 1);
            lo = std::min(lo, est.rho_at(k, 0, 1));
            hi = std::max(hi, est.rho_at(k, 0, 1));
        }
        const double got = inferred_transition(0, 1, est, w);
        CHECK(got == doctest::Approx(expected).epsilon(1e-12));
        CHECK(got >= lo - 1e-12);
        CHECK(got <= hi + 1e-12);
        CHECK(inferred_transition(0, 0, est, w) + got == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("markov accuracy analytic identities and bounds") {
    CHECK(markov_accuracy({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(1.0));
    CHECK(markov_accuracy({1.0, 0.0, 0.0, 0.0}) == doctest::Approx(0.25));
    CHECK(markov_accuracy({0.5, 0.5, 0.0, 0.0}) == doctest::Approx(0.5));
    RngStream rng(101);
    for (int trial = 0; trial < 10000; ++trial) {
        const int w = 2 + static_cast<int>(rng.uniform() * 7);
        std::vector<double> weights(static_cast<std::size_t>(w));
        double total = 0.0;
        for (auto& v : weights) {
            v = rng.uniform();
            total += v;
        }
        for (auto& v : weights) {
            v /= total;
        }
        const double psi = markov_accuracy(weights);
        CHECK(psi >= 1.0 / w - 1e-12);
        CHECK(psi <= 1.0 + 1e-12);
    }
}

TEST_CASE("estimates bridge into chain parameters") {
    RngStream rng(200);
    const auto history = simulate_history({{0.3, 0.4}}, 5000, rng);
    const auto est = em_estimate(history);
    const auto params = dtmc_params_from_estimates(est, history);
    // no level steps recorded: static channel chain
    CHECK(params.up[0] == 0.0);
    CHECK(params.down[0] == 0.0);
    CHECK(params.violate[0] == doctest::Approx(est.rho_at(0, 0, 1)));
    CHECK(params.recover[0] == doctest::Approx(est.rho_at(0, 1, 0)));
    const auto P = TransitionMatrix::build(params);
    CHECK(P.at(0, 1) == doctest::Approx(est.rho_at(0, 0, 1)));
}

TEST_CASE("rates that would break row stochasticity are shrunk together") {
    ObservationHistory history(2);
    // saturate level movement so up/down frequencies are large
    for (int k = 0; k < 50; ++k) {
        history.record_level_step(0, 1);
        history.record_level_step(1, 0);
    }
    // violations nearly certain at both levels
    for (int k = 0; k < 99; ++k) {
        history.record_transition(0, 0, 1);
        history.record_transition(1, 0, 1);
    }
    history.record_transition(0, 0, 0);
    history.record_transition(1, 0, 0);
    for (int k = 0; k < 10; ++k) {
        history.record_transition(0, 1, 0);
        history.record_transition(1, 1, 0);
    }
    const auto est = em_estimate(history);
    const auto params = dtmc_params_from_estimates(est, history);
    for (int g = 0; g < 2; ++g) {
        CHECK(params.up[g] + params.down[g] + params.violate[g] <= 1.0 + 1e-12);
        CHECK(params.up[g] + params.down[g] + params.recover[g] <= 1.0 + 1e-12);
    }
    // the shrink keeps the (up, down, violate) ratios intact where applied
    const double raw_up = 1.0;  // all steps from level 0 went up
    const double raw_violate = est.rho_at(0, 0, 1);
    if (params.up[0] < raw_up) {
        CHECK(params.violate[0] / params.up[0] == doctest::Approx(raw_violate / raw_up).epsilon(1e-9));
    }
    CHECK_NOTHROW(TransitionMatrix::build(params));
}

TEST_CASE("multi-level jumps decompose into unit steps") {
    ObservationHistory history(4);
    history.record_level_step(0, 3);
    CHECK(history.steps_up(0) == 1);
    CHECK(history.steps_up(1) == 1);
    CHECK(history.steps_up(2) == 1);
    CHECK(history.steps_from(0) == 1);
    CHECK(history.steps_from(2) == 1);
    history.record_level_step(2, 0);
    CHECK(history.steps_down(2) == 1);
    CHECK(history.steps_down(1) == 1);
    CHECK(history.steps_down(0) == 0);
}

TEST_CASE("history serialization round-trips") {
    ObservationHistory history(3);
    for (int k = 0; k < 7; ++k) history.record_transition(0, 0, 1);
    for (int k = 0; k < 3; ++k) history.record_transition(2, 1, 1);
    history.record_transition(1, 1, 0);
    std::ostringstream out;
    history.serialize_transitions(out);
    std::istringstream in(out.str());
    const auto parsed = ObservationHistory::parse_transitions(in, 3);
    CHECK(parsed.total() == history.total());
    for (int g = 0; g < 3; ++g) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                CHECK(parsed.count(g, a, b) == history.count(g, a, b));
            }
        }
    }
}

TEST_CASE("sliding window ages out old epochs") {
    ObservationHistory history(2);
    history.set_window_epochs(2);
    history.record_transition(0, 0, 1);
    history.record_level_step(0, 1);
    history.end_epoch();
    history.record_transition(1, 0, 1);
    history.end_epoch();
    CHECK(history.total() == 2);
    history.record_transition(1, 1, 0);
    history.end_epoch();  // first epoch falls out of the window
    CHECK(history.total() == 2);
    CHECK(history.count(0, 0, 1) == 0);
    CHECK(history.count(1, 0, 1) == 1);
    CHECK(history.count(1, 1, 0) == 1);
    CHECK(history.steps_up(0) == 0);
}
