#pragma once

#include <stdexcept>
#include <vector>

namespace slicesim {

// Per-level transition probabilities of the latency/channel chain over
// states (g, d), g in [0, G), d in {0 = within tolerance, 1 = exceeded}:
//   up[g]      channel improves g -> g+1        (up[G-1] = 0)
//   down[g]    channel degrades g -> g-1        (down[0] = 0)
//   violate[g] delay flag flips 0 -> 1 at level g
//   recover[g] delay flag flips 1 -> 0 at level g
// For each level the implied stay probability 1 - up - down - x must be
// non-negative for x = violate and x = recover.
struct DtmcParams {
    std::vector<double> up;
    std::vector<double> down;
    std::vector<double> violate;
    std::vector<double> recover;

    int levels() const { return static_cast<int>(up.size()); }
    void validate() const;
};

// Dense row-stochastic 2G x 2G matrix with block layout
//   [ K_violate  diag(violate) ]
//   [ diag(recover)  K_recover ]
// where K_x is tridiagonal: stay on the diagonal, up above, down below.
// State index s = g + d*G.
class TransitionMatrix {
  public:
    static TransitionMatrix build(const DtmcParams& params);

    int levels() const { return levels_; }
    int dim() const { return 2 * levels_; }
    double at(int row, int col) const {
        return data_[static_cast<std::size_t>(row) * dim() + col];
    }

  private:
    TransitionMatrix(int levels, std::vector<double> data)
        : levels_(levels), data_(std::move(data)) {}
    int levels_ = 0;
    std::vector<double> data_;
};

struct SteadyState {
    std::vector<double> pi;  // indexed s = g + d*G, sums to 1
};

struct ReducibleChainError : std::runtime_error {
    ReducibleChainError() : std::runtime_error("dtmc: chain is reducible, no unique steady state") {}
};

// True when every state reaches every other through the nonzero pattern.
bool strongly_connected(const TransitionMatrix& P);

// Unique stationary distribution: solves (P^T - I) pi = 0 with one balance
// row replaced by the normalization sum(pi) = 1. Throws ReducibleChainError
// when the chain is not strongly connected.
SteadyState steady_state(const TransitionMatrix& P);

// Probability mass on the d = 0 (latency under control) states.
double latency_ok_mass(const SteadyState& steady);

}  // namespace slicesim
