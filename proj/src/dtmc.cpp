#include "slicesim/dtmc.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace slicesim {

void DtmcParams::validate() const {
    const std::size_t g = up.size();
    if (g == 0 || down.size() != g || violate.size() != g || recover.size() != g) {
        throw std::invalid_argument("dtmc params: sequences must share a positive length");
    }
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    for (std::size_t i = 0; i < g; ++i) {
        if (!in_unit(up[i]) || !in_unit(down[i]) || !in_unit(violate[i]) || !in_unit(recover[i])) {
            throw std::invalid_argument("dtmc params: probabilities must lie in [0, 1]");
        }
    }
    if (up[g - 1] != 0.0) {
        throw std::invalid_argument("dtmc params: up[G-1] must be 0");
    }
    if (down[0] != 0.0) {
        throw std::invalid_argument("dtmc params: down[0] must be 0");
    }
    for (std::size_t i = 0; i < g; ++i) {
        if (up[i] + down[i] + violate[i] > 1.0 + 1e-12 ||
            up[i] + down[i] + recover[i] > 1.0 + 1e-12) {
            throw std::invalid_argument("dtmc params: negative stay probability at some level");
        }
    }
}

TransitionMatrix TransitionMatrix::build(const DtmcParams& params) {
    params.validate();
    const int g = params.levels();
    const int n = 2 * g;
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
    auto set = [&](int r, int c, double v) { m[static_cast<std::size_t>(r) * n + c] = v; };

    for (int d = 0; d < 2; ++d) {
        const auto& flip = d == 0 ? params.violate : params.recover;
        for (int i = 0; i < g; ++i) {
            const int row = i + d * g;
            set(row, row, 1.0 - params.up[i] - params.down[i] - flip[i]);
            if (i + 1 < g) {
                set(row, row + 1, params.up[i]);
            }
            if (i > 0) {
                set(row, row - 1, params.down[i]);
            }
            // delay-flag flip stays on the same channel level
            set(row, i + (1 - d) * g, flip[i]);
        }
    }
    return TransitionMatrix(g, std::move(m));
}

bool strongly_connected(const TransitionMatrix& P) {
    const int n = P.dim();
    auto reach_all = [&](bool transpose) {
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w = 0; w < n; ++w) {
                const double edge = transpose ? P.at(w, v) : P.at(v, w);
                if (edge > 0.0 && !seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    ++count;
                    stack.push_back(w);
                }
            }
        }
        return count == n;
    };
    return reach_all(false) && reach_all(true);
}

SteadyState steady_state(const TransitionMatrix& P) {
    if (!strongly_connected(P)) {
        throw ReducibleChainError();
    }
    const int n = P.dim();
    // A = P^T - I with the last row replaced by the normalization constraint.
    std::vector<double> a(static_cast<std::size_t>(n) * (n + 1), 0.0);
    auto A = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * (n + 1) + c]; };
    for (int r = 0; r < n - 1; ++r) {
        for (int c = 0; c < n; ++c) {
            A(r, c) = P.at(c, r) - (r == c ? 1.0 : 0.0);
        }
        A(r, n) = 0.0;
    }
    for (int c = 0; c < n; ++c) {
        A(n - 1, c) = 1.0;
    }
    A(n - 1, n) = 1.0;

    // Gaussian elimination with partial pivoting; n <= 32 in practice.
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(A(r, col)) > std::abs(A(pivot, col))) {
                pivot = r;
            }
        }
        if (std::abs(A(pivot, col)) < 1e-14) {
            throw ReducibleChainError();
        }
        if (pivot != col) {
            for (int c = col; c <= n; ++c) {
                std::swap(A(pivot, c), A(col, c));
            }
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = A(r, col) / A(col, col);
            if (f == 0.0) {
                continue;
            }
            for (int c = col; c <= n; ++c) {
                A(r, c) -= f * A(col, c);
            }
        }
    }
    SteadyState out;
    out.pi.assign(static_cast<std::size_t>(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double v = A(r, n);
        for (int c = r + 1; c < n; ++c) {
            v -= A(r, c) * out.pi[static_cast<std::size_t>(c)];
        }
        out.pi[static_cast<std::size_t>(r)] = v / A(r, r);
    }
    // Scrub rounding: clip tiny negatives and renormalize.
    double total = 0.0;
    for (auto& v : out.pi) {
        if (v < 0.0 && v > -1e-12) {
            v = 0.0;
        }
        total += v;
    }
    for (auto& v : out.pi) {
        v /= total;
    }
    return out;
}

double latency_ok_mass(const SteadyState& steady) {
    const std::size_t g = steady.pi.size() / 2;
    double mass = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
        mass += steady.pi[i];
    }
    return mass;
}

}  // namespace slicesim
