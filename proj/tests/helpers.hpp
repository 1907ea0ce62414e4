#pragma once

#include <cstdint>
#include <vector>

#include "netsis/equilibrium.hpp"
#include "netsis/graph.hpp"
#include "netsis/model.hpp"
#include "netsis/prng.hpp"

namespace netsis::testing {

/// 2-node cycle with row-normalized weights, beta = delta = const per node.
inline SisModel two_cycle_model(double beta, double delta, double h = 1.0) {
    Graph g;
    g.weights = Matrix::Zero(2, 2);
    g.weights(0, 1) = 1.0;
    g.weights(1, 0) = 1.0;
    SisParams p;
    p.beta = Vector::Constant(2, beta);
    p.delta = Vector::Constant(2, delta);
    p.h = h;
    return build_and_validate(g, p).model;
}

/// Seeded random model on a normalized strongly connected graph. Parameter
/// ranges chosen per `endemic`: the endemic variant always has
/// rho(I - hD + hB) > 1 (row sums 1 - delta_i + beta_i > 1.1) and the
/// disease-free variant always has rho < 1 (delta_i > beta_i).
inline SisModel random_model(std::uint64_t seed, Index n_max = 30, bool endemic = true) {
    SplitMix64 rng(mix_seed(seed, 101));
    const Index n = 2 + static_cast<Index>(rng.next() % static_cast<std::uint64_t>(n_max - 1));
    const double p = 0.5 * rng.uniform01();
    Graph g = normalize_in_weights(random_strongly_connected(n, p, mix_seed(seed, 102)));
    const Interval beta = endemic ? Interval{0.45, 0.55} : Interval{0.15, 0.25};
    const Interval delta{0.25, 0.35};
    const SisParams params = sample_params(beta, delta, 1.0, n, mix_seed(seed, 103));
    return build_and_validate(g, params).model;
}

/// Mixed-regime variant for invariance-style suites: beta range wide enough
/// to cross the threshold while keeping h (delta_i + sum_j beta_ij) <= 0.9.
inline SisModel random_model_any_regime(std::uint64_t seed, Index n_max = 30) {
    SplitMix64 rng(mix_seed(seed, 201));
    const Index n = 2 + static_cast<Index>(rng.next() % static_cast<std::uint64_t>(n_max - 1));
    const double p = 0.5 * rng.uniform01();
    Graph g = normalize_in_weights(random_strongly_connected(n, p, mix_seed(seed, 202)));
    const SisParams params =
        sample_params(Interval{0.15, 0.55}, Interval{0.25, 0.35}, 1.0, n, mix_seed(seed, 203));
    return build_and_validate(g, params).model;
}

inline Vector random_state(std::uint64_t seed, Index n, double lo = 0.0, double hi = 1.0) {
    SplitMix64 rng(seed);
    Vector x(n);
    for (Index i = 0; i < n; ++i) x[i] = rng.uniform_half_open(lo, hi);
    return x;
}

/// Componentwise x0 below x* (in D_l unless all draws hit zero).
inline Vector random_in_dl(std::uint64_t seed, const Vector& x_star) {
    SplitMix64 rng(seed);
    for (;;) {
        Vector x0(x_star.size());
        bool nonzero = false;
        for (Index i = 0; i < x_star.size(); ++i) {
            x0[i] = rng.uniform01() * x_star[i];
            nonzero = nonzero || x0[i] > 0.0;
        }
        if (nonzero) return x0;
    }
}

/// Componentwise x0 above x* (in D_h).
inline Vector random_in_dh(std::uint64_t seed, const Vector& x_star) {
    SplitMix64 rng(seed);
    for (;;) {
        Vector x0(x_star.size());
        bool strict = false;
        for (Index i = 0; i < x_star.size(); ++i) {
            x0[i] = x_star[i] + rng.uniform01() * (1.0 - x_star[i]);
            strict = strict || x0[i] > x_star[i];
        }
        if (strict) return x0;
    }
}

/// Plain-loop evaluation of the per-node update rule; independent of the
/// Eigen path used by step().
inline std::vector<double> scalar_step_oracle(const SisModel& m,
                                              const std::vector<double>& x) {
    const auto n = static_cast<std::size_t>(m.n());
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) {
        double pressure = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            pressure += m.params.beta[static_cast<Index>(i)] *
                        m.graph.weights(static_cast<Index>(i), static_cast<Index>(j)) *
                        x[j];
        next[i] = x[i] + m.params.h * ((1.0 - x[i]) * pressure -
                                       m.params.delta[static_cast<Index>(i)] * x[i]);
    }
    return next;
}

}  // namespace netsis::testing
