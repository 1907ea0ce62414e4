#pragma once

#include <cstdint>
#include <vector>

#include "netsis/graph.hpp"
#include "netsis/types.hpp"

namespace netsis {

/// Per-node transition rates and the sampling period of the discrete-time
/// networked SIS dynamics
///
///   x_i(k+1) = x_i(k) + h * ((1 - x_i(k)) * sum_j beta_ij x_j(k) - delta_i x_i(k))
///
/// with beta_ij = beta_i * a_ij.
struct SisParams {
    Vector beta;   // infection rates, beta_i > 0
    Vector delta;  // curing rates, delta_i >= 0
    double h = 1.0;
};

struct SisModel {
    Graph graph;
    SisParams params;
    Matrix B;  // B(i, j) = beta_i * a_ij
    Vector D;  // diagonal of curing rates

    [[nodiscard]] Index n() const { return B.rows(); }
    [[nodiscard]] double h() const { return params.h; }
};

/// Per-node values h * (delta_i + sum_j beta_ij); the model is well defined
/// only when every value is <= 1.
struct AssumptionReport {
    Vector per_node;
    Index worst_node = 0;
    double worst_value = 0.0;
    bool near_boundary = false;  // worst value within 1e-12 of 1
};

struct ValidatedModel {
    SisModel model;
    AssumptionReport assumptions;
};

/// Builds B and D and enforces strong connectivity plus the sign and
/// step-size constraints on the rates. Rejects any node whose combined rate
/// h * (delta_i + sum_j beta_ij) exceeds 1 (exact comparison); values within
/// 1e-12 of the boundary only set `near_boundary`.
[[nodiscard]] ValidatedModel build_and_validate(const Graph& g, const SisParams& p);

/// One step of the dynamics. Input must lie in [0, 1]^N (a slack of 1e-12
/// absorbs float drift from repeated stepping); no clamping is applied to
/// the output.
[[nodiscard]] Vector step(const SisModel& m, const VectorRef& x);

enum class StopReason { Horizon, Converged };

struct Trajectory {
    std::vector<Vector> states;  // x(0), x(1), ..., x(K)
    StopReason stop_reason = StopReason::Horizon;
    double stop_tol = 0.0;
    std::uint64_t model_fingerprint = 0;

    [[nodiscard]] Index steps() const { return static_cast<Index>(states.size()) - 1; }
    [[nodiscard]] const Vector& front() const { return states.front(); }
    [[nodiscard]] const Vector& back() const { return states.back(); }
};

/// Iterates `step` until k == horizon or the sup-norm change of one step
/// drops below stop_tol (stop_tol == 0 disables early stopping). Every state
/// is recorded.
[[nodiscard]] Trajectory simulate(const SisModel& m, const VectorRef& x0,
                                  Index horizon, double stop_tol = 1e-12);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Draws beta_i and delta_i independently and uniformly from the open
/// intervals with a deterministic seeded generator (all beta first, then all
/// delta; exact endpoints are resampled).
[[nodiscard]] SisParams sample_params(Interval beta, Interval delta, double h,
                                      Index n, std::uint64_t seed);

/// FNV-1a hash of the graph weights and parameters; identifies the model a
/// trajectory was produced from.
[[nodiscard]] std::uint64_t model_fingerprint(const SisModel& m);

}  // namespace netsis
