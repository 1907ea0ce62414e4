#include "netsis/model.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <string>

#include "netsis/error.hpp"
#include "netsis/prng.hpp"

namespace netsis {

namespace {

constexpr double kBoundaryBand = 1e-12;
constexpr double kStateSlack = 1e-12;

void check_state_range(const VectorRef& x, Index n) {
    if (x.size() != n)
        throw Error(ErrorCode::StateOutOfRange,
                    "state has dimension " + std::to_string(x.size()) + ", expected " +
                        std::to_string(n));
    for (Index i = 0; i < n; ++i) {
        const double v = x[i];
        if (!(v >= -kStateSlack && v <= 1.0 + kStateSlack))
            throw Error(ErrorCode::StateOutOfRange,
                        "state component " + std::to_string(i) + " = " + std::to_string(v) +
                            " outside [0, 1]",
                        i, v);
    }
}

}  // namespace

ValidatedModel build_and_validate(const Graph& g, const SisParams& p) {
    const Index n = g.n();
    if (p.beta.size() != n || p.delta.size() != n)
        throw Error(ErrorCode::InvalidArgument,
                    "parameter vectors must match the node count " + std::to_string(n));
    if (!(p.h > 0.0))
        throw Error(ErrorCode::AssumptionThreeViolated,
                    "sampling period h must be positive, got " + std::to_string(p.h),
                    std::nullopt, p.h);
    for (Index i = 0; i < n; ++i) {
        if (!(p.beta[i] > 0.0) || !std::isfinite(p.beta[i]))
            throw Error(ErrorCode::AssumptionTwoViolated,
                        "beta must be > 0 at node " + std::to_string(i), i, p.beta[i]);
        if (!(p.delta[i] >= 0.0) || !std::isfinite(p.delta[i]))
            throw Error(ErrorCode::AssumptionTwoViolated,
                        "delta must be >= 0 at node " + std::to_string(i), i, p.delta[i]);
    }
    if (!is_strongly_connected(g))
        throw Error(ErrorCode::NotStronglyConnected, "graph is not strongly connected");

    ValidatedModel out;
    out.model.graph = g;
    out.model.params = p;
    out.model.B = p.beta.asDiagonal() * g.weights;
    out.model.D = p.delta;

    AssumptionReport& report = out.assumptions;
    report.per_node = p.h * (p.delta + out.model.B.rowwise().sum());
    report.worst_value = report.per_node.maxCoeff(&report.worst_node);
    report.near_boundary = report.worst_value > 1.0 - kBoundaryBand;
    if (report.worst_value > 1.0)
        throw Error(ErrorCode::AssumptionThreeViolated,
                    "h * (delta_i + sum_j beta_ij) = " + std::to_string(report.worst_value) +
                        " > 1 at node " + std::to_string(report.worst_node),
                    report.worst_node, report.worst_value);
    return out;
}

Vector step(const SisModel& m, const VectorRef& x) {
    check_state_range(x, m.n());
    const Vector pressure = m.B * x;
    Vector next = (x.array() +
                   m.h() * ((1.0 - x.array()) * pressure.array() - m.D.array() * x.array()))
                      .matrix();
    // No clamping: the dynamics stay in [0,1]^N under the validated
    // assumptions, so leaving the box means the model is corrupt.
    assert(next.minCoeff() >= -kStateSlack && next.maxCoeff() <= 1.0 + kStateSlack);
    return next;
}

Trajectory simulate(const SisModel& m, const VectorRef& x0, Index horizon,
                    double stop_tol) {
    if (horizon < 0)
        throw Error(ErrorCode::InvalidArgument, "horizon must be >= 0");
    if (stop_tol < 0.0)
        throw Error(ErrorCode::InvalidArgument, "stop_tol must be >= 0");

    check_state_range(x0, m.n());
    Trajectory traj;
    traj.stop_tol = stop_tol;
    traj.model_fingerprint = model_fingerprint(m);
    traj.states.reserve(static_cast<std::size_t>(std::min<Index>(horizon, 1 << 20)) + 1);
    traj.states.emplace_back(x0);
    traj.stop_reason = StopReason::Horizon;
    for (Index k = 0; k < horizon; ++k) {
        Vector next = step(m, traj.states.back());
        const double change = (next - traj.states.back()).lpNorm<Eigen::Infinity>();
        traj.states.push_back(std::move(next));
        if (change < stop_tol) {
            traj.stop_reason = StopReason::Converged;
            break;
        }
    }
    return traj;
}

SisParams sample_params(Interval beta, Interval delta, double h, Index n,
                        std::uint64_t seed) {
    if (!(beta.lo >= 0.0 && beta.lo < beta.hi))
        throw Error(ErrorCode::InvalidInterval,
                    "beta interval must satisfy 0 <= lo < hi");
    if (!(delta.lo >= 0.0 && delta.lo < delta.hi))
        throw Error(ErrorCode::InvalidInterval,
                    "delta interval must satisfy 0 <= lo < hi");
    if (!(h > 0.0))
        throw Error(ErrorCode::InvalidArgument, "sampling period h must be positive");
    if (n < 1)
        throw Error(ErrorCode::InvalidArgument, "node count must be >= 1");

    SplitMix64 rng(seed);
    SisParams p;
    p.h = h;
    p.beta.resize(n);
    p.delta.resize(n);
    for (Index i = 0; i < n; ++i) p.beta[i] = rng.uniform_open(beta.lo, beta.hi);
    for (Index i = 0; i < n; ++i) p.delta[i] = rng.uniform_open(delta.lo, delta.hi);
    return p;
}

namespace {

void fnv_mix(std::uint64_t& hash, std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
        hash ^= (word >> (8 * byte)) & 0xFFull;
        hash *= 0x100000001B3ull;
    }
}

void fnv_mix(std::uint64_t& hash, double value) {
    fnv_mix(hash, std::bit_cast<std::uint64_t>(value));
}

}  // namespace

std::uint64_t model_fingerprint(const SisModel& m) {
    std::uint64_t hash = 0xCBF29CE484222325ull;
    fnv_mix(hash, static_cast<std::uint64_t>(m.n()));
    const Matrix& w = m.graph.weights;
    for (Index i = 0; i < w.rows(); ++i)
        for (Index j = 0; j < w.cols(); ++j) fnv_mix(hash, w(i, j));
    for (Index i = 0; i < m.n(); ++i) fnv_mix(hash, m.params.beta[i]);
    for (Index i = 0; i < m.n(); ++i) fnv_mix(hash, m.params.delta[i]);
    fnv_mix(hash, m.params.h);
    return hash;
}

}  // namespace netsis
