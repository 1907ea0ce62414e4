#include "netsis/equilibrium.hpp"

#include <cmath>
#include <string>

#include "netsis/error.hpp"
#include "netsis/spectral.hpp"

namespace netsis {

namespace {

constexpr double kBoundSlack = 1e-9;

}  // namespace

EquilibriumReport solve_endemic(const SisModel& m, double tol, long max_iter,
                                DeltaZeroPolicy policy) {
    if (!(tol > 0.0) || max_iter < 1)
        throw Error(ErrorCode::InvalidArgument, "tol must be > 0 and max_iter >= 1");

    const RegimeLabel regime = classify_regime(m);
    if (regime.regime != Regime::EndemicExists)
        throw Error(ErrorCode::RegimeMismatch,
                    "no endemic equilibrium: rho(I - hD + hB) = " +
                        std::to_string(regime.rho_threshold) + " <= 1");

    const Index n = m.n();
    EquilibriumReport report;
    for (Index i = 0; i < n; ++i) {
        if (m.D[i] == 0.0) {
            if (policy == DeltaZeroPolicy::Strict)
                throw Error(ErrorCode::DegenerateDelta,
                            "delta = 0 at node " + std::to_string(i) +
                                " forces x_i* = 1; downstream error dynamics are undefined",
                            i);
            report.pinned_nodes.push_back(i);
        }
    }

    Vector x = Vector::Ones(n);
    bool converged = false;
    for (long it = 1; it <= max_iter; ++it) {
        const Vector pressure = m.B * x;
        Vector next(n);
        for (Index i = 0; i < n; ++i)
            next[i] = m.D[i] == 0.0 ? 1.0 : 1.0 - m.D[i] / (m.D[i] + pressure[i]);
        const double change = (next - x).lpNorm<Eigen::Infinity>();
        x = std::move(next);
        report.iterations = it;
        if (change < tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw Error(ErrorCode::NoConvergence,
                    "fixed-point iteration did not reach tol " + std::to_string(tol) +
                        " within " + std::to_string(max_iter) + " iterations");

    report.x_star = std::move(x);
    report.residual_inf =
        equilibrium_residual(m, report.x_star).lpNorm<Eigen::Infinity>();
    report.bounds = equilibrium_bounds(m, report.x_star);
    return report;
}

Vector equilibrium_residual(const SisModel& m, const VectorRef& x) {
    if (x.size() != m.n())
        throw Error(ErrorCode::InvalidArgument, "state dimension mismatch");
    const Vector pressure = m.B * x;
    return ((1.0 - x.array()) * pressure.array() - m.D.array() * x.array()).matrix();
}

EquilibriumBounds equilibrium_bounds(const SisModel& m, const VectorRef& x_star) {
    const Index n = m.n();
    if (x_star.size() != n)
        throw Error(ErrorCode::InvalidArgument, "state dimension mismatch");

    const Vector row_sums = m.B.rowwise().sum();  // sum_j beta_ij > 0 by strong connectivity
    EquilibriumBounds bounds;
    bounds.hi = (1.0 - m.D.array() / (m.D.array() + row_sums.array())).matrix();

    bounds.m_index = 0;
    for (Index i = 1; i < n; ++i)
        if (x_star[i] < x_star[bounds.m_index]) bounds.m_index = i;
    bounds.lo_certified = 1.0 - m.D[bounds.m_index] / row_sums[bounds.m_index];
    bounds.lo_apriori = (1.0 - m.D.array() / row_sums.array()).minCoeff();

    for (Index i = 0; i < n; ++i) {
        if (x_star[i] < bounds.lo_certified - kBoundSlack)
            throw Error(ErrorCode::BoundViolation,
                        "x_star[" + std::to_string(i) + "] = " + std::to_string(x_star[i]) +
                            " below certified lower bound " +
                            std::to_string(bounds.lo_certified),
                        i, x_star[i]);
        if (x_star[i] > bounds.hi[i] + kBoundSlack)
            throw Error(ErrorCode::BoundViolation,
                        "x_star[" + std::to_string(i) + "] = " + std::to_string(x_star[i]) +
                            " above upper bound " + std::to_string(bounds.hi[i]),
                        i, x_star[i]);
    }
    return bounds;
}

}  // namespace netsis
