#include "netsis/stability.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "netsis/error.hpp"
#include "netsis/spectral.hpp"

namespace netsis {

namespace {

constexpr double kCertTol = 1e-8;
constexpr double kLyapunovSlack = 1e-12;

Vector delta_over_gap(const SisModel& m, const VectorRef& x_star) {
    const Index n = m.n();
    if (x_star.size() != n)
        throw Error(ErrorCode::InvalidArgument, "x_star dimension mismatch");
    for (Index i = 0; i < n; ++i) {
        if (m.D[i] == 0.0)
            throw Error(ErrorCode::DegenerateDelta, "stability",
                        "delta = 0 at node " + std::to_string(i) +
                            "; error-system matrices are undefined",
                        i);
        if (!(x_star[i] > 0.0 && x_star[i] < 1.0))
            throw Error(ErrorCode::InvalidArgument,
                        "x_star must lie strictly inside (0, 1) at node " +
                            std::to_string(i),
                        i, x_star[i]);
    }
    return (m.h() * m.D.array() / (1.0 - x_star.array())).matrix();
}

}  // namespace

const char* to_string(InitialClass c) noexcept {
    switch (c) {
        case InitialClass::Zero: return "Zero";
        case InitialClass::Dl: return "Dl";
        case InitialClass::Dh: return "Dh";
        case InitialClass::Mixed: return "Mixed";
    }
    return "Mixed";
}

InitialClass classify_initial(const VectorRef& x0, const VectorRef& x_star) {
    if (x0.size() != x_star.size())
        throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
    if ((x0.array() == 0.0).all()) return InitialClass::Zero;
    if ((x0.array() <= x_star.array()).all()) return InitialClass::Dl;
    if ((x0.array() >= x_star.array()).all()) return InitialClass::Dh;
    return InitialClass::Mixed;
}

ErrorSystem build_error_system(const SisModel& m, const VectorRef& x_star) {
    const Index n = m.n();
    const Vector d = delta_over_gap(m, x_star);

    ErrorSystem es;
    es.Xi = Matrix::Identity(n, n) - Matrix(d.asDiagonal()) +
            m.h() * ((1.0 - x_star.array()).matrix().asDiagonal() * m.B);
    es.F = Matrix::Identity(n, n) - Matrix(d.asDiagonal()) + m.h() * m.B;
    es.mu = x_star / x_star[0];

    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (es.Xi(i, j) < -1e-12)
                throw Error(ErrorCode::NonNegativityViolation,
                            "Xi(" + std::to_string(i) + "," + std::to_string(j) +
                                ") = " + std::to_string(es.Xi(i, j)) +
                                " < 0; x_star is inconsistent with the model",
                            i, es.Xi(i, j));

    es.f_mu_residual = (es.F * es.mu - es.mu).lpNorm<Eigen::Infinity>();
    if (es.f_mu_residual > kCertTol)
        throw Error(ErrorCode::SpectralCertificateFailed,
                    "||F mu - mu||_inf = " + std::to_string(es.f_mu_residual),
                    std::nullopt, es.f_mu_residual);

    // Tight tolerance: v feeds the Lyapunov increment identity, which is
    // checked to 1e-12 and needs the left residual at the float noise floor.
    const SpectralReport f_spec = perron(es.F, 1e-15, 200000);
    if (!f_spec.converged)
        throw Error(ErrorCode::SpectralCertificateFailed,
                    "power iteration on F did not converge");
    es.rho_f = f_spec.rho;
    es.v = f_spec.left_vec;
    if (std::abs(es.rho_f - 1.0) > kCertTol)
        throw Error(ErrorCode::SpectralCertificateFailed,
                    "rho(F) = " + std::to_string(es.rho_f) + ", expected 1",
                    std::nullopt, es.rho_f);

    const SpectralReport xi_spec = perron(es.Xi, 1e-14, 200000);
    if (!xi_spec.converged)
        throw Error(ErrorCode::SpectralCertificateFailed,
                    "power iteration on Xi did not converge");
    es.rho_xi = xi_spec.rho;
    if (!(es.rho_xi < 1.0))
        throw Error(ErrorCode::SpectralCertificateFailed,
                    "rho(Xi) = " + std::to_string(es.rho_xi) + " >= 1",
                    std::nullopt, es.rho_xi);
    if (collatz_wielandt_compare(es.Xi, x_star, 1.0) != CwVerdict::MuAboveRho)
        throw Error(ErrorCode::SpectralCertificateFailed,
                    "Xi x* << x* does not hold strictly");
    return es;
}

OvershootReport overshoot_check(const Trajectory& traj, const VectorRef& x_star,
                                double slack) {
    if (traj.states.empty())
        throw Error(ErrorCode::InvalidArgument, "empty trajectory");

    OvershootReport report;
    report.initial_class = classify_initial(traj.front(), x_star);
    for (const Vector& x : traj.states) {
        report.up_violations += (x.array() > x_star.array() + slack).count();
        report.down_violations += (x.array() < x_star.array() - slack).count();
    }
    switch (report.initial_class) {
        case InitialClass::Dl:
            report.asserted = true;
            report.pass = report.up_violations == 0;
            break;
        case InitialClass::Dh:
            report.asserted = true;
            report.pass = report.down_violations == 0;
            break;
        default:
            report.asserted = false;
            report.pass = true;
            break;
    }
    return report;
}

LyapunovTrace lyapunov_trace(const SisModel& m, const VectorRef& x_star,
                             const ErrorSystem& es, const Trajectory& traj) {
    const Vector d = delta_over_gap(m, x_star);
    const auto hit = positivity_hitting_time(traj);
    if (!hit)
        throw Error(ErrorCode::NoPositiveState,
                    "trajectory never reaches a strictly positive state");

    const auto K = static_cast<Index>(traj.states.size()) - 1;
    LyapunovTrace trace;
    trace.start = *hit;
    trace.values.reserve(static_cast<std::size_t>(K - trace.start) + 1);

    Vector y = (traj.states[static_cast<std::size_t>(trace.start)] - x_star).cwiseAbs();
    double v_current = es.v.dot(y);
    trace.values.push_back(v_current);

    for (Index k = trace.start; k < K; ++k) {
        const Vector& x = traj.states[static_cast<std::size_t>(k)];
        const Vector by = m.B * y;
        const Vector y_next =
            (y.array() - d.array() * y.array() + m.h() * (1.0 - x.array()) * by.array())
                .matrix();
        const double v_next = es.v.dot(y_next);

        const double direct = v_next - v_current;
        const double predicted = -m.h() * es.v.dot((x.array() * by.array()).matrix());
        trace.max_identity_error =
            std::max(trace.max_identity_error, std::abs(direct - predicted));
        if (v_next > v_current + kLyapunovSlack) trace.monotone = false;

        y = y_next;
        v_current = v_next;
        trace.values.push_back(v_current);
    }
    return trace;
}

std::optional<Index> positivity_hitting_time(const Trajectory& traj) {
    for (std::size_t k = 0; k < traj.states.size(); ++k)
        if ((traj.states[k].array() > 0.0).all()) return static_cast<Index>(k);
    return std::nullopt;
}

std::optional<double> convergence_rate(const Trajectory& traj, const VectorRef& target) {
    const auto total = static_cast<Index>(traj.states.size());
    if (total < 10) return std::nullopt;

    const double floor = 100.0 * std::numeric_limits<double>::epsilon();
    const Index start = (total - 1) / 2;
    double log_sum = 0.0;
    long count = 0;
    for (Index k = start; k + 1 < total; ++k) {
        const double e0 =
            (traj.states[static_cast<std::size_t>(k)] - target).lpNorm<Eigen::Infinity>();
        const double e1 =
            (traj.states[static_cast<std::size_t>(k) + 1] - target).lpNorm<Eigen::Infinity>();
        if (e0 <= floor || e1 <= floor) continue;
        log_sum += std::log(e1 / e0);
        ++count;
    }
    if (count == 0) return std::nullopt;
    return std::exp(log_sum / static_cast<double>(count));
}

}  // namespace netsis
