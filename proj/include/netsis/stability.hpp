#pragma once

#include <optional>
#include <vector>

#include "netsis/model.hpp"
#include "netsis/types.hpp"

namespace netsis {

enum class InitialClass { Zero, Dl, Dh, Mixed };

[[nodiscard]] const char* to_string(InitialClass c) noexcept;

/// Classifies x0 against the endemic equilibrium: Zero (x0 == 0), Dl
/// (0 < x0 <= x* componentwise), Dh (x* < x0 <= 1), Mixed otherwise.
/// x0 == x* lands in Dl.
[[nodiscard]] InitialClass classify_initial(const VectorRef& x0, const VectorRef& x_star);

/// Linearized error machinery around the endemic equilibrium:
///
///   Xi = I - diag(h delta_i / (1 - x_i*)) + h diag(1 - x*) B
///   F  = I - diag(h delta_i / (1 - x_i*)) + h B
///
/// Xi governs the comparison system z(k+1) <= Xi z(k) of the no-overshoot
/// argument; F has F mu = mu for mu = x* / x_1*, hence rho(F) = 1, and its
/// positive left Perron vector v weights the Lyapunov function of the
/// time-varying auxiliary system.
struct ErrorSystem {
    Matrix Xi;
    Matrix F;
    Vector mu;  // x* normalized by its first component
    Vector v;   // positive left Perron vector of F, ||.||_1 = 1
    double rho_xi = 0.0;
    double rho_f = 0.0;
    double f_mu_residual = 0.0;  // ||F mu - mu||_inf
};

/// Assembles Xi, F, mu and v and verifies the spectral certificates:
/// Xi >= 0 entrywise, ||F mu - mu||_inf small, |rho(F) - 1| small,
/// rho(Xi) < 1 and Xi x* << x* strictly. Requires delta_i > 0 for all i
/// (otherwise x_i* = 1 and the construction is undefined).
[[nodiscard]] ErrorSystem build_error_system(const SisModel& m, const VectorRef& x_star);

struct OvershootReport {
    long up_violations = 0;    // (k, i) with x_i(k) > x_i* + slack
    long down_violations = 0;  // (k, i) with x_i(k) < x_i* - slack
    InitialClass initial_class = InitialClass::Mixed;
    bool asserted = false;  // Dl / Dh starts carry a no-overshoot assertion
    bool pass = true;
};

/// Counts equilibrium crossings along a trajectory; Dl starts must never
/// exceed x* and Dh starts must never drop below it (slack absorbs float
/// noise only). Mixed and Zero starts yield counts without an assertion.
[[nodiscard]] OvershootReport overshoot_check(const Trajectory& traj,
                                              const VectorRef& x_star,
                                              double slack = 1e-12);

struct LyapunovTrace {
    Index start = 0;             // positivity hitting time s
    std::vector<double> values;  // V(s), V(s+1), ..., V(K)
    double max_identity_error = 0.0;
    bool monotone = true;  // V(k+1) <= V(k) + 1e-12 throughout
};

/// Evolves the auxiliary system y(k+1) = Phi(k) y(k) from y(s) = |x(s) - x*|
/// at the positivity hitting time s, with
///
///   Phi(k) = I - diag(h delta_i / (1 - x_i*)) + diag(1 - x(k)) h B,
///
/// and returns V(k) = v^T y(k). Each step cross-checks the increment
/// identity  V(k+1) - V(k) = -h v^T diag(x(k)) B y(k).
[[nodiscard]] LyapunovTrace lyapunov_trace(const SisModel& m, const VectorRef& x_star,
                                           const ErrorSystem& es, const Trajectory& traj);

/// Smallest k with x(k) strictly positive in every component; nullopt if the
/// trajectory never becomes positive (only possible from x0 = 0).
[[nodiscard]] std::optional<Index> positivity_hitting_time(const Trajectory& traj);

/// Geometric-mean per-step contraction of ||x(k) - target||_inf over the
/// last half of the trajectory, ignoring steps at the float floor
/// (100 x machine epsilon); nullopt when the error is already at floor or
/// the trajectory is too short.
[[nodiscard]] std::optional<double> convergence_rate(const Trajectory& traj,
                                                     const VectorRef& target);

}  // namespace netsis
