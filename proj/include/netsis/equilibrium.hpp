#pragma once

#include <vector>

#include "netsis/model.hpp"
#include "netsis/types.hpp"

namespace netsis {

/// Steady-state bounds
///
///   1 - delta_m / sum_j beta_mj  <=  x_i*  <=  1 - delta_i / (delta_i + sum_j beta_ij)
///
/// with m the node of smallest x_i*.
struct EquilibriumBounds {
    Vector hi;
    double lo_certified = 0.0;  // uses m = argmin_i x_i*; can be negative (vacuous)
    double lo_apriori = 0.0;    // min_i (1 - delta_i / sum_j beta_ij)
    Index m_index = 0;
};

struct EquilibriumReport {
    Vector x_star;
    double residual_inf = 0.0;  // sup norm of the equilibrium residual at x*
    long iterations = 0;
    EquilibriumBounds bounds;
    std::vector<Index> pinned_nodes;  // delta_i == 0 nodes pinned to 1 (permissive mode)
};

enum class DeltaZeroPolicy {
    Strict,      // any delta_i == 0 raises DegenerateDelta
    Permissive,  // delta_i == 0 pins x_i* = 1 and records the node
};

/// Computes the endemic equilibrium by iterating the monotone map
///
///   T(x)_i = 1 - delta_i / (delta_i + sum_j beta_ij x_j)
///
/// from the all-ones vector. The iterates decrease componentwise to the
/// largest fixed point, which is the endemic equilibrium of the endemic
/// regime. The returned report carries the equilibrium-residual sup norm and
/// the steady-state bounds (verified; violations raise BoundViolation).
[[nodiscard]] EquilibriumReport solve_endemic(const SisModel& m, double tol = 1e-12,
                                              long max_iter = 1000000,
                                              DeltaZeroPolicy policy = DeltaZeroPolicy::Strict);

/// Equilibrium residual r_i(x) = (1 - x_i) sum_j beta_ij x_j - delta_i x_i.
/// The dynamics satisfy x(k+1) - x(k) = h r(x(k)), so r == 0 exactly at
/// equilibria.
[[nodiscard]] Vector equilibrium_residual(const SisModel& m, const VectorRef& x);

/// Evaluates the steady-state bounds at a converged equilibrium and verifies
/// them componentwise (slack 1e-9); a violation signals solver failure or
/// regime misclassification.
[[nodiscard]] EquilibriumBounds equilibrium_bounds(const SisModel& m,
                                                   const VectorRef& x_star);

}  // namespace netsis
