#pragma once

#include "netsis/model.hpp"
#include "netsis/types.hpp"

namespace netsis {

/// Perron root and eigenvectors of an irreducible nonnegative matrix.
struct SpectralReport {
    double rho = 0.0;
    Vector right_vec;  // positive, ||.||_1 = 1
    Vector left_vec;   // positive, ||.||_1 = 1
    int iterations = 0;
    double residual = 0.0;       // ||M r - rho r||_inf
    double residual_left = 0.0;  // ||M^T l - rho l||_inf
    bool converged = false;
};

/// Power iteration on the shifted matrix M + I (primitive for irreducible M,
/// so periodic patterns like plain cycles still converge), started from the
/// uniform vector. Stops when the successive Rayleigh-quotient change drops
/// below tol or the iterate stalls at float noise; hitting max_iter returns
/// the best estimate with converged = false. The left eigenvector is the
/// right Perron vector of the transpose.
[[nodiscard]] SpectralReport perron(const MatrixRef& M, double tol = 1e-12,
                                    int max_iter = 100000);

enum class Regime { DiseaseFreeOnly, EndemicExists };

[[nodiscard]] const char* to_string(Regime r) noexcept;

struct RegimeLabel {
    Regime regime = Regime::DiseaseFreeOnly;
    double rho_threshold = 0.0;  // rho(I - hD + hB)
    bool boundary_warning = false;
};

/// The epidemic-threshold matrix I - hD + hB.
[[nodiscard]] Matrix threshold_matrix(const SisModel& m);

/// Labels the model by the spectral threshold: an endemic equilibrium exists
/// iff rho(I - hD + hB) > 1. Values within 1e-9 of 1 are classified as
/// disease-free with boundary_warning set.
[[nodiscard]] RegimeLabel classify_regime(const SisModel& m);

enum class CwVerdict { MuBelowRho, MuAboveRho, MuEqualsRho, Inconclusive };

[[nodiscard]] const char* to_string(CwVerdict v) noexcept;

/// Collatz-Wielandt comparison of mu against rho(M) through a positive test
/// vector: mu x << M x certifies mu < rho(M), mu x >> M x certifies
/// mu > rho(M), equality within tol certifies mu == rho(M). Mixed signs are
/// inconclusive.
[[nodiscard]] CwVerdict collatz_wielandt_compare(const MatrixRef& M, const VectorRef& x,
                                                 double mu, double tol = 1e-12);

}  // namespace netsis
