#include "netsis/spectral.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "netsis/error.hpp"
#include "netsis/graph.hpp"

namespace netsis {

namespace {

constexpr double kRegimeBand = 1e-9;
// Stop once the normalized iterate moves by no more than a few ulps; beyond
// that point further iterations only shuffle rounding noise.
constexpr double kVectorStall = 8.0 * std::numeric_limits<double>::epsilon();

void check_nonnegative_irreducible(const MatrixRef& M) {
    if (M.rows() != M.cols())
        throw Error(ErrorCode::InvalidArgument, "matrix must be square");
    if (M.rows() < 1)
        throw Error(ErrorCode::InvalidArgument, "matrix must be nonempty");
    if (M.minCoeff() < 0.0)
        throw Error(ErrorCode::NotIrreducible, "matrix has negative entries");
    Graph pattern;
    pattern.weights = M;
    if (!is_strongly_connected(pattern))
        throw Error(ErrorCode::NotIrreducible,
                    "zero pattern is not strongly connected (matrix reducible)");
}

struct PowerResult {
    double rho = 0.0;  // of the unshifted matrix
    Vector vec;
    int iterations = 0;
    bool converged = false;
};

PowerResult power_iteration_shifted(const MatrixRef& M, double tol, int max_iter) {
    const Index n = M.rows();
    const Matrix S = M + Matrix::Identity(n, n);

    PowerResult result;
    Vector u = Vector::Constant(n, 1.0 / static_cast<double>(n));
    double lambda = 0.0;
    double lambda_prev = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= max_iter; ++it) {
        const Vector w = S * u;
        lambda = u.dot(w) / u.dot(u);
        const Vector u_next = w / w.sum();  // w >> 0, so sum == l1 norm
        const double vec_change = (u_next - u).lpNorm<Eigen::Infinity>();
        u = u_next;
        result.iterations = it;
        if (std::abs(lambda - lambda_prev) < tol || vec_change <= kVectorStall) {
            result.converged = true;
            break;
        }
        lambda_prev = lambda;
    }
    result.rho = lambda - 1.0;
    result.vec = u;
    return result;
}

}  // namespace

SpectralReport perron(const MatrixRef& M, double tol, int max_iter) {
    check_nonnegative_irreducible(M);
    if (!(tol > 0.0) || max_iter < 1)
        throw Error(ErrorCode::InvalidArgument, "tol must be > 0 and max_iter >= 1");

    const PowerResult right = power_iteration_shifted(M, tol, max_iter);
    const PowerResult left = power_iteration_shifted(M.transpose(), tol, max_iter);

    SpectralReport report;
    report.rho = right.rho;
    report.right_vec = right.vec;
    report.left_vec = left.vec;
    report.iterations = right.iterations + left.iterations;
    report.converged = right.converged && left.converged;
    report.residual =
        (M * report.right_vec - report.rho * report.right_vec).lpNorm<Eigen::Infinity>();
    report.residual_left =
        (M.transpose() * report.left_vec - report.rho * report.left_vec)
            .lpNorm<Eigen::Infinity>();
    return report;
}

const char* to_string(Regime r) noexcept {
    return r == Regime::EndemicExists ? "EndemicExists" : "DiseaseFreeOnly";
}

Matrix threshold_matrix(const SisModel& m) {
    return Matrix::Identity(m.n(), m.n()) - m.h() * Matrix(m.D.asDiagonal()) +
           m.h() * m.B;
}

RegimeLabel classify_regime(const SisModel& m) {
    const Matrix M = threshold_matrix(m);
    const SpectralReport spec = perron(M);

    RegimeLabel label;
    label.rho_threshold = spec.rho;
    if (spec.rho > 1.0 + kRegimeBand) {
        label.regime = Regime::EndemicExists;
        label.boundary_warning = false;
    } else {
        // The regime dichotomy is exact in real arithmetic; inside the float
        // band we fall back to the disease-free branch and warn.
        label.regime = Regime::DiseaseFreeOnly;
        label.boundary_warning = std::abs(spec.rho - 1.0) <= kRegimeBand;
    }
    return label;
}

const char* to_string(CwVerdict v) noexcept {
    switch (v) {
        case CwVerdict::MuBelowRho: return "MuBelowRho";
        case CwVerdict::MuAboveRho: return "MuAboveRho";
        case CwVerdict::MuEqualsRho: return "MuEqualsRho";
        case CwVerdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

CwVerdict collatz_wielandt_compare(const MatrixRef& M, const VectorRef& x, double mu,
                                   double tol) {
    if (M.rows() != M.cols() || M.rows() != x.size())
        throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
    if (x.minCoeff() <= 0.0)
        throw Error(ErrorCode::NonPositiveVector,
                    "test vector must be strictly positive");
    if (!(mu >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "mu must be >= 0");

    const Vector diff = M * x - mu * x;
    if ((diff.array() > tol).all()) return CwVerdict::MuBelowRho;
    if ((diff.array() < -tol).all()) return CwVerdict::MuAboveRho;
    if ((diff.array().abs() <= tol).all()) return CwVerdict::MuEqualsRho;
    return CwVerdict::Inconclusive;
}

}  // namespace netsis
