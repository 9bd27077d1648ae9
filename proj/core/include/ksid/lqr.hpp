#pragma once

#include "ksid/spectral.hpp"
#include "ksid/types.hpp"

#include <cstddef>

namespace ksid {

/// Minimize sum_k x'Qx + u'Ru subject to x(k+1) = A x(k) + B u(k).
struct LqrProblem {
    Matrix A;
    Matrix B;
    Matrix Q;
    Matrix R;

    /// Checks shapes, symmetry, Q >= 0 (eigenvalues >= -1e-10) and R > 0.
    void validate() const;
};

struct DareResult {
    Matrix P;
    Matrix F;
    Matrix closed_loop;  // A - B F
    double residual = 0.0;
    std::size_t iterations = 0;
};

/// Frobenius norm of A'(P - PB(R + B'PB)^-1 B'P)A + Q - P.
double dare_residual(const LqrProblem& prob, const Matrix& P);

/// Value iteration P <- A'(P - PB(R + B'PB)^-1 B'P)A + Q from P = Q, with
/// symmetrization after each step. Stops once the update is below
/// tol * max(1, |P|_F), then polishes for up to 64 more steps.
DareResult solve_dare(const LqrProblem& prob, double tol = 1e-12, std::size_t max_iter = 100000);

/// F = (R + B'PB)^-1 B'PA, applied as u = -F x.
Matrix lqr_gain(const LqrProblem& prob, const Matrix& P);

struct ClosedLoop {
    Spectrum spectrum;
    bool stable = false;
};

/// Spectrum of A - B F and whether its radius is below one.
ClosedLoop closed_loop_analysis(const Matrix& A, const Matrix& B, const Matrix& F);

struct CostResult {
    double cost = 0.0;
    bool diverged = false;
};

/// Finite-horizon sum of x'Qx + u'Ru for k = 0..horizon-1 under u = -F x.
/// An unstable closed loop yields +inf with `diverged` set.
CostResult lqr_cost(const LqrProblem& prob, const Vector& x0, const Matrix& F, std::size_t horizon);

}  // namespace ksid
