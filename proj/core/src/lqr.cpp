#include "ksid/lqr.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace ksid {
namespace {

Eigen::LDLT<Matrix> factor_input_weight(const LqrProblem& prob, const Matrix& P) {
    const Matrix S = prob.R + prob.B.transpose() * P * prob.B;
    Eigen::LDLT<Matrix> ldlt(S);
    const double smallest = ldlt.vectorD().cwiseAbs().minCoeff();
    if (ldlt.info() != Eigen::Success || !(smallest > 1e-14 * std::max(1.0, S.stableNorm()))) {
        throw NumericError("R + B'PB is numerically singular");
    }
    return ldlt;
}

// Evaluated as (A - BF)'P(A - BF) + F'RF + Q with F = (R + B'PB)^-1 B'PA.
// Equal to A'(P - PB(R + B'PB)^-1 B'P)A + Q, but a sum of semidefinite terms,
// so it does not cancel when P is large.
Matrix riccati_map(const LqrProblem& prob, const Matrix& P) {
    const auto ldlt = factor_input_weight(prob, P);
    const Matrix F = ldlt.solve(prob.B.transpose() * P * prob.A);
    const Matrix closed = prob.A - prob.B * F;
    return closed.transpose() * P * closed + F.transpose() * prob.R * F + prob.Q;
}

bool symmetric(const Matrix& M) {
    return (M - M.transpose()).norm() <= 1e-10 * std::max(1.0, M.norm());
}

}  // namespace

void LqrProblem::validate() const {
    const auto n = A.rows();
    if (n == 0 || A.cols() != n) throw DimensionError("LQR: A must be square");
    if (B.rows() != n || B.cols() < 1) throw DimensionError("LQR: B must be n x m with m >= 1");
    const auto m = B.cols();
    if (Q.rows() != n || Q.cols() != n) throw DimensionError("LQR: Q must be n x n");
    if (R.rows() != m || R.cols() != m) throw DimensionError("LQR: R must be m x m");
    if (!A.allFinite() || !B.allFinite() || !Q.allFinite() || !R.allFinite()) {
        throw NumericError("LQR: problem data must be finite");
    }
    if (!symmetric(Q)) throw std::invalid_argument("LQR: Q must be symmetric");
    if (!symmetric(R)) throw std::invalid_argument("LQR: R must be symmetric");
    const Eigen::SelfAdjointEigenSolver<Matrix> qe(Q, Eigen::EigenvaluesOnly);
    if (qe.eigenvalues().minCoeff() < -1e-10) throw std::invalid_argument("LQR: Q must be positive semidefinite");
    const Eigen::SelfAdjointEigenSolver<Matrix> re(R, Eigen::EigenvaluesOnly);
    if (!(re.eigenvalues().minCoeff() > 0.0)) throw std::invalid_argument("LQR: R must be positive definite");
}

double dare_residual(const LqrProblem& prob, const Matrix& P) { return (riccati_map(prob, P) - P).norm(); }

DareResult solve_dare(const LqrProblem& prob, double tol, std::size_t max_iter) {
    prob.validate();
    Matrix P = prob.Q;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        Matrix next = riccati_map(prob, P);
        next = 0.5 * (next + next.transpose());
        if (!next.allFinite()) {
            throw ConvergenceError("DARE iteration diverged; (A, B) is likely not stabilizable", it);
        }
        const double step = (next - P).stableNorm();
        const double scale = std::max(1.0, P.stableNorm());
        P = std::move(next);
        if (step <= tol * scale) {
            // The step underestimates the remaining error when the contraction
            // is slow or oscillating; polish for a bounded number of extra
            // iterations and keep the iterate whose update was smallest.
            constexpr std::size_t kPolish = 64;
            double best_step = step;
            Matrix best = P;
            std::size_t done = it;
            for (std::size_t extra = 0; extra < kPolish && done < max_iter && best_step > 0.0; ++extra) {
                Matrix more = riccati_map(prob, P);
                more = 0.5 * (more + more.transpose());
                if (!more.allFinite()) break;
                const double s = (more - P).stableNorm();
                P = std::move(more);
                ++done;
                if (s < best_step) {
                    best_step = s;
                    best = P;
                }
            }
            P = std::move(best);
            DareResult r;
            r.P = P;
            r.F = lqr_gain(prob, P);
            r.closed_loop = prob.A - prob.B * r.F;
            r.residual = dare_residual(prob, P);
            r.iterations = done;
            return r;
        }
    }
    throw ConvergenceError("DARE iteration did not converge within the iteration limit; (A, B) may not be stabilizable",
                           max_iter);
}

Matrix lqr_gain(const LqrProblem& prob, const Matrix& P) {
    if (P.rows() != prob.A.rows() || P.cols() != prob.A.rows()) throw DimensionError("lqr_gain: P must be n x n");
    const auto ldlt = factor_input_weight(prob, P);
    return ldlt.solve(prob.B.transpose() * P * prob.A);
}

ClosedLoop closed_loop_analysis(const Matrix& A, const Matrix& B, const Matrix& F) {
    if (A.rows() != A.cols() || B.rows() != A.rows() || F.rows() != B.cols() || F.cols() != A.cols()) {
        throw DimensionError("closed_loop_analysis: incompatible A, B, F");
    }
    ClosedLoop cl;
    cl.spectrum = eigenvalues(A - B * F);
    cl.stable = cl.spectrum.radius < 1.0;
    return cl;
}

CostResult lqr_cost(const LqrProblem& prob, const Vector& x0, const Matrix& F, std::size_t horizon) {
    const auto n = prob.A.rows();
    if (x0.size() != n || F.rows() != prob.B.cols() || F.cols() != n) {
        throw DimensionError("lqr_cost: dimension mismatch");
    }
    const Matrix closed = prob.A - prob.B * F;
    if (spectral_radius(closed) >= 1.0) {
        return {std::numeric_limits<double>::infinity(), true};
    }
    double cost = 0.0;
    Vector x = x0;
    for (std::size_t k = 0; k < horizon; ++k) {
        const Vector u = -F * x;
        cost += x.dot(prob.Q * x) + u.dot(prob.R * u);
        x = closed * x;
    }
    return {cost, false};
}

}  // namespace ksid
