#pragma once

// Reference computations used only by tests. Each one follows a route that
// is independent of the library code it checks.

#include "ksid/lqr.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace ksid::testing {

/// Primal ridge regression: (X'X + N gamma I)^-1 X'y.
inline Eigen::VectorXd primal_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double gamma) {
    const double N = static_cast<double>(X.rows());
    Eigen::MatrixXd M = X.transpose() * X;
    M.diagonal().array() += N * gamma;
    return M.ldlt().solve(X.transpose() * y);
}

/// Plain bisection root of f on [lo, hi] (f(lo) < 0 < f(hi)).
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Smallest singular value of (A - lambda I) over the complex field.
inline double eigen_backward_error(const Eigen::MatrixXd& A, std::complex<double> lambda) {
    const Eigen::MatrixXcd M = A.cast<std::complex<double>>() -
                               lambda * Eigen::MatrixXcd::Identity(A.rows(), A.cols());
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

/// Random matrix with entries N(0,1).
inline Eigen::MatrixXd gaussian_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd M(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) M(i, j) = nd(rng);
    return M;
}

struct RandomRegression {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

/// Gaussian design with targets from a random linear map plus noise.
inline RandomRegression random_regression(std::mt19937_64& rng, int n, int N) {
    RandomRegression r;
    r.X = gaussian_matrix(rng, N, n);
    r.y = r.X * gaussian_matrix(rng, n, 1) + 0.1 * gaussian_matrix(rng, N, 1);
    return r;
}

/// Shrunk Gaussian A, Gaussian B, Q = LL' + I, R = I. Stabilizable almost surely.
inline ksid::LqrProblem random_lqr_problem(std::mt19937_64& rng, int n, int m) {
    ksid::LqrProblem p;
    p.A = gaussian_matrix(rng, n, n) * 0.6;
    p.B = gaussian_matrix(rng, n, m);
    const Eigen::MatrixXd L = gaussian_matrix(rng, n, n);
    p.Q = L * L.transpose() + Eigen::MatrixXd::Identity(n, n);
    p.R = Eigen::MatrixXd::Identity(m, m);
    return p;
}

/// Largest eigenvalue modulus via the characteristic roots of 2x2 blocks is
/// not general; for tests we rescale by the power-iteration growth of |A^k|.
inline double growth_radius(const Eigen::MatrixXd& A, int k = 400) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(A.rows(), A.cols());
    double log_scale = 0.0;
    for (int i = 0; i < k; ++i) {
        P = A * P;
        const double nrm = P.norm();
        if (nrm == 0.0) return 0.0;
        log_scale += std::log(nrm);
        P /= nrm;
    }
    return std::exp(log_scale / k);
}

/// Direct evaluation of J = sum x'Qx + u'Ru under u = -F x.
inline double rollout_cost(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& Q,
                           const Eigen::MatrixXd& R, const Eigen::MatrixXd& F, Eigen::VectorXd x, int horizon) {
    double J = 0.0;
    for (int k = 0; k < horizon; ++k) {
        const Eigen::VectorXd u = -F * x;
        J += x.dot(Q * x) + u.dot(R * u);
        x = A * x + B * u;
    }
    return J;
}

}  // namespace ksid::testing
