#include "ksid/bounds.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace ksid {

double alpha(double u) {
    if (!(u > 1.0)) throw std::domain_error("alpha: argument must exceed 1");
    return (u - 1.0) * std::log(u);
}

double alpha_inverse(double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::domain_error("alpha_inverse: argument must be finite and >= 0");
    if (v == 0.0) return 1.0;
    double lo = 1.0 + 1e-12;
    double hi = std::max(2.0, v / std::log(2.0) + 2.0);
    while (alpha(hi) < v) hi *= 2.0;
    if (alpha(lo) >= v) return lo;
    // Bisect until the bracket cannot shrink: the residual is then at the
    // rounding level of alpha, well inside 1e-12 * max(1, v).
    for (int it = 0; it < 2200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double f = alpha(mid) - v;
        if (f == 0.0) return mid;
        if (f < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double spectral_norm_power(const Matrix& M, double rel_tol, int max_iter) {
    if (M.size() == 0) return 0.0;
    Vector v = Vector::Ones(M.cols()).normalized();
    double prev = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vector w = M.transpose() * (M * v);
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
        const double est = std::sqrt(nw);
        if (std::abs(est - prev) <= rel_tol * est) return est;
        prev = est;
    }
    return prev;
}

double spectral_norm(const Matrix& M) {
    if (M.size() == 0) return 0.0;
    if (std::max(M.rows(), M.cols()) > kSpectralNormSvdLimit) return spectral_norm_power(M);
    const Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues()(0);
}

void BoundInputs::validate() const {
    const auto t = K_tt.rows();
    const auto x = K_tx.cols();
    if (t == 0 || K_tt.cols() != t || K_tx.rows() != t) throw DimensionError("bound: K_tt / K_tx shapes differ");
    if (weights.size() != x || noise_bounds.size() != x) throw DimensionError("bound: weights and M_x need |x| entries");
    if (!(weights.array() > 0.0).all()) throw std::invalid_argument("bound: weights must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("bound: gamma must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("bound: delta must lie in (0, 1)");
    if (!(sigma_w2 >= 0.0)) throw std::invalid_argument("bound: sigma_w^2 must be >= 0");
    if (!noise_bounds.allFinite()) throw std::invalid_argument("bound: B_w must be finite");
}

BoundReport sample_error_bound(const BoundInputs& inp) {
    inp.validate();
    const Vector sqrt_w = inp.weights.cwiseSqrt();
    const Matrix T = inp.K_tx * inp.weights.asDiagonal() * inp.K_tx.transpose() + inp.gamma * inp.K_tt;
    const Eigen::FullPivLU<Matrix> lu(T);
    if (!lu.isInvertible()) throw NumericError("bound: regularized operator is singular");
    const Matrix T_inv = lu.inverse();
    const Matrix L_w = T_inv * inp.K_tx * sqrt_w.asDiagonal();

    BoundReport r;
    r.kappa = spectral_norm(inp.K_tt) * std::pow(spectral_norm(T_inv), 2);
    r.L_norm = spectral_norm(L_w);
    r.KL_norm = spectral_norm(inp.K_tt * L_w);
    r.B_w = std::sqrt(inp.weights.dot(inp.noise_bounds.cwiseAbs2()));
    r.sigma_w2 = inp.sigma_w2;
    if (inp.sigma_w2 == 0.0 || r.kappa == 0.0) {
        r.degenerate = true;
        return r;
    }
    const double scale = r.kappa * inp.sigma_w2;
    r.argument = 2.0 * r.KL_norm * r.L_norm * r.B_w * r.B_w / scale * std::log(1.0 / inp.delta);
    r.epsilon = scale * alpha_inverse(r.argument);
    return r;
}

BoundInputs bound_inputs_for(const PointSet& expansion,
                             const PointSet& evaluation,
                             const KernelSpec& kernel,
                             double gamma,
                             double noise_amplitude,
                             double delta) {
    const auto m = evaluation.rows();
    if (m == 0) throw DimensionError("bound: empty sample set");
    BoundInputs inp;
    inp.K_tt = gram(kernel, expansion, expansion);
    inp.K_tx = gram(kernel, expansion, evaluation);
    inp.weights = Vector::Constant(m, 1.0 / static_cast<double>(m));
    inp.gamma = gamma;
    inp.noise_bounds = Vector::Constant(m, noise_amplitude);
    const double var = noise_amplitude * noise_amplitude / 3.0;
    inp.sigma_w2 = inp.weights.sum() * var;
    inp.delta = delta;
    return inp;
}

}  // namespace ksid
