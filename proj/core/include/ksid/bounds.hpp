#pragma once

#include "ksid/kernels.hpp"
#include "ksid/types.hpp"

namespace ksid {

/// alpha(u) = (u - 1) log u, u > 1.
double alpha(double u);

/// The u >= 1 with alpha(u) = v, by bracketed bisection to
/// |alpha(u) - v| <= 1e-12 max(1, v).
double alpha_inverse(double v);

/// Spectral norm (largest singular value). Dense SVD up to
/// kSpectralNormSvdLimit rows/cols, power iteration on M'M beyond that.
double spectral_norm(const Matrix& M);
double spectral_norm_power(const Matrix& M, double rel_tol = 1e-10, int max_iter = 10000);

inline constexpr Eigen::Index kSpectralNormSvdLimit = 256;

/// Inputs to the sample-error estimate for a finite sample set x and an
/// expansion set t.
struct BoundInputs {
    Matrix K_tt;            // |t| x |t|
    Matrix K_tx;            // |t| x |x|
    Vector weights;         // w_x > 0, length |x|
    double gamma = 1.0;     // > 0
    Vector noise_bounds;    // M_x, length |x|
    double sigma_w2 = 0.0;  // sum_x w_x sigma_x^2
    double delta = 0.05;    // confidence parameter in (0, 1)

    void validate() const;
};

struct BoundReport {
    double kappa = 0.0;
    double L_norm = 0.0;      // |L_w|
    double KL_norm = 0.0;     // |K_tt L_w|
    double B_w = 0.0;
    double sigma_w2 = 0.0;
    double argument = 0.0;    // argument passed to alpha^-1
    double epsilon = 0.0;     // sample error bound
    bool degenerate = false;  // sigma_w2 == 0: bound reported as 0
};

/// With D = diag(w) and T = K_tx D K_tx' + gamma K_tt:
///   L_w   = T^-1 K_tx D^(1/2)
///   kappa = |K_tt| |T^-1|^2
///   eps   = kappa sigma_w2 alpha^-1( 2 |K_tt L_w| |L_w| B_w^2 / (kappa sigma_w2) * log(1/delta) )
/// with B_w^2 = sum_x w_x M_x^2 and spectral norms throughout.
BoundReport sample_error_bound(const BoundInputs& inp);

/// Inputs for a ridge problem: t = expansion points, x = evaluation points,
/// w = 1/|x|, M_x = noise amplitude and sigma_x^2 = M_x^2 / 3 (uniform noise).
BoundInputs bound_inputs_for(const PointSet& expansion,
                             const PointSet& evaluation,
                             const KernelSpec& kernel,
                             double gamma,
                             double noise_amplitude,
                             double delta);

}  // namespace ksid
