#pragma once

#include "ksid/dynamics.hpp"
#include "ksid/spectral.hpp"

#include <optional>

namespace ksid {

struct ErrorReport {
    Matrix errors;                 // row k = x(k) - x^(k), k = 0..K
    double full_energy = 0.0;      // sqrt(sum_{k=1..K} |e(k)|^2)
    Vector full_energy_per_component;
    Eigen::Index tail_start = 0;
    double tail_energy = 0.0;      // sqrt(sum_{k=tail_start..K} |e(k)|^2)
    Vector tail_energy_per_component;
    /// exp of the slope of a least-squares fit of log|e(k)| against k;
    /// empty when the fit window holds fewer than two points.
    std::optional<double> decay_rate;
};

/// Log-fit window starts here; shorter series fall back to k >= 1.
inline constexpr Eigen::Index kDecayFitStart = 10;

ErrorReport compare_trajectories(const Trajectory& truth, const Trajectory& predicted, Eigen::Index tail_start);

struct MatrixDistance {
    double max_abs = 0.0;
    double frobenius = 0.0;
    Spectrum error_spectrum;  // eigenvalues of A - A_hat
};

MatrixDistance matrix_distance(const Matrix& A, const Matrix& A_hat);

}  // namespace ksid
