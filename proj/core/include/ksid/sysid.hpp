#pragma once

#include "ksid/dynamics.hpp"
#include "ksid/kernels.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ksid {

enum class RescalePolicy { automatic, never, always };

const char* to_string(RescalePolicy policy);

/// Rescaling is triggered in `automatic` mode when the growth factor exceeds this.
inline constexpr double kAutoRescaleThreshold = 1.05;

struct IdentConfig {
    /// Regularization per state row; a single entry applies to every row.
    std::vector<double> gammas{1e-6};
    RegressionMode mode = RegressionMode::representer;
    RescalePolicy rescale = RescalePolicy::automatic;
};

struct IdentResult {
    Matrix A_hat;
    std::optional<Matrix> B_hat;
    std::vector<double> gammas;
    double sigma = 1.0;
    RegressionMode mode = RegressionMode::representer;
    std::vector<double> condition_estimates;
};

/// Largest successive norm ratio |x(k+1)| / |x(k)| over the observed states,
/// skipping zero denominators.
double compute_sigma(const Trajectory& traj);

/// Same ratio over an arbitrary point sequence (one point per row).
double compute_sigma(const PointSet& points);

/// y(k) = x(k) / sigma^(k-1) for every stored index k, inputs included, so
/// that y obeys y(k+1) = (A/sigma) y(k) + (B/sigma) v(k) with v scaled alike.
Trajectory rescale_trajectory(const Trajectory& traj, double sigma);

/// Regression samples z(k) -> x(k+1), k = 0..N-1, where z = (x, u) is the
/// extended state. Built once per trajectory and shared by the row fits.
struct RegressionData {
    PointSet regressors;   // z(0..N-1)
    PointSet successors;   // z(1..N); empty when u(N) is unknown
    Matrix targets;        // x(1..N)
    double sigma = 1.0;
    Eigen::Index state_dim = 0;
    Eigen::Index input_dim = 0;

    Eigen::Index pair_count() const { return regressors.rows(); }
    bool has_successors() const { return successors.rows() == regressors.rows(); }
};

RegressionData prepare_regression(const Trajectory& traj, RescalePolicy rescale);

struct RowFit {
    /// Linear estimator row: x_i(k+1) ~ weights . z(k)
    Vector weights;
    double condition_estimate = 0.0;
};

/// Fits state row `row` on the sample pairs listed in `pairs` (all pairs when
/// empty). Weights are in the coordinates of `data` (rescaled if sigma != 1).
RowFit fit_row(const RegressionData& data,
               Eigen::Index row,
               double gamma,
               RegressionMode mode,
               std::span<const Eigen::Index> pairs = {});

/// Identification of A from an autonomous trajectory.
IdentResult estimate_A(const Trajectory& traj, const IdentConfig& cfg);

/// Identification of (A, B) from a trajectory with inputs.
IdentResult estimate_AB(const Trajectory& traj, const IdentConfig& cfg);

/// Shared back end of estimate_A / estimate_AB on prepared data.
IdentResult estimate_from(const RegressionData& data, const std::vector<double>& gammas, RegressionMode mode);

/// x^(k+1) = A_hat x^(k), noiseless.
Trajectory predict(const Matrix& A_hat, const Vector& x0, std::size_t steps);

}  // namespace ksid
