#include "ksid/sysid.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace ksid {
namespace {

PointSet select_rows(const PointSet& points, std::span<const Eigen::Index> rows) {
    PointSet out(static_cast<Eigen::Index>(rows.size()), points.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = points.row(rows[r]);
    return out;
}

PointSet extended_points(const Trajectory& traj) {
    if (!traj.inputs) return traj.states;
    const auto rows = traj.inputs->rows();
    PointSet z(rows, traj.state_dim() + traj.input_dim());
    z << traj.states.topRows(rows), *traj.inputs;
    return z;
}

}  // namespace

const char* to_string(RescalePolicy policy) {
    switch (policy) {
        case RescalePolicy::automatic: return "auto";
        case RescalePolicy::never: return "never";
        case RescalePolicy::always: return "always";
    }
    return "auto";
}

double compute_sigma(const PointSet& points) {
    if (points.rows() < 2) throw std::invalid_argument("compute_sigma: need at least two states");
    double sigma = 0.0;
    bool any = false;
    for (Eigen::Index k = 0; k + 1 < points.rows(); ++k) {
        const double den = points.row(k).stableNorm();
        if (den == 0.0) continue;
        sigma = std::max(sigma, points.row(k + 1).stableNorm() / den);
        any = true;
    }
    if (!any) throw NumericError("compute_sigma: all states are zero, sigma is undefined");
    return sigma;
}

double compute_sigma(const Trajectory& traj) {
    traj.validate();
    return compute_sigma(traj.states);
}

Trajectory rescale_trajectory(const Trajectory& traj, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("rescale_trajectory: sigma must be positive");
    }
    Trajectory out = traj;
    auto scale = [sigma](Matrix& m) {
        for (Eigen::Index k = 0; k < m.rows(); ++k) {
            m.row(k) /= std::pow(sigma, static_cast<double>(k) - 1.0);
        }
    };
    scale(out.states);
    if (out.inputs) scale(*out.inputs);
    return out;
}

RegressionData prepare_regression(const Trajectory& traj, RescalePolicy rescale) {
    traj.validate();
    RegressionData data;
    data.state_dim = traj.state_dim();
    data.input_dim = traj.input_dim();
    const auto N = traj.sample_count();

    if (rescale != RescalePolicy::never) {
        double sigma = 1.0;
        try {
            sigma = compute_sigma(extended_points(traj));
        } catch (const NumericError&) {
            if (rescale == RescalePolicy::always) throw;
        }
        if (rescale == RescalePolicy::always) {
            if (sigma == 0.0) throw NumericError("rescaling requested but sigma is zero");
            data.sigma = sigma;
        } else if (sigma > kAutoRescaleThreshold) {
            data.sigma = sigma;
        }
    }

    const Trajectory scaled = data.sigma == 1.0 ? traj : rescale_trajectory(traj, data.sigma);
    const PointSet z = extended_points(scaled);
    data.regressors = z.topRows(N);
    if (z.rows() == N + 1) data.successors = z.bottomRows(N);
    data.targets = scaled.states.bottomRows(N);
    return data;
}

RowFit fit_row(const RegressionData& data,
               Eigen::Index row,
               double gamma,
               RegressionMode mode,
               std::span<const Eigen::Index> pairs) {
    if (row < 0 || row >= data.state_dim) throw std::out_of_range("fit_row: state row out of range");
    std::vector<Eigen::Index> all;
    if (pairs.empty()) {
        all.resize(static_cast<std::size_t>(data.pair_count()));
        std::iota(all.begin(), all.end(), Eigen::Index{0});
        pairs = all;
    }
    if (mode == RegressionMode::paper_literal && !data.has_successors()) {
        throw std::invalid_argument(
            "paper_literal mode expands over z(1..N) and needs the terminal input u(N)");
    }

    RidgeProblem problem;
    problem.evaluation_points = select_rows(data.regressors, pairs);
    if (mode == RegressionMode::paper_literal) problem.expansion_points = select_rows(data.successors, pairs);
    problem.targets.resize(static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t r = 0; r < pairs.size(); ++r) {
        problem.targets[static_cast<Eigen::Index>(r)] = data.targets(pairs[r], row);
    }
    problem.gamma = gamma;
    problem.sample_count = static_cast<Eigen::Index>(pairs.size());

    const RidgeSolution sol = ridge_solve(problem, KernelSpec::linear(), mode);
    // a_il = sum_j c_j z_l(j) over the expansion points.
    return {sol.expansion_points.transpose() * sol.coefficients, sol.condition_estimate};
}

IdentResult estimate_from(const RegressionData& data, const std::vector<double>& gammas, RegressionMode mode) {
    const auto n = data.state_dim;
    const auto d = n + data.input_dim;
    if (gammas.size() != 1 && gammas.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("gamma list must have one entry or one per state row");
    }
    for (double g : gammas) {
        if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("gamma must be finite and >= 0");
    }
    if (data.pair_count() < d + 1) {
        throw std::invalid_argument("too few samples: need N >= " + std::to_string(d + 1) + ", have N = " +
                                    std::to_string(data.pair_count()));
    }

    IdentResult result;
    result.sigma = data.sigma;
    result.mode = mode;
    Matrix weights(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double gamma = gammas.size() == 1 ? gammas.front() : gammas[static_cast<std::size_t>(i)];
        RowFit fit;
        try {
            fit = fit_row(data, i, gamma, mode);
        } catch (const IllConditionedError& e) {
            std::string msg = "row " + std::to_string(i + 1) + ": " + e.what();
            if (data.sigma == 1.0) msg += "; the series may be growing, consider enabling rescaling";
            throw IllConditionedError(msg, e.estimate());
        }
        weights.row(i) = fit.weights.transpose();
        result.gammas.push_back(gamma);
        result.condition_estimates.push_back(fit.condition_estimate);
    }
    result.A_hat = data.sigma * weights.leftCols(n);
    if (data.input_dim > 0) result.B_hat = data.sigma * weights.rightCols(data.input_dim);
    return result;
}

IdentResult estimate_A(const Trajectory& traj, const IdentConfig& cfg) {
    if (traj.inputs) throw std::invalid_argument("estimate_A expects an autonomous trajectory; use estimate_AB");
    return estimate_from(prepare_regression(traj, cfg.rescale), cfg.gammas, cfg.mode);
}

IdentResult estimate_AB(const Trajectory& traj, const IdentConfig& cfg) {
    if (!traj.inputs) throw std::invalid_argument("estimate_AB needs a trajectory with inputs");
    return estimate_from(prepare_regression(traj, cfg.rescale), cfg.gammas, cfg.mode);
}

Trajectory predict(const Matrix& A_hat, const Vector& x0, std::size_t steps) {
    return simulate_autonomous(LinearSystem{A_hat, std::nullopt}, x0, steps);
}

}  // namespace ksid
