#include "ksid/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace ksid {
namespace {

std::optional<double> fit_decay(const Matrix& errors) {
    const auto K = errors.rows() - 1;
    Eigen::Index first = kDecayFitStart;
    if (K - first + 1 < 2) first = 1;
    const auto count = K - first + 1;
    if (count < 2) return std::nullopt;
    double sk = 0.0, sl = 0.0, skk = 0.0, skl = 0.0;
    for (Eigen::Index k = first; k <= K; ++k) {
        const double kk = static_cast<double>(k);
        const double l = std::log(std::max(errors.row(k).norm(), 1e-300));
        sk += kk;
        sl += l;
        skk += kk * kk;
        skl += kk * l;
    }
    const double c = static_cast<double>(count);
    const double slope = (c * skl - sk * sl) / (c * skk - sk * sk);
    return std::exp(slope);
}

}  // namespace

ErrorReport compare_trajectories(const Trajectory& truth, const Trajectory& predicted, Eigen::Index tail_start) {
    if (truth.states.rows() != predicted.states.rows() || truth.states.cols() != predicted.states.cols()) {
        throw DimensionError("compare_trajectories: trajectories differ in length or dimension");
    }
    if (truth.states.rows() < 2) throw DimensionError("compare_trajectories: need at least two states");
    const auto K = truth.states.rows() - 1;
    if (tail_start < 1 || tail_start > K) throw std::out_of_range("compare_trajectories: tail start outside 1..K");

    ErrorReport r;
    r.errors = truth.states - predicted.states;
    r.tail_start = tail_start;
    const Matrix sq = r.errors.cwiseAbs2();
    r.full_energy_per_component = sq.bottomRows(K).colwise().sum().cwiseSqrt().transpose();
    r.tail_energy_per_component = sq.bottomRows(K - tail_start + 1).colwise().sum().cwiseSqrt().transpose();
    r.full_energy = std::sqrt(sq.bottomRows(K).sum());
    r.tail_energy = std::sqrt(sq.bottomRows(K - tail_start + 1).sum());
    r.decay_rate = fit_decay(r.errors);
    return r;
}

MatrixDistance matrix_distance(const Matrix& A, const Matrix& A_hat) {
    if (A.rows() != A_hat.rows() || A.cols() != A_hat.cols()) throw DimensionError("matrix_distance: shape mismatch");
    MatrixDistance d;
    const Matrix diff = A - A_hat;
    d.max_abs = diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0;
    d.frobenius = diff.norm();
    if (diff.rows() == diff.cols()) d.error_spectrum = eigenvalues(diff);
    return d;
}

}  // namespace ksid
