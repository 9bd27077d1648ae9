#include "ksid/modelsel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace ksid {
namespace {

// Unbiased draw from [0, bound) by rejection; std::uniform_int_distribution
// is not specified bit-for-bit across standard libraries.
std::uint64_t bounded(std::mt19937_64& engine, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = 0;
    do {
        x = engine();
    } while (x >= limit);
    return x % bound;
}

}  // namespace

std::vector<double> power_of_two_grid(int lo, int hi) {
    if (lo > hi) throw std::invalid_argument("power_of_two_grid: lo > hi");
    std::vector<double> grid;
    for (int p = lo; p <= hi; ++p) grid.push_back(std::ldexp(1.0, p));
    return grid;
}

std::string CvSplit::describe() const {
    if (kind == Kind::tail) return "tail";
    return "random(" + std::to_string(seed) + ")";
}

void CvConfig::validate() const {
    if (grid.empty()) throw std::invalid_argument("cv grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) {
            throw std::invalid_argument("cv grid values must be finite and >= 0");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("cv grid must be strictly increasing");
    }
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
        throw std::invalid_argument("holdout fraction must lie in (0, 1)");
    }
}

std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>> split_pairs(Eigen::Index pair_count,
                                                                            const CvConfig& cfg) {
    const auto n_val = static_cast<Eigen::Index>(std::llround(cfg.holdout_fraction * static_cast<double>(pair_count)));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(pair_count));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    if (cfg.split.kind == CvSplit::Kind::random) {
        std::mt19937_64 engine(cfg.split.seed);
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[bounded(engine, i)]);
        }
        std::vector<Eigen::Index> val(order.begin(), order.begin() + n_val);
        std::vector<Eigen::Index> train(order.begin() + n_val, order.end());
        std::sort(val.begin(), val.end());
        std::sort(train.begin(), train.end());
        return {train, val};
    }
    std::vector<Eigen::Index> train(order.begin(), order.end() - n_val);
    std::vector<Eigen::Index> val(order.end() - n_val, order.end());
    return {train, val};
}

std::pair<IdentResult, CvReport> cross_validate(const Trajectory& traj,
                                                const CvConfig& cfg,
                                                const IdentConfig& ident) {
    cfg.validate();
    const RegressionData data = prepare_regression(traj, ident.rescale);
    const auto n = data.state_dim;
    const auto d = n + data.input_dim;

    CvReport report;
    report.grid = cfg.grid;
    report.split = cfg.split.describe();
    std::tie(report.train_pairs, report.validation_pairs) = split_pairs(data.pair_count(), cfg);
    const auto n_train = static_cast<Eigen::Index>(report.train_pairs.size());
    const auto n_val = static_cast<Eigen::Index>(report.validation_pairs.size());
    if (n_train < d + 1 || n_val < d + 1) {
        std::ostringstream os;
        os << "degenerate cross-validation split: " << n_train << " training and " << n_val
           << " validation pairs, each part needs at least " << d + 1;
        throw std::invalid_argument(os.str());
    }

    const auto G = static_cast<Eigen::Index>(cfg.grid.size());
    const double inf = std::numeric_limits<double>::infinity();
    report.validation_mse = Matrix::Constant(n, G, inf);
    report.condition_estimates = Matrix::Constant(n, G, inf);

    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index best = -1;
        for (Eigen::Index g = 0; g < G; ++g) {
            RowFit fit;
            try {
                fit = fit_row(data, i, cfg.grid[static_cast<std::size_t>(g)], ident.mode, report.train_pairs);
            } catch (const IllConditionedError& e) {
                report.condition_estimates(i, g) = e.estimate();
                continue;
            }
            report.condition_estimates(i, g) = fit.condition_estimate;
            double sse = 0.0;
            for (Eigen::Index k : report.validation_pairs) {
                const double r = data.targets(k, i) - data.regressors.row(k).dot(fit.weights);
                sse += r * r;
            }
            const double mse = sse / static_cast<double>(n_val);
            // Strict comparison keeps the smallest gamma on ties.
            if (best >= 0 && !(mse < report.validation_mse(i, best))) {
                report.validation_mse(i, g) = mse;
                continue;
            }
            // A candidate must also survive the refit on all pairs; otherwise it scores +inf.
            try {
                fit_row(data, i, cfg.grid[static_cast<std::size_t>(g)], ident.mode);
            } catch (const IllConditionedError&) {
                continue;
            }
            report.validation_mse(i, g) = mse;
            best = g;
        }
        if (best < 0) {
            std::ostringstream os;
            os << "row " << i + 1 << ": every gamma in the grid gives an ill-conditioned fit; condition estimates:";
            for (Eigen::Index g = 0; g < G; ++g) {
                os << ' ' << cfg.grid[static_cast<std::size_t>(g)] << ':' << report.condition_estimates(i, g);
            }
            throw IllConditionedError(os.str(), report.condition_estimates.row(i).minCoeff());
        }
        report.chosen_gamma.push_back(cfg.grid[static_cast<std::size_t>(best)]);
    }

    IdentResult result = estimate_from(data, report.chosen_gamma, ident.mode);
    return {std::move(result), std::move(report)};
}

}  // namespace ksid
