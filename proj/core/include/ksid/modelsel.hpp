#pragma once

#include "ksid/sysid.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ksid {

/// gamma = 2^p for p = lo..hi.
std::vector<double> power_of_two_grid(int lo, int hi);

struct CvSplit {
    enum class Kind { tail, random };
    Kind kind = Kind::tail;
    std::uint64_t seed = 0;

    static CvSplit tail() { return {}; }
    static CvSplit random(std::uint64_t seed) { return {Kind::random, seed}; }
    std::string describe() const;
};

struct CvConfig {
    std::vector<double> grid = power_of_two_grid(-40, 50);
    double holdout_fraction = 0.3;
    CvSplit split;

    void validate() const;
};

struct CvReport {
    std::vector<double> grid;
    std::vector<double> chosen_gamma;
    /// rows = state rows, cols = grid; +inf where the training fit, or the
    /// refit on all pairs of a would-be winner, was refused.
    Matrix validation_mse;
    /// Condition estimate of each training solve, same layout.
    Matrix condition_estimates;
    std::string split;
    std::vector<Eigen::Index> train_pairs;
    std::vector<Eigen::Index> validation_pairs;
};

/// Partition of the sample pairs 0..pair_count-1 into (train, validation).
std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>> split_pairs(Eigen::Index pair_count,
                                                                            const CvConfig& cfg);

/// Hold-out selection of one gamma per state row by one-step-ahead squared
/// error, followed by a refit on all samples. `ident.gammas` is ignored.
std::pair<IdentResult, CvReport> cross_validate(const Trajectory& traj,
                                                const CvConfig& cfg,
                                                const IdentConfig& ident);

}  // namespace ksid
