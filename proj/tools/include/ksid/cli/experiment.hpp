#pragma once

#include "ksid/bounds.hpp"
#include "ksid/cli/config.hpp"
#include "ksid/lqr.hpp"
#include "ksid/metrics.hpp"
#include "ksid/spectral.hpp"

#include <optional>
#include <string>

namespace ksid::cli {

struct EntropyValues {
    double max_one_sum = 0.0;   // sum of max(1, |lambda|)
    double bowen = 0.0;         // sum of log|lambda| over |lambda| > 1
    double unstable_sum = 0.0;  // sum of |lambda| over |lambda| >= 1
};

EntropyValues entropy_values(const Matrix& A);

struct StabilizeResult {
    Matrix Q, R;
    std::optional<DareResult> plant_dare;  // design on the true (A, B)
    std::string plant_dare_error;
    DareResult model_dare;                 // design on the estimates
    ClosedLoop model_loop;                 // A_hat - B_hat F_hat
    ClosedLoop plant_loop;                 // A - B F_hat
};

struct ExperimentReport {
    ExperimentConfig config;
    Trajectory trajectory;
    IdentResult ident;
    std::optional<CvReport> cv;
    Spectrum spectrum_A;
    Spectrum spectrum_A_hat;
    MatrixDistance distance;
    std::optional<MatrixDistance> distance_B;
    std::optional<EntropyValues> entropy_A;
    std::optional<EntropyValues> entropy_A_hat;
    std::optional<StabilizeResult> stabilize;
    std::optional<ErrorReport> compare;
    std::optional<BoundReport> bound;
    double elapsed_ms = 0.0;
};

/// Simulates the configured system (observed states, with noise if any).
Trajectory simulate(const ExperimentConfig& cfg);

/// simulate -> identify -> configured analyses.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

Json spectrum_json(const Spectrum& s);
Json report_json(const ExperimentReport& r);

}  // namespace ksid::cli
