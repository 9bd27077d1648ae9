#include "ksid/ksid.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace ksid;

namespace {

Matrix gaussian(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> nd;
    Matrix M(r, c);
    for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = nd(rng);
    return M;
}

Trajectory stable_run(Eigen::Index n, std::size_t N) {
    std::mt19937_64 rng(n * 7919 + N);
    Matrix A = gaussian(rng, n, n);
    A *= 0.8 / spectral_radius(A);
    const Vector x0 = gaussian(rng, n, 1).normalized();
    return simulate_autonomous({A, std::nullopt}, x0, N, NoiseSpec{1e-3, 1});
}

void BM_RidgeSolve(benchmark::State& state) {
    const auto N = state.range(0);
    std::mt19937_64 rng(1);
    const Matrix X = gaussian(rng, N, 4);
    const Vector y = gaussian(rng, N, 1);
    for (auto _ : state) {
        auto sol = ridge_solve({X, X, y, 1e-6, N}, KernelSpec::linear(), RegressionMode::representer);
        benchmark::DoNotOptimize(sol.coefficients.data());
    }
    state.SetComplexityN(N);
}
BENCHMARK(BM_RidgeSolve)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oNCubed);

void BM_EstimateA(benchmark::State& state) {
    const auto traj = stable_run(state.range(0), 100);
    IdentConfig cfg;
    cfg.gammas = {1e-6};
    cfg.rescale = RescalePolicy::never;
    for (auto _ : state) benchmark::DoNotOptimize(estimate_A(traj, cfg).A_hat.data());
}
BENCHMARK(BM_EstimateA)->DenseRange(1, 6);

void BM_CrossValidate(benchmark::State& state) {
    const auto traj = stable_run(state.range(0), 100);
    IdentConfig cfg;
    cfg.rescale = RescalePolicy::never;
    for (auto _ : state) benchmark::DoNotOptimize(cross_validate(traj, CvConfig{}, cfg).first.A_hat.data());
}
BENCHMARK(BM_CrossValidate)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SolveDare(benchmark::State& state) {
    const auto n = state.range(0);
    std::mt19937_64 rng(3);
    LqrProblem p{gaussian(rng, n, n) * 0.6, gaussian(rng, n, 1), Matrix::Identity(n, n), Matrix::Identity(1, 1)};
    for (auto _ : state) benchmark::DoNotOptimize(solve_dare(p).P.data());
}
BENCHMARK(BM_SolveDare)->DenseRange(2, 10, 4);

void BM_Eigenvalues(benchmark::State& state) {
    std::mt19937_64 rng(5);
    const Matrix A = gaussian(rng, state.range(0), state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(A).radius);
}
BENCHMARK(BM_Eigenvalues)->RangeMultiplier(4)->Range(4, 64);

}  // namespace

BENCHMARK_MAIN();
