#include "ksid/dynamics.hpp"
#include "ksid/kernels.hpp"

#include "doctest.h"
#include "oracles.hpp"
#include "systems.hpp"

#include <random>

using namespace ksid;
using ksid::testing::mat;
using ksid::testing::vec;

TEST_CASE("kernel evaluation") {
    CHECK(kernel_eval(KernelSpec::linear(), vec({1, 2}), vec({1, 2})) == 5.0);
    CHECK(kernel_eval(KernelSpec::polynomial(2), vec({1}), vec({1})) == 4.0);
    CHECK(kernel_eval(KernelSpec::gaussian(1.0), vec({3, -1}), vec({3, -1})) == 1.0);
    CHECK(kernel_eval(KernelSpec::gaussian(2.0), vec({0}), vec({2})) == doctest::Approx(std::exp(-1.0)));
    CHECK(kernel_eval(KernelSpec::polynomial(3), vec({1, 0}), vec({2, 5})) == 27.0);

    CHECK_THROWS_AS(kernel_eval(KernelSpec::linear(), vec({1}), vec({1, 2})), DimensionError);
    CHECK_THROWS_AS(KernelSpec::polynomial(0), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec::gaussian(0.0), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec::gaussian(-1.0), std::invalid_argument);

    std::mt19937_64 rng(5);
    for (const auto& k : {KernelSpec::linear(), KernelSpec::polynomial(3), KernelSpec::gaussian(0.7)}) {
        const Vector x = testing::gaussian_matrix(rng, 3, 1);
        const Vector y = testing::gaussian_matrix(rng, 3, 1);
        CHECK(kernel_eval(k, x, y) == kernel_eval(k, y, x));
    }
}

TEST_CASE("gram matrices") {
    CHECK(gram(KernelSpec::linear(), Matrix::Identity(2, 2), Matrix::Identity(2, 2)) == Matrix::Identity(2, 2));

    const auto t = simulate_autonomous({mat({{0.5}}), std::nullopt}, vec({-0.5}), 1);
    const Matrix G = gram(KernelSpec::linear(), t.states.topRows(1), t.states.bottomRows(1));
    REQUIRE(G.rows() == 1);
    CHECK(G(0, 0) == 0.125);

    CHECK_THROWS_AS(gram(KernelSpec::linear(), Matrix::Ones(2, 2), Matrix::Ones(2, 3)), DimensionError);

    SUBCASE("Mercer kernels give symmetric PSD matrices") {
        std::mt19937_64 rng(11);
        for (const auto& k : {KernelSpec::linear(), KernelSpec::polynomial(2), KernelSpec::polynomial(4),
                              KernelSpec::gaussian(1.0), KernelSpec::gaussian(0.3)}) {
            const Matrix pts = testing::gaussian_matrix(rng, 25, 3);
            const Matrix K = gram(k, pts, pts);
            CHECK(K == K.transpose());
            const Eigen::SelfAdjointEigenSolver<Matrix> es(K);
            const double top = es.eigenvalues().cwiseAbs().maxCoeff();
            CHECK(es.eigenvalues().minCoeff() >= -1e-10 * top);
            if (k.kind == KernelKind::gaussian) CHECK(K.diagonal().isOnes(0.0));
        }
    }
}

TEST_CASE("ridge solve") {
    const Vector y = vec({1.0, -2.0, 0.5});
    RidgeProblem prob{Matrix::Identity(3, 3), Matrix::Identity(3, 3), y, 1.0 / 3.0, 3};

    SUBCASE("(I + I) c = y") {
        const auto sol = ridge_solve(prob, KernelSpec::linear(), RegressionMode::representer);
        CHECK((sol.coefficients - y / 2).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("gamma = 0, K = I") {
        prob.gamma = 0.0;
        const auto sol = ridge_solve(prob, KernelSpec::linear(), RegressionMode::paper_literal);
        CHECK((sol.coefficients - y).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(sol.condition_estimate == doctest::Approx(1.0));
    }
    SUBCASE("evaluate reproduces the expansion") {
        const auto sol = ridge_solve(prob, KernelSpec::linear(), RegressionMode::representer);
        CHECK(sol.evaluate(vec({1, 1, 1})) == doctest::Approx(y.sum() / 2));
    }
    SUBCASE("numerically singular systems are refused") {
        RidgeProblem sing{Matrix::Ones(3, 1), Matrix::Ones(3, 1), y, 0.0, 3};
        try {
            ridge_solve(sing, KernelSpec::linear(), RegressionMode::representer);
            FAIL("expected ill-conditioning");
        } catch (const IllConditionedError& e) {
            CHECK(e.estimate() > kMaxConditionEstimate);
        }
    }
    SUBCASE("argument errors") {
        RidgeProblem bad = prob;
        bad.targets = vec({1, 2});
        CHECK_THROWS_AS(ridge_solve(bad, KernelSpec::linear(), RegressionMode::representer), DimensionError);
        bad = prob;
        bad.gamma = -1.0;
        CHECK_THROWS_AS(ridge_solve(bad, KernelSpec::linear(), RegressionMode::representer), std::invalid_argument);
        bad = prob;
        bad.expansion_points = Matrix::Identity(2, 3);
        CHECK_THROWS_AS(ridge_solve(bad, KernelSpec::linear(), RegressionMode::paper_literal), DimensionError);
    }
}

TEST_CASE("scalar decay series: dual slope equals the primal ridge slope") {
    const auto t = simulate_autonomous({mat({{0.5}}), std::nullopt}, vec({-0.5}), 100);
    const Matrix X = t.states.topRows(100);
    const Vector y = t.states.bottomRows(100).col(0);
    const double gamma = 1e-6;

    RidgeProblem prob{t.states.bottomRows(100), X, y, gamma, 100};
    const auto sol = ridge_solve(prob, KernelSpec::linear(), RegressionMode::representer);
    const double slope = sol.coefficients.dot(X.col(0));
    const double primal = testing::primal_ridge(X, y, gamma)[0];

    CHECK(std::abs(slope - primal) <= 1e-8 * std::abs(primal));
    CHECK(slope == doctest::Approx(0.49985).epsilon(1e-4));
    CHECK(std::abs(slope - 0.4997) <= 1e-3);

    const auto lit = ridge_solve(prob, KernelSpec::linear(), RegressionMode::paper_literal);
    const double lit_slope = lit.coefficients.dot(t.states.bottomRows(100).col(0));
    CHECK(std::abs(lit_slope - 0.4997) <= 1e-3);
}

namespace {
Matrix system_matrix(const KernelSpec& k, const Matrix& X, double gamma) {
    Matrix M = gram(k, X, X);
    M.diagonal().array() += static_cast<double>(X.rows()) * gamma;
    return M;
}
}  // namespace

TEST_CASE("dual and primal ridge agree on random full-rank data") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> dim(1, 6), count(10, 200);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = dim(rng);
        const int N = std::max(count(rng), n + 5);
        const auto [X, y] = testing::random_regression(rng, n, N);
        const double gamma = 1e-6;
        const auto sol = ridge_solve({X, X, y, gamma, N}, KernelSpec::linear(), RegressionMode::representer);
        const Vector a = X.transpose() * sol.coefficients;
        const Vector primal = testing::primal_ridge(X, y, gamma);
        CHECK((a - primal).norm() <= 1e-8 * primal.norm());
    }
}

TEST_CASE("ridge residual is backward stable") {
    std::mt19937_64 rng(7);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + trial % 6;
        const int N = 20 + (trial * 37) % 180;
        const auto [X, y] = testing::random_regression(rng, n, N);
        for (double g : {1e-8, 1e-6, 1e-3, 1.0}) {
            for (const auto& k : {KernelSpec::linear(), KernelSpec::gaussian(1.0), KernelSpec::polynomial(2)}) {
                RidgeSolution sol;
                try {
                    sol = ridge_solve({X, X, y, g, N}, k, RegressionMode::representer);
                } catch (const IllConditionedError&) {
                    continue;
                }
                const Matrix M = system_matrix(k, X, g);
                const double r = (M * sol.coefficients - y).norm();
                CHECK(r <= 64 * N * eps * M.norm() * sol.coefficients.norm());
                if (sol.condition_estimate < 1e6) CHECK(r <= 1e-10 * y.norm());
            }
        }
    }
}

// Residual below 1e-10 |y| for every condition estimate up to 1e10. Rounding
// the exact solution to double already leaves a residual of order
// eps |M| |c|, so this is not attainable for estimates above ~1e6; the case
// documents the gap instead of asserting it.
TEST_CASE("ridge residual relative to the targets up to condition 1e10" * doctest::may_fail()) {
    std::mt19937_64 rng(1);
    int checked = 0, exceeded = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + trial % 6;
        const int N = 20 + (trial * 37) % 180;
        const Matrix X = testing::gaussian_matrix(rng, N, n);
        const Vector y = testing::gaussian_matrix(rng, N, 1);
        for (double g : {1e-8, 1e-6, 1e-4, 1e-2}) {
            for (const auto& k : {KernelSpec::linear(), KernelSpec::gaussian(1.0)}) {
                const auto sol = ridge_solve({X, X, y, g, N}, k, RegressionMode::representer);
                if (!(sol.condition_estimate < 1e10)) continue;
                ++checked;
                const double r = (system_matrix(k, X, g) * sol.coefficients - y).norm();
                if (r > 1e-10 * y.norm()) ++exceeded;
            }
        }
    }
    MESSAGE(exceeded << " of " << checked << " solves exceed 1e-10 |y|");
    CHECK(exceeded == 0);
}

TEST_CASE("coefficient norm decreases with gamma") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 1 + trial % 6;
        const int N = 15 + 7 * trial;
        const auto [X, y] = testing::random_regression(rng, n, N);
        for (const auto& k : {KernelSpec::linear(), KernelSpec::gaussian(1.5), KernelSpec::polynomial(3)}) {
            double previous = std::numeric_limits<double>::infinity();
            for (double g : {1e-4, 1e-3, 1e-2, 1.0, 1e2}) {
                const double nrm = ridge_solve({X, X, y, g, N}, k, RegressionMode::representer).coefficients.norm();
                CHECK(nrm <= previous * (1 + 1e-12));
                previous = nrm;
            }
        }
    }
}
