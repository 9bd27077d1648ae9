#include "ksid/metrics.hpp"

#include "doctest.h"
#include "oracles.hpp"
#include "systems.hpp"

#include <random>

using namespace ksid;
using ksid::testing::mat;
using ksid::testing::vec;

namespace {
Trajectory scalar(const std::vector<double>& v) {
    Trajectory t;
    t.states = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
    return t;
}
}  // namespace

TEST_CASE("trajectory comparison") {
    SUBCASE("identical") {
        const auto t = scalar({1, 2, 3, 4});
        const auto r = compare_trajectories(t, t, 2);
        CHECK(r.full_energy == 0.0);
        CHECK(r.tail_energy == 0.0);
    }
    SUBCASE("geometric error") {
        std::vector<double> truth(11, 0.0), pred(11, 0.0);
        for (int k = 1; k <= 10; ++k) truth[k] = std::ldexp(1.0, -k);
        const auto r = compare_trajectories(scalar(truth), scalar(pred), 5);
        CHECK(r.full_energy == doctest::Approx(0.5773499938874985).epsilon(1e-14));
        CHECK(r.tail_energy == doctest::Approx(0.03607998672248275).epsilon(1e-14));
        REQUIRE(r.decay_rate);
        CHECK(*r.decay_rate == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(r.full_energy_per_component[0] == r.full_energy);
    }
    SUBCASE("window monotonicity") {
        std::mt19937_64 rng(1);
        const Matrix a = testing::gaussian_matrix(rng, 41, 3), b = testing::gaussian_matrix(rng, 41, 3);
        double previous = std::numeric_limits<double>::infinity();
        for (Eigen::Index k0 = 1; k0 <= 40; ++k0) {
            const auto r = compare_trajectories({a, {}, {}}, {b, {}, {}}, k0);
            CHECK(r.tail_energy <= previous);
            CHECK(r.tail_energy <= r.full_energy);
            previous = r.tail_energy;
        }
    }
    SUBCASE("underflowed errors stay finite in the fit") {
        std::vector<double> truth(30, 0.0);
        truth[5] = 1.0;
        const auto r = compare_trajectories(scalar(truth), scalar(std::vector<double>(30, 0.0)), 1);
        REQUIRE(r.decay_rate);
        CHECK(std::isfinite(*r.decay_rate));
    }
    CHECK_THROWS_AS(compare_trajectories(scalar({1, 2}), scalar({1, 2, 3}), 1), DimensionError);
    CHECK_THROWS_AS(compare_trajectories(scalar({1, 2, 3}), scalar({1, 2, 3}), 3), std::out_of_range);
}

TEST_CASE("matrix distance") {
    const auto zero = matrix_distance(testing::bidiagonal4(), testing::bidiagonal4());
    CHECK(zero.max_abs == 0.0);
    CHECK(zero.frobenius == 0.0);
    CHECK(zero.error_spectrum.radius == 0.0);

    const Matrix reference = mat({{-0.5, 1, 0, 0}, {0, 0.6, 1, 0}, {0, 0, 0.7, 0.9994}, {0, 0, 0, -0.7995}});
    CHECK(matrix_distance(testing::bidiagonal4(), reference).max_abs == doctest::Approx(6e-4));

    const auto d = matrix_distance(mat({{1, 0}, {0, 2}}), mat({{1, 0}, {0, 2.5}}));
    CHECK(d.max_abs == 0.5);
    CHECK(d.frobenius == 0.5);
    CHECK(d.error_spectrum.eigenvalues[0] == std::complex<double>(-0.5, 0));
    CHECK(d.error_spectrum.eigenvalues[1] == std::complex<double>(0, 0));

    std::mt19937_64 rng(4);
    for (int i = 0; i < 10; ++i) {
        const Matrix A = testing::gaussian_matrix(rng, 3, 3), B = testing::gaussian_matrix(rng, 3, 3),
                     M = testing::gaussian_matrix(rng, 3, 3);
        CHECK(matrix_distance(A, B).frobenius <=
              matrix_distance(A, M).frobenius + matrix_distance(M, B).frobenius + 1e-12);
    }
    CHECK_THROWS_AS(matrix_distance(Matrix::Zero(2, 2), Matrix::Zero(2, 3)), DimensionError);
}
