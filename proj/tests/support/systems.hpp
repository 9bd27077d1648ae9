#pragma once

// Small literal helpers and the benchmark systems used across the tests.

#include "ksid/dynamics.hpp"

#include <cmath>
#include <initializer_list>

namespace ksid::testing {

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (double v : r) M(i, j++) = v;
        ++i;
    }
    return M;
}

inline Vector vec(std::initializer_list<double> v) {
    Vector x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double e : v) x[i++] = e;
    return x;
}

inline Matrix bidiagonal4() {
    return mat({{-0.5, 1, 0, 0}, {0, 0.6, 1, 0}, {0, 0, 0.7, 1}, {0, 0, 0, -0.8}});
}

inline Matrix unstable4a() {
    return mat({{2.25, -1.25, 1.25, -49.55},
                {3.75, -2.75, 13.15, -20.65},
                {0, 0, 10.4, -32.3},
                {0, 0, 0, -21.9}});
}

inline Matrix unstable4b() {
    return mat({{-0.85, 0.45, -0.45, -77.85},
                {-1.35, 0.95, 14.35, -11.65},
                {0, 0, 15.3, -55.3},
                {0, 0, 0, -40.0}});
}

inline LinearSystem stable_ctrl3() {
    return {mat({{-0.9, 1, 0}, {0, -0.1, 1}, {0, 0, 0.8}}), mat({{-2.5}, {-3.5}, {4.5}})};
}

inline LinearSystem unstable_ctrl3() {
    return {mat({{-20, 1, 0}, {0, 1, 1}, {0, 0, 20}}), mat({{1}, {2}, {3}})};
}

/// u(k) = sin k + cos k for k = 0..count-1.
inline Matrix sin_plus_cos(Eigen::Index count) {
    Matrix u(count, 1);
    for (Eigen::Index k = 0; k < count; ++k) u(k, 0) = std::sin(double(k)) + std::cos(double(k));
    return u;
}

}  // namespace ksid::testing
