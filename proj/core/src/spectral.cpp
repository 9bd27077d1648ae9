#include "ksid/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace ksid {

Spectrum eigenvalues(const Matrix& A) {
    if (A.rows() != A.cols()) throw DimensionError("eigenvalues: matrix is not square");
    if (!A.allFinite()) throw NumericError("eigenvalues: matrix has non-finite entries");
    Spectrum s;
    if (A.rows() == 0) return s;

    // Hessenberg reduction + shifted QR on the real Schur form.
    Eigen::EigenSolver<Matrix> solver;
    const auto n = A.rows();
    solver.setMaxIterations(static_cast<Eigen::Index>(100 * n * n));
    solver.compute(A, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("eigenvalues: QR iteration did not converge", static_cast<std::size_t>(100 * n * n));
    }
    const auto& values = solver.eigenvalues();
    s.eigenvalues.assign(values.data(), values.data() + values.size());
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](const auto& a, const auto& b) {
        const double ma = std::abs(a);
        const double mb = std::abs(b);
        if (ma != mb) return ma > mb;
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    s.radius = std::abs(s.eigenvalues.front());
    return s;
}

double spectral_radius(const Matrix& A) { return eigenvalues(A).radius; }

bool is_schur_stable(const Matrix& A, double margin) { return spectral_radius(A) < 1.0 - margin; }

double topological_entropy_paper(const Matrix& A) {
    double h = 0.0;
    for (const auto& l : eigenvalues(A).eigenvalues) h += std::max(1.0, std::abs(l));
    return h;
}

double unstable_modulus_sum(const Matrix& A) {
    double h = 0.0;
    for (const auto& l : eigenvalues(A).eigenvalues) {
        const double m = std::abs(l);
        if (m >= 1.0) h += m;
    }
    return h;
}

double topological_entropy_bowen(const Matrix& A) {
    double h = 0.0;
    for (const auto& l : eigenvalues(A).eigenvalues) {
        const double m = std::abs(l);
        if (m > 1.0) h += std::log(m);
    }
    return h;
}

}  // namespace ksid
