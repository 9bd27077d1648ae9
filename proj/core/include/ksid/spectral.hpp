#pragma once

#include "ksid/types.hpp"

#include <complex>
#include <vector>

namespace ksid {

/// Eigenvalues with algebraic multiplicity, ordered by descending modulus,
/// then descending real part, then positive imaginary part first.
struct Spectrum {
    std::vector<std::complex<double>> eigenvalues;
    double radius = 0.0;
};

Spectrum eigenvalues(const Matrix& A);

double spectral_radius(const Matrix& A);

/// radius < 1 - margin
bool is_schur_stable(const Matrix& A, double margin = 0.0);

/// Sum over the spectrum of max(1, |lambda|), with multiplicity.
double topological_entropy_paper(const Matrix& A);

/// Sum of |lambda| over eigenvalues with |lambda| >= 1. Differs from the
/// max(1, .) form by one per eigenvalue inside the unit circle.
double unstable_modulus_sum(const Matrix& A);

/// Bowen's value: sum of log|lambda| over eigenvalues outside the unit circle.
double topological_entropy_bowen(const Matrix& A);

}  // namespace ksid
