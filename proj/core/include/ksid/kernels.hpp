#pragma once

#include "ksid/types.hpp"

#include <string>

namespace ksid {

enum class KernelKind { linear, polynomial, gaussian };

/// One of the three Mercer kernels
///   linear      K(x, y) = <x, y>
///   polynomial  K(x, y) = (1 + <x, y>)^degree
///   gaussian    K(x, y) = exp(-|x - y|^2 / width^2)
struct KernelSpec {
    KernelKind kind = KernelKind::linear;
    int degree = 1;
    double width = 1.0;

    static KernelSpec linear() { return {}; }
    static KernelSpec polynomial(int degree);
    static KernelSpec gaussian(double width);

    void validate() const;
    std::string name() const;
};

double kernel_eval(const KernelSpec& spec,
                   const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& y);

/// Entry (i, j) = K(rows[i], cols[j]); points are the rows of each set.
Matrix gram(const KernelSpec& spec, const PointSet& rows, const PointSet& cols);

enum class RegressionMode {
    /// Expansion over x(1..N), fitted at x(0..N-1): the non-symmetric matrix
    /// of the original coefficient system.
    paper_literal,
    /// Expansion over the fitted points themselves (symmetric PSD system).
    representer,
};

const char* to_string(RegressionMode mode);

/// Regularized least squares in dual form: (N*gamma*I + K) c = targets with
/// K(k, j) = kernel(evaluation_points[k], expansion_points[j]).
struct RidgeProblem {
    PointSet expansion_points;
    PointSet evaluation_points;
    Vector targets;
    double gamma = 0.0;
    Eigen::Index sample_count = 0;
};

struct RidgeSolution {
    Vector coefficients;
    PointSet expansion_points;
    KernelSpec kernel;
    double gamma = 0.0;
    double condition_estimate = 0.0;

    /// f(x) = sum_j c_j K(expansion_points[j], x)
    double evaluate(const Eigen::Ref<const Vector>& x) const;
};

/// Solves with N*gamma*I + K above this 1-norm condition estimate are refused.
inline constexpr double kMaxConditionEstimate = 1e14;

/// In representer mode the expansion set is taken to be the evaluation set
/// and `problem.expansion_points` is ignored.
RidgeSolution ridge_solve(const RidgeProblem& problem, const KernelSpec& kernel, RegressionMode mode);

}  // namespace ksid
