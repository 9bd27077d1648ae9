#include "ksid/kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ksid {

KernelSpec KernelSpec::polynomial(int degree) {
    KernelSpec k{KernelKind::polynomial, degree, 1.0};
    k.validate();
    return k;
}

KernelSpec KernelSpec::gaussian(double width) {
    KernelSpec k{KernelKind::gaussian, 1, width};
    k.validate();
    return k;
}

void KernelSpec::validate() const {
    if (kind == KernelKind::polynomial && degree < 1) {
        throw std::invalid_argument("polynomial kernel degree must be >= 1");
    }
    if (kind == KernelKind::gaussian && !(width > 0.0 && std::isfinite(width))) {
        throw std::invalid_argument("gaussian kernel width must be positive");
    }
}

std::string KernelSpec::name() const {
    std::ostringstream os;
    switch (kind) {
        case KernelKind::linear: os << "linear"; break;
        case KernelKind::polynomial: os << "polynomial(" << degree << ")"; break;
        case KernelKind::gaussian: os << "gaussian(" << width << ")"; break;
    }
    return os.str();
}

const char* to_string(RegressionMode mode) {
    return mode == RegressionMode::paper_literal ? "paper" : "representer";
}

double kernel_eval(const KernelSpec& spec,
                   const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& y) {
    if (x.size() != y.size()) throw DimensionError("kernel arguments differ in dimension");
    switch (spec.kind) {
        case KernelKind::linear:
            return x.dot(y);
        case KernelKind::polynomial:
            return std::pow(1.0 + x.dot(y), spec.degree);
        case KernelKind::gaussian:
            return std::exp(-(x - y).squaredNorm() / (spec.width * spec.width));
    }
    return 0.0;
}

Matrix gram(const KernelSpec& spec, const PointSet& rows, const PointSet& cols) {
    spec.validate();
    if (rows.cols() != cols.cols()) throw DimensionError("gram: point sets differ in dimension");
    if (spec.kind == KernelKind::linear) return rows * cols.transpose();
    Matrix K(rows.rows(), cols.rows());
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        for (Eigen::Index j = 0; j < cols.rows(); ++j) {
            K(i, j) = kernel_eval(spec, rows.row(i).transpose(), cols.row(j).transpose());
        }
    }
    return K;
}

double RidgeSolution::evaluate(const Eigen::Ref<const Vector>& x) const {
    double f = 0.0;
    for (Eigen::Index j = 0; j < coefficients.size(); ++j) {
        f += coefficients[j] * kernel_eval(kernel, expansion_points.row(j).transpose(), x);
    }
    return f;
}

RidgeSolution ridge_solve(const RidgeProblem& problem, const KernelSpec& kernel, RegressionMode mode) {
    kernel.validate();
    const PointSet& eval = problem.evaluation_points;
    const PointSet& expansion = mode == RegressionMode::representer ? eval : problem.expansion_points;
    const auto m = eval.rows();
    if (m < 1) throw DimensionError("ridge_solve: no evaluation points");
    if (problem.targets.size() != m) throw DimensionError("ridge_solve: targets length != #evaluation points");
    if (expansion.rows() != m) {
        throw DimensionError("ridge_solve: expansion and evaluation sets must have equal size");
    }
    if (expansion.cols() != eval.cols()) throw DimensionError("ridge_solve: point dimensions differ");
    if (!(problem.gamma >= 0.0) || !std::isfinite(problem.gamma)) {
        throw std::invalid_argument("ridge_solve: gamma must be finite and nonnegative");
    }
    if (problem.sample_count < 1) throw std::invalid_argument("ridge_solve: sample count must be >= 1");

    Matrix system = gram(kernel, eval, expansion);
    system.diagonal().array() += static_cast<double>(problem.sample_count) * problem.gamma;
    if (!system.allFinite()) throw NumericError("ridge_solve: system matrix is not finite");

    const Eigen::PartialPivLU<Matrix> lu(system);
    const double rcond = lu.rcond();
    const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(cond <= kMaxConditionEstimate)) {
        std::ostringstream os;
        os << "ridge_solve: system is numerically singular (condition estimate " << cond << " > "
           << kMaxConditionEstimate << ")";
        throw IllConditionedError(os.str(), cond);
    }

    RidgeSolution sol;
    const double norm1 = system.cwiseAbs().colwise().sum().maxCoeff();
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (min_pivot < 1e-14 * norm1) {
        sol.coefficients = system.colPivHouseholderQr().solve(problem.targets);
    } else {
        sol.coefficients = lu.solve(problem.targets);
    }
    sol.expansion_points = expansion;
    sol.kernel = kernel;
    sol.gamma = problem.gamma;
    sol.condition_estimate = cond;
    return sol;
}

}  // namespace ksid
