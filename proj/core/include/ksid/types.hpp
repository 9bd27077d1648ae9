#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ksid {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Point sets are stored one point per row.
using PointSet = Eigen::MatrixXd;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a simulated state leaves the representable range.
class OverflowError : public NumericError {
public:
    OverflowError(const std::string& what, std::size_t step)
        : NumericError(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// A linear solve whose condition estimate exceeds the accepted limit.
class IllConditionedError : public NumericError {
public:
    IllConditionedError(const std::string& what, double estimate)
        : NumericError(what), estimate_(estimate) {}
    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string& what, std::size_t iterations)
        : NumericError(what), iterations_(iterations) {}
    std::size_t iterations() const noexcept { return iterations_; }

private:
    std::size_t iterations_;
};

}  // namespace ksid
