#pragma once

#include "ksid/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

namespace ksid {

/// x(k+1) = A x(k) [+ B u(k)].
struct LinearSystem {
    Matrix A;
    std::optional<Matrix> B;

    Eigen::Index state_dim() const { return A.rows(); }
    Eigen::Index input_dim() const { return B ? B->cols() : 0; }
    void validate() const;
};

/// Measurement noise: iid uniform on [-amplitude, amplitude] per component.
struct NoiseSpec {
    double amplitude = 0.0;
    std::uint64_t seed = 0;
};

/// Componentwise quadratic term epsilon * x_i(k)^2 added to each step.
struct PerturbationSpec {
    double epsilon = 0.0;
};

/// Observed states x(0..N) (one per row) and optional inputs.
///
/// `inputs` holds u(0..N-1), or u(0..N) when the terminal input is known as
/// well; the `paper_literal` control regression needs the latter.
struct Trajectory {
    Matrix states;
    std::optional<Matrix> inputs;
    std::optional<NoiseSpec> noise;

    Eigen::Index sample_count() const { return states.rows() - 1; }
    Eigen::Index state_dim() const { return states.cols(); }
    Eigen::Index input_dim() const { return inputs ? inputs->cols() : 0; }
    bool has_terminal_input() const {
        return inputs && inputs->rows() == states.rows();
    }
    void validate() const;
};

/// Name of the generator behind NoiseSpec::seed; written into reports.
inline constexpr const char* kNoiseGeneratorName = "mt19937_64";

/// Iid uniform noise source. The mapping from the 64-bit engine output to
/// [-M, M) is done here rather than through std::uniform_real_distribution,
/// whose algorithm differs between standard libraries.
class UniformNoise {
public:
    UniformNoise(double amplitude, std::uint64_t seed);

    double operator()();

private:
    double amplitude_;
    std::mt19937_64 engine_;
};

std::vector<Vector> sample_noise(const NoiseSpec& spec, Eigen::Index n, std::size_t count);

Trajectory simulate_autonomous(const LinearSystem& sys,
                               const Vector& x0,
                               std::size_t steps,
                               const std::optional<NoiseSpec>& noise = std::nullopt,
                               const std::optional<PerturbationSpec>& perturb = std::nullopt);

/// Applies u(0..steps-1). `inputs` may carry one extra row u(steps), which is
/// stored but not applied.
Trajectory simulate_controlled(const LinearSystem& sys,
                               const Vector& x0,
                               const Matrix& inputs,
                               std::size_t steps,
                               const std::optional<NoiseSpec>& noise = std::nullopt);

inline Trajectory simulate_controlled(const LinearSystem& sys,
                                      const Vector& x0,
                                      const Matrix& inputs,
                                      const std::optional<NoiseSpec>& noise = std::nullopt) {
    return simulate_controlled(sys, x0, inputs, static_cast<std::size_t>(inputs.rows()), noise);
}

// CSV: header `k,x1,...,xn[,u1,...,um]`, one row per time index. Missing
// terminal inputs are written as empty fields.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace ksid
