#include "ksid/dynamics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace ksid {
namespace {

constexpr double kOverflowLimit = 1e300;

void check_state(const Vector& x, std::size_t k) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || std::abs(x[i]) > kOverflowLimit) {
            throw OverflowError("state overflow at step " + std::to_string(k) + " (component " +
                                    std::to_string(i + 1) + ")",
                                k);
        }
    }
}

void add_noise(Trajectory& traj, const std::optional<NoiseSpec>& noise) {
    if (!noise) return;
    traj.noise = noise;
    const auto etas = sample_noise(*noise, traj.state_dim(), static_cast<std::size_t>(traj.sample_count()));
    // x(0) is known exactly; noise enters from k = 1 on.
    for (std::size_t k = 0; k < etas.size(); ++k) {
        traj.states.row(static_cast<Eigen::Index>(k) + 1) += etas[k].transpose();
    }
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& field, std::size_t line) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    while (first != last && *first == ' ') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw std::invalid_argument("trajectory csv line " + std::to_string(line) +
                                    ": cannot parse number '" + field + "'");
    }
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

void LinearSystem::validate() const {
    if (A.rows() == 0 || A.rows() != A.cols()) {
        throw DimensionError("system matrix A must be square and non-empty");
    }
    if (B) {
        if (B->rows() != A.rows()) throw DimensionError("B must have as many rows as A");
        if (B->cols() < 1) throw DimensionError("B must have at least one column");
    }
}

void Trajectory::validate() const {
    if (states.rows() < 2) throw DimensionError("trajectory needs at least two states (N >= 1)");
    if (states.cols() < 1) throw DimensionError("trajectory states must have dimension >= 1");
    if (inputs) {
        const auto N = sample_count();
        if (inputs->rows() != N && inputs->rows() != N + 1) {
            throw DimensionError("trajectory inputs must have N or N+1 rows");
        }
        if (inputs->cols() < 1) throw DimensionError("trajectory inputs must have dimension >= 1");
    }
}

UniformNoise::UniformNoise(double amplitude, std::uint64_t seed)
    : amplitude_(amplitude), engine_(seed) {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
        throw std::invalid_argument("noise amplitude must be finite and nonnegative");
    }
}

double UniformNoise::operator()() {
    // 53 high bits -> [0, 1), then affine map onto [-M, M).
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return amplitude_ * (2.0 * unit - 1.0);
}

std::vector<Vector> sample_noise(const NoiseSpec& spec, Eigen::Index n, std::size_t count) {
    if (n < 1) throw DimensionError("noise dimension must be >= 1");
    UniformNoise draw(spec.amplitude, spec.seed);
    std::vector<Vector> out(count, Vector::Zero(n));
    for (auto& v : out) {
        for (Eigen::Index i = 0; i < n; ++i) v[i] = draw();
    }
    return out;
}

Trajectory simulate_autonomous(const LinearSystem& sys,
                               const Vector& x0,
                               std::size_t steps,
                               const std::optional<NoiseSpec>& noise,
                               const std::optional<PerturbationSpec>& perturb) {
    sys.validate();
    if (x0.size() != sys.state_dim()) throw DimensionError("x0 dimension does not match A");
    if (steps < 1) throw std::invalid_argument("simulation needs N >= 1");
    if (perturb && !std::isfinite(perturb->epsilon)) {
        throw std::invalid_argument("perturbation epsilon must be finite");
    }

    Trajectory traj;
    traj.states.resize(static_cast<Eigen::Index>(steps) + 1, sys.state_dim());
    traj.states.row(0) = x0.transpose();
    check_state(x0, 0);
    Vector x = x0;
    for (std::size_t k = 0; k < steps; ++k) {
        Vector next = sys.A * x;
        if (perturb && perturb->epsilon != 0.0) next += perturb->epsilon * x.cwiseAbs2();
        check_state(next, k + 1);
        traj.states.row(static_cast<Eigen::Index>(k) + 1) = next.transpose();
        x = std::move(next);
    }
    add_noise(traj, noise);
    return traj;
}

Trajectory simulate_controlled(const LinearSystem& sys,
                               const Vector& x0,
                               const Matrix& inputs,
                               std::size_t steps,
                               const std::optional<NoiseSpec>& noise) {
    sys.validate();
    if (!sys.B) throw DimensionError("controlled simulation requires an input matrix B");
    if (x0.size() != sys.state_dim()) throw DimensionError("x0 dimension does not match A");
    if (steps < 1) throw std::invalid_argument("simulation needs N >= 1");
    const auto N = static_cast<Eigen::Index>(steps);
    if (inputs.rows() != N && inputs.rows() != N + 1) {
        throw DimensionError("input sequence must have N or N+1 entries");
    }
    if (inputs.cols() != sys.input_dim()) {
        throw DimensionError("input dimension does not match the columns of B");
    }

    Trajectory traj;
    traj.states.resize(N + 1, sys.state_dim());
    traj.states.row(0) = x0.transpose();
    traj.inputs = inputs;
    check_state(x0, 0);
    Vector x = x0;
    for (Eigen::Index k = 0; k < N; ++k) {
        Vector next = sys.A * x + (*sys.B) * inputs.row(k).transpose();
        check_state(next, static_cast<std::size_t>(k) + 1);
        traj.states.row(k + 1) = next.transpose();
        x = std::move(next);
    }
    add_noise(traj, noise);
    return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    traj.validate();
    const auto n = traj.state_dim();
    const auto m = traj.input_dim();
    out << "k";
    for (Eigen::Index i = 0; i < n; ++i) out << ",x" << i + 1;
    for (Eigen::Index j = 0; j < m; ++j) out << ",u" << j + 1;
    out << '\n';
    for (Eigen::Index k = 0; k < traj.states.rows(); ++k) {
        out << k;
        for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(traj.states(k, i));
        for (Eigen::Index j = 0; j < m; ++j) {
            out << ',';
            if (k < traj.inputs->rows()) out << format_double((*traj.inputs)(k, j));
        }
        out << '\n';
    }
}

Trajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("trajectory csv: missing header");
    const auto header = split_csv(line);
    if (header.empty() || header[0] != "k") {
        throw std::invalid_argument("trajectory csv: header must start with 'k'");
    }
    Eigen::Index n = 0;
    Eigen::Index m = 0;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto& h = header[c];
        const bool is_x = h.size() > 1 && h[0] == 'x';
        const bool is_u = h.size() > 1 && h[0] == 'u';
        if (is_x && m == 0 && h == "x" + std::to_string(n + 1)) {
            ++n;
        } else if (is_u && h == "u" + std::to_string(m + 1)) {
            ++m;
        } else {
            throw std::invalid_argument("trajectory csv: unexpected column '" + h + "'");
        }
    }
    if (n == 0) throw std::invalid_argument("trajectory csv: no state columns");

    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split_csv(line));
    }
    const auto count = static_cast<Eigen::Index>(rows.size());
    Trajectory traj;
    traj.states.resize(count, n);
    Matrix inputs(count, m);
    Eigen::Index input_rows = count;
    for (Eigen::Index k = 0; k < count; ++k) {
        const auto& r = rows[static_cast<std::size_t>(k)];
        const auto lineno = static_cast<std::size_t>(k) + 2;
        if (r.size() != static_cast<std::size_t>(1 + n + m)) {
            throw std::invalid_argument("trajectory csv line " + std::to_string(lineno) +
                                        ": wrong number of fields");
        }
        if (parse_double(r[0], lineno) != static_cast<double>(k)) {
            throw std::invalid_argument("trajectory csv line " + std::to_string(lineno) +
                                        ": index column out of sequence");
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            traj.states(k, i) = parse_double(r[static_cast<std::size_t>(1 + i)], lineno);
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            const auto& cell = r[static_cast<std::size_t>(1 + n + j)];
            if (cell.empty()) {
                if (k != count - 1) {
                    throw std::invalid_argument("trajectory csv line " + std::to_string(lineno) +
                                                ": only the terminal input may be empty");
                }
                input_rows = count - 1;
                continue;
            }
            inputs(k, j) = parse_double(cell, lineno);
        }
    }
    if (m > 0) traj.inputs = inputs.topRows(input_rows);
    traj.validate();
    return traj;
}

}  // namespace ksid
