#pragma once

#include "ksid/dynamics.hpp"
#include "ksid/kernels.hpp"
#include "ksid/modelsel.hpp"
#include "ksid/sysid.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ksid::cli {

using Json = nlohmann::ordered_json;

/// Schema violation; `path()` is a JSON-pointer-like location such as `$.ident.gamma`.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& path, const std::string& reason)
        : std::invalid_argument(path + ": " + reason), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct InputSignal {
    enum class Kind { zero, sin_plus_cos, constant };
    Kind kind = Kind::zero;
    double value = 0.0;  // constant only

    /// u(k) for k = 0..rows-1, the same value in each of the m input channels.
    Matrix generate(Eigen::Index rows, Eigen::Index m) const;
};

struct IdentOptions {
    RegressionMode mode = RegressionMode::representer;
    RescalePolicy rescale = RescalePolicy::automatic;
    bool cross_validate = false;
    std::vector<double> gammas{1e-6};
};

struct CvOptions {
    int grid_lo = -40;
    int grid_hi = 50;
    double holdout_fraction = 0.3;
    bool random_split = false;
    std::uint64_t split_seed = 0;

    CvConfig to_core() const;
};

struct LqrOptions {
    std::optional<Matrix> Q;  // identity when absent
    std::optional<Matrix> R;
};

struct CompareOptions {
    std::size_t horizon = 300;
    Eigen::Index tail_start = 100;
};

struct BoundOptions {
    double delta = 0.05;
    std::optional<double> gamma;  // first identified gamma when absent
};

enum class Task { identify, entropy, stabilize, bound, compare };
const char* to_string(Task t);

struct ExperimentConfig {
    std::string name;
    LinearSystem system;
    Vector x0;
    std::size_t N = 0;
    std::optional<InputSignal> input;
    std::optional<NoiseSpec> noise;
    std::optional<PerturbationSpec> perturbation;
    IdentOptions ident;
    CvOptions cv;
    std::optional<LqrOptions> lqr;
    CompareOptions compare;
    BoundOptions bound;
    std::vector<Task> tasks{Task::identify};

    bool controlled() const { return input.has_value(); }
    bool has_task(Task t) const;
};

ExperimentConfig parse_config(const Json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
Json to_json(const ExperimentConfig& cfg);

/// JSON encoding that survives non-finite values ("inf", "-inf", "nan").
Json number(double v);
double read_number(const Json& j, const std::string& path);
Json matrix_json(const Matrix& M);
Matrix read_matrix(const Json& j, const std::string& path);
Json vector_json(const Vector& v);

}  // namespace ksid::cli
