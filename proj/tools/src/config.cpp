#include "ksid/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace ksid::cli {
namespace {

void require_object(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (!keys.count(key)) throw ConfigError(path + "." + key, "unknown field");
    }
}

const Json& field(const Json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) throw ConfigError(path + "." + key, "missing required field");
    return j.at(key);
}

std::string read_string(const Json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

std::uint64_t read_u64(const Json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        throw ConfigError(path, "expected a nonnegative integer");
    }
    return j.get<std::uint64_t>();
}

int read_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    const auto v = j.get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ConfigError(path, "integer out of range");
    }
    return static_cast<int>(v);
}

Vector read_vector(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a nonempty array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = read_number(j[i], path + "[" + std::to_string(i) + "]");
    }
    return v;
}

RegressionMode parse_mode(const std::string& s, const std::string& path) {
    if (s == "representer") return RegressionMode::representer;
    if (s == "paper") return RegressionMode::paper_literal;
    throw ConfigError(path, "expected \"representer\" or \"paper\", got \"" + s + "\"");
}

RescalePolicy parse_rescale(const std::string& s, const std::string& path) {
    if (s == "auto") return RescalePolicy::automatic;
    if (s == "never") return RescalePolicy::never;
    if (s == "always") return RescalePolicy::always;
    throw ConfigError(path, "expected \"auto\", \"never\" or \"always\", got \"" + s + "\"");
}

Task parse_task(const std::string& s, const std::string& path) {
    for (Task t : {Task::identify, Task::entropy, Task::stabilize, Task::bound, Task::compare}) {
        if (s == to_string(t)) return t;
    }
    throw ConfigError(path, "unknown task \"" + s + "\"");
}

const char* signal_name(InputSignal::Kind k) {
    switch (k) {
        case InputSignal::Kind::zero: return "zero";
        case InputSignal::Kind::sin_plus_cos: return "sin_plus_cos";
        case InputSignal::Kind::constant: return "constant";
    }
    return "?";
}

}  // namespace

Matrix InputSignal::generate(Eigen::Index rows, Eigen::Index m) const {
    Matrix u(rows, m);
    for (Eigen::Index k = 0; k < rows; ++k) {
        const double t = static_cast<double>(k);
        double v = 0.0;
        switch (kind) {
            case Kind::zero: v = 0.0; break;
            case Kind::sin_plus_cos: v = std::sin(t) + std::cos(t); break;
            case Kind::constant: v = value; break;
        }
        u.row(k).setConstant(v);
    }
    return u;
}

CvConfig CvOptions::to_core() const {
    CvConfig c;
    c.grid = power_of_two_grid(grid_lo, grid_hi);
    c.holdout_fraction = holdout_fraction;
    c.split = random_split ? CvSplit::random(split_seed) : CvSplit::tail();
    return c;
}

const char* to_string(Task t) {
    switch (t) {
        case Task::identify: return "identify";
        case Task::entropy: return "entropy";
        case Task::stabilize: return "stabilize";
        case Task::bound: return "bound";
        case Task::compare: return "compare";
    }
    return "?";
}

bool ExperimentConfig::has_task(Task t) const {
    for (Task x : tasks)
        if (x == t) return true;
    return false;
}

Json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double read_number(const Json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ConfigError(path, "expected a number");
}

Json matrix_json(const Matrix& M) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        Json r = Json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(number(M(i, j)));
        rows.push_back(std::move(r));
    }
    return rows;
}

Json vector_json(const Vector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
    return a;
}

Matrix read_matrix(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a nonempty array of rows");
    std::size_t cols = 0;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string rp = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].empty()) throw ConfigError(rp, "expected a nonempty array of numbers");
        if (i == 0) cols = j[i].size();
        if (j[i].size() != cols) throw ConfigError(rp, "rows have different lengths");
    }
    Matrix M(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < j.size(); ++i) {
        for (std::size_t c = 0; c < cols; ++c) {
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                read_number(j[i][c], path + "[" + std::to_string(i) + "][" + std::to_string(c) + "]");
        }
    }
    return M;
}

ExperimentConfig parse_config(const Json& doc) {
    require_object(doc, "$",
                   {"name", "system", "x0", "N", "input_signal", "noise", "perturbation", "ident", "cv", "lqr",
                    "compare", "bound", "tasks"});
    ExperimentConfig cfg;
    if (doc.contains("name")) cfg.name = read_string(doc["name"], "$.name");

    const Json& sys = field(doc, "$", "system");
    require_object(sys, "$.system", {"A", "B"});
    cfg.system.A = read_matrix(field(sys, "$.system", "A"), "$.system.A");
    if (cfg.system.A.rows() != cfg.system.A.cols()) throw ConfigError("$.system.A", "matrix must be square");
    if (sys.contains("B")) {
        cfg.system.B = read_matrix(sys["B"], "$.system.B");
        if (cfg.system.B->rows() != cfg.system.A.rows()) {
            throw ConfigError("$.system.B", "row count must equal the state dimension");
        }
    }

    cfg.x0 = read_vector(field(doc, "$", "x0"), "$.x0");
    if (cfg.x0.size() != cfg.system.A.rows()) throw ConfigError("$.x0", "length must equal the state dimension");

    const Json& N = field(doc, "$", "N");
    cfg.N = read_u64(N, "$.N");
    if (cfg.N < 1) throw ConfigError("$.N", "must be >= 1");

    if (doc.contains("input_signal")) {
        const Json& in = doc["input_signal"];
        require_object(in, "$.input_signal", {"kind", "value"});
        const auto kind = read_string(field(in, "$.input_signal", "kind"), "$.input_signal.kind");
        InputSignal sig;
        if (kind == "zero") {
            sig.kind = InputSignal::Kind::zero;
        } else if (kind == "sin_plus_cos") {
            sig.kind = InputSignal::Kind::sin_plus_cos;
        } else if (kind == "constant") {
            sig.kind = InputSignal::Kind::constant;
            sig.value = read_number(field(in, "$.input_signal", "value"), "$.input_signal.value");
        } else {
            throw ConfigError("$.input_signal.kind", "expected zero, sin_plus_cos or constant");
        }
        if (sig.kind != InputSignal::Kind::constant && in.contains("value")) {
            throw ConfigError("$.input_signal.value", "only valid for kind \"constant\"");
        }
        if (!cfg.system.B) throw ConfigError("$.input_signal", "an input signal needs system.B");
        cfg.input = sig;
    } else if (cfg.system.B) {
        throw ConfigError("$.input_signal", "system.B is given but no input signal");
    }

    if (doc.contains("noise")) {
        const Json& nz = doc["noise"];
        require_object(nz, "$.noise", {"amplitude", "seed"});
        NoiseSpec n;
        n.amplitude = read_number(field(nz, "$.noise", "amplitude"), "$.noise.amplitude");
        if (!(n.amplitude >= 0.0) || !std::isfinite(n.amplitude)) throw ConfigError("$.noise.amplitude", "must be >= 0");
        n.seed = read_u64(field(nz, "$.noise", "seed"), "$.noise.seed");
        cfg.noise = n;
    }

    if (doc.contains("perturbation")) {
        const Json& p = doc["perturbation"];
        require_object(p, "$.perturbation", {"epsilon"});
        const double eps = read_number(field(p, "$.perturbation", "epsilon"), "$.perturbation.epsilon");
        if (!std::isfinite(eps)) throw ConfigError("$.perturbation.epsilon", "must be finite");
        if (cfg.controlled()) throw ConfigError("$.perturbation", "only supported for autonomous systems");
        cfg.perturbation = PerturbationSpec{eps};
    }

    if (doc.contains("ident")) {
        const Json& id = doc["ident"];
        require_object(id, "$.ident", {"mode", "rescale", "gamma"});
        if (id.contains("mode")) cfg.ident.mode = parse_mode(read_string(id["mode"], "$.ident.mode"), "$.ident.mode");
        if (id.contains("rescale")) {
            cfg.ident.rescale = parse_rescale(read_string(id["rescale"], "$.ident.rescale"), "$.ident.rescale");
        }
        if (id.contains("gamma")) {
            const Json& g = id["gamma"];
            if (g.is_string() && g.get<std::string>() == "cv") {
                cfg.ident.cross_validate = true;
            } else if (g.is_number()) {
                cfg.ident.gammas = {read_number(g, "$.ident.gamma")};
            } else if (g.is_array()) {
                const Vector v = read_vector(g, "$.ident.gamma");
                cfg.ident.gammas.assign(v.data(), v.data() + v.size());
                if (cfg.ident.gammas.size() != 1 &&
                    cfg.ident.gammas.size() != static_cast<std::size_t>(cfg.system.A.rows())) {
                    throw ConfigError("$.ident.gamma", "list needs one entry or one per state row");
                }
            } else {
                throw ConfigError("$.ident.gamma", "expected a number, a list of numbers or \"cv\"");
            }
            for (std::size_t i = 0; i < cfg.ident.gammas.size(); ++i) {
                const double v = cfg.ident.gammas[i];
                if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("$.ident.gamma", "values must be finite and >= 0");
            }
        }
    }

    if (doc.contains("cv")) {
        const Json& cv = doc["cv"];
        require_object(cv, "$.cv", {"grid_lo", "grid_hi", "holdout_fraction", "split", "split_seed"});
        if (cv.contains("grid_lo")) cfg.cv.grid_lo = read_int(cv["grid_lo"], "$.cv.grid_lo");
        if (cv.contains("grid_hi")) cfg.cv.grid_hi = read_int(cv["grid_hi"], "$.cv.grid_hi");
        if (cfg.cv.grid_lo > cfg.cv.grid_hi) throw ConfigError("$.cv.grid_hi", "must be >= grid_lo");
        if (cfg.cv.grid_lo < -1000 || cfg.cv.grid_hi > 1000) throw ConfigError("$.cv", "grid exponents must lie in [-1000, 1000]");
        if (cv.contains("holdout_fraction")) {
            cfg.cv.holdout_fraction = read_number(cv["holdout_fraction"], "$.cv.holdout_fraction");
            if (!(cfg.cv.holdout_fraction > 0.0 && cfg.cv.holdout_fraction < 1.0)) {
                throw ConfigError("$.cv.holdout_fraction", "must lie in (0, 1)");
            }
        }
        if (cv.contains("split")) {
            const auto s = read_string(cv["split"], "$.cv.split");
            if (s == "random") {
                cfg.cv.random_split = true;
            } else if (s != "tail") {
                throw ConfigError("$.cv.split", "expected \"tail\" or \"random\"");
            }
        }
        if (cv.contains("split_seed")) cfg.cv.split_seed = read_u64(cv["split_seed"], "$.cv.split_seed");
    }

    if (doc.contains("lqr")) {
        const Json& l = doc["lqr"];
        require_object(l, "$.lqr", {"Q", "R"});
        LqrOptions o;
        if (l.contains("Q")) o.Q = read_matrix(l["Q"], "$.lqr.Q");
        if (l.contains("R")) o.R = read_matrix(l["R"], "$.lqr.R");
        cfg.lqr = o;
    }

    if (doc.contains("compare")) {
        const Json& c = doc["compare"];
        require_object(c, "$.compare", {"horizon", "tail_start"});
        if (c.contains("horizon")) cfg.compare.horizon = read_u64(c["horizon"], "$.compare.horizon");
        if (c.contains("tail_start")) {
            cfg.compare.tail_start = static_cast<Eigen::Index>(read_u64(c["tail_start"], "$.compare.tail_start"));
        }
        if (cfg.compare.tail_start < 1 || static_cast<std::size_t>(cfg.compare.tail_start) > cfg.compare.horizon) {
            throw ConfigError("$.compare.tail_start", "must lie in 1..horizon");
        }
    }

    if (doc.contains("bound")) {
        const Json& b = doc["bound"];
        require_object(b, "$.bound", {"delta", "gamma"});
        if (b.contains("delta")) {
            cfg.bound.delta = read_number(b["delta"], "$.bound.delta");
            if (!(cfg.bound.delta > 0.0 && cfg.bound.delta < 1.0)) throw ConfigError("$.bound.delta", "must lie in (0, 1)");
        }
        if (b.contains("gamma")) {
            cfg.bound.gamma = read_number(b["gamma"], "$.bound.gamma");
            if (!(*cfg.bound.gamma > 0.0) || !std::isfinite(*cfg.bound.gamma)) {
                throw ConfigError("$.bound.gamma", "must be finite and > 0");
            }
        }
    }

    if (doc.contains("tasks")) {
        const Json& t = doc["tasks"];
        if (!t.is_array()) throw ConfigError("$.tasks", "expected an array of task names");
        cfg.tasks.clear();
        for (std::size_t i = 0; i < t.size(); ++i) {
            const std::string p = "$.tasks[" + std::to_string(i) + "]";
            const Task task = parse_task(read_string(t[i], p), p);
            if (!cfg.has_task(task)) cfg.tasks.push_back(task);
        }
        if (!cfg.has_task(Task::identify)) cfg.tasks.insert(cfg.tasks.begin(), Task::identify);
    }
    if (cfg.has_task(Task::stabilize) && !cfg.system.B) {
        throw ConfigError("$.tasks", "stabilize needs a controlled system (system.B)");
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("$", "cannot open config file " + path.string());
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("$", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

Json to_json(const ExperimentConfig& cfg) {
    Json j;
    if (!cfg.name.empty()) j["name"] = cfg.name;
    j["system"]["A"] = matrix_json(cfg.system.A);
    if (cfg.system.B) j["system"]["B"] = matrix_json(*cfg.system.B);
    j["x0"] = vector_json(cfg.x0);
    j["N"] = cfg.N;
    if (cfg.input) {
        j["input_signal"]["kind"] = signal_name(cfg.input->kind);
        if (cfg.input->kind == InputSignal::Kind::constant) j["input_signal"]["value"] = number(cfg.input->value);
    }
    if (cfg.noise) {
        j["noise"]["amplitude"] = number(cfg.noise->amplitude);
        j["noise"]["seed"] = cfg.noise->seed;
    }
    if (cfg.perturbation) j["perturbation"]["epsilon"] = number(cfg.perturbation->epsilon);
    j["ident"]["mode"] = cfg.ident.mode == RegressionMode::paper_literal ? "paper" : "representer";
    j["ident"]["rescale"] = to_string(cfg.ident.rescale);
    if (cfg.ident.cross_validate) {
        j["ident"]["gamma"] = "cv";
    } else {
        Json g = Json::array();
        for (double v : cfg.ident.gammas) g.push_back(number(v));
        j["ident"]["gamma"] = g;
    }
    j["cv"]["grid_lo"] = cfg.cv.grid_lo;
    j["cv"]["grid_hi"] = cfg.cv.grid_hi;
    j["cv"]["holdout_fraction"] = cfg.cv.holdout_fraction;
    j["cv"]["split"] = cfg.cv.random_split ? "random" : "tail";
    j["cv"]["split_seed"] = cfg.cv.split_seed;
    if (cfg.lqr) {
        j["lqr"] = Json::object();
        if (cfg.lqr->Q) j["lqr"]["Q"] = matrix_json(*cfg.lqr->Q);
        if (cfg.lqr->R) j["lqr"]["R"] = matrix_json(*cfg.lqr->R);
    }
    j["compare"]["horizon"] = cfg.compare.horizon;
    j["compare"]["tail_start"] = cfg.compare.tail_start;
    j["bound"]["delta"] = cfg.bound.delta;
    if (cfg.bound.gamma) j["bound"]["gamma"] = *cfg.bound.gamma;
    Json tasks = Json::array();
    for (Task t : cfg.tasks) tasks.push_back(to_string(t));
    j["tasks"] = tasks;
    return j;
}

}  // namespace ksid::cli
