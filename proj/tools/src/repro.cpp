#include "ksid/cli/repro.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace ksid::cli {
namespace {

using cplx = std::complex<double>;

// Bundled configurations. gamma = 2^-30 is written out as 9.313225746154785e-10.
constexpr const char* kScalarDecay = R"({
  "name": "scalar-decay", "system": {"A": [[0.5]]}, "x0": [-0.5], "N": 100,
  "ident": {"rescale": "never", "gamma": [1e-6]},
  "compare": {"horizon": 300, "tail_start": 100}, "tasks": ["identify", "compare"]})";

constexpr const char* kScalarDecayCv = R"({
  "name": "scalar-decay-cv", "system": {"A": [[0.5]]}, "x0": [-0.5], "N": 100,
  "ident": {"rescale": "never", "gamma": "cv"},
  "compare": {"horizon": 300, "tail_start": 100}, "tasks": ["identify", "compare"]})";

constexpr const char* kBidiagonal = R"({
  "name": "bidiagonal-4", "system": {"A": [[-0.5, 1, 0, 0], [0, 0.6, 1, 0], [0, 0, 0.7, 1], [0, 0, 0, -0.8]]},
  "x0": [-0.9, 0.1, 15, 0.2], "N": 100, "ident": {"rescale": "never", "gamma": "cv"},
  "compare": {"horizon": 300, "tail_start": 100}, "tasks": ["identify", "compare"]})";

constexpr const char* kScalarGrowth = R"({
  "name": "scalar-growth", "system": {"A": [[11.46]]}, "x0": [-0.5], "N": 100,
  "ident": {"rescale": "always", "gamma": [1e-6]}})";

constexpr const char* kScalarGrowthCv = R"({
  "name": "scalar-growth-cv", "system": {"A": [[11.46]]}, "x0": [-0.5], "N": 100,
  "ident": {"rescale": "always", "gamma": "cv"}})";

constexpr const char* kDiagonal4 = R"({
  "name": "diagonal-4", "system": {"A": [[20, 0, 0, 0], [0, -10, 0, 0], [0, 0, 15, 0], [0, 0, 0, -25]]},
  "x0": [-0.9, 0.1, 15, 0.2], "N": 100, "ident": {"rescale": "always", "gamma": [9.313225746154785e-10]}})";

constexpr const char* kGap2a = R"({
  "name": "gap-2a", "system": {"A": [[20, 0], [0, -0.1]]}, "x0": [-1.9, 1], "N": 100,
  "ident": {"rescale": "always", "gamma": [9.313225746154785e-10]}})";

constexpr const char* kGap2b = R"({
  "name": "gap-2b", "system": {"A": [[-0.5, 0], [0, 25]]}, "x0": [-1.9, 1], "N": 100,
  "ident": {"rescale": "always", "gamma": [9.313225746154785e-10]}})";

constexpr const char* kUpper4a = R"({
  "name": "upper-4a",
  "system": {"A": [[2.25, -1.25, 1.25, -49.55], [3.75, -2.75, 13.15, -20.65], [0, 0, 10.4, -32.3], [0, 0, 0, -21.9]]},
  "x0": [-0.9, 15, 1.5, 2.5], "N": 100, "ident": {"rescale": "always", "gamma": [9.313225746154785e-10]},
  "tasks": ["identify", "entropy"]})";

constexpr const char* kUpper4b = R"({
  "name": "upper-4b",
  "system": {"A": [[-0.85, 0.45, -0.45, -77.85], [-1.35, 0.95, 14.35, -11.65], [0, 0, 15.3, -55.3], [0, 0, 0, -40]]},
  "x0": [-0.9, 15, 1.5, 2.5], "N": 100, "ident": {"rescale": "always", "gamma": [9.313225746154785e-10]},
  "tasks": ["identify", "entropy"]})";

constexpr const char* kCtrlScalar = R"({
  "name": "ctrl-scalar", "system": {"A": [[-0.9]], "B": [[3.5]]}, "x0": [0], "N": 100,
  "input_signal": {"kind": "sin_plus_cos"}, "ident": {"rescale": "never", "gamma": "cv"},
  "tasks": ["identify", "stabilize"]})";

constexpr const char* kCtrlStable3 = R"({
  "name": "ctrl-stable-3", "system": {"A": [[-0.9, 1, 0], [0, -0.1, 1], [0, 0, 0.8]], "B": [[-2.5], [-3.5], [4.5]]},
  "x0": [0, 0, 0], "N": 100, "input_signal": {"kind": "sin_plus_cos"},
  "ident": {"rescale": "never", "gamma": "cv"}, "tasks": ["identify", "stabilize"]})";

constexpr const char* kCtrlUnstable3 = R"({
  "name": "ctrl-unstable-3", "system": {"A": [[-20, 1, 0], [0, 1, 1], [0, 0, 20]], "B": [[1], [2], [3]]},
  "x0": [0, 0, 0], "N": 100, "input_signal": {"kind": "sin_plus_cos"},
  "ident": {"rescale": "always", "gamma": [1e-6]}, "tasks": ["identify", "stabilize"]})";

struct Example {
    const char* id;
    const char* title;
    std::vector<const char*> configs;
};

const std::vector<Example>& catalogue() {
    static const std::vector<Example> c = {
        {"1", "scalar decay, alpha = 0.5", {kScalarDecay, kScalarDecayCv}},
        {"3", "bidiagonal 4x4, stable", {kBidiagonal}},
        {"4", "scalar growth, alpha = 11.46", {kScalarGrowth, kScalarGrowthCv}},
        {"4b", "diagonal 4x4, unstable", {kDiagonal4}},
        {"5", "2x2 with a large eigenvalue gap", {kGap2a, kGap2b}},
        {"6", "upper-triangular 4x4, spectral radius 21.9", {kUpper4a}},
        {"7", "upper-triangular 4x4, spectral radius 40", {kUpper4b}},
        {"8", "entropy of the two upper-triangular systems", {kUpper4a, kUpper4b}},
        {"9", "scalar control system", {kCtrlScalar}},
        {"10", "stable 3x3 control system", {kCtrlStable3}},
        {"11", "unstable 3x3 control system", {kCtrlUnstable3}},
        {"12", "LQR on the scalar control system", {kCtrlScalar}},
        {"13", "LQR on the stable 3x3 control system", {kCtrlStable3}},
        {"14", "LQR on the unstable 3x3 control system", {kCtrlUnstable3}},
    };
    return c;
}

const Example& find(const std::string& id) {
    for (const auto& e : catalogue())
        if (id == e.id) return e;
    throw std::invalid_argument("unknown example id '" + id + "'");
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

std::string fmt(cplx z) {
    if (z.imag() == 0.0) return fmt(z.real());
    std::ostringstream os;
    os << std::setprecision(6) << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

class Checker {
public:
    explicit Checker(const ReproOptions& opts) : override_(opts.tolerance) {}

    void near(const std::string& name, double value, double target, double tol) {
        const double t = override_.value_or(tol);
        push(name, std::abs(value - target) <= t,
             "got " + fmt(value) + ", want " + fmt(target) + " +/- " + fmt(t));
    }
    void at_most(const std::string& name, double value, double limit) {
        const double t = override_.value_or(limit);
        push(name, value <= t, "got " + fmt(value) + ", limit " + fmt(t));
    }
    void interval(const std::string& name, double value, double lo, double hi) {
        push(name, value >= lo && value <= hi, "got " + fmt(value) + ", want [" + fmt(lo) + ", " + fmt(hi) + "]");
    }
    void truth(const std::string& name, bool ok, const std::string& detail) { push(name, ok, detail); }

    /// Every target has a distinct computed eigenvalue within tol (greedy nearest match).
    void spectrum(const std::string& name, const Spectrum& s, std::vector<cplx> targets, double tol,
                  bool informational = false) {
        const double t = override_.value_or(tol);
        std::vector<cplx> pool = s.eigenvalues;
        double worst = 0.0;
        std::ostringstream got;
        for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) got << (i ? ", " : "") << fmt(s.eigenvalues[i]);
        for (const auto& target : targets) {
            if (pool.empty()) {
                worst = INFINITY;
                break;
            }
            auto best = std::min_element(pool.begin(), pool.end(), [&](cplx a, cplx b) {
                return std::abs(a - target) < std::abs(b - target);
            });
            worst = std::max(worst, std::abs(*best - target));
            pool.erase(best);
        }
        push(name, worst <= t, "{" + got.str() + "}, worst deviation " + fmt(worst) + ", tol " + fmt(t),
             informational);
    }

    void note(const std::string& name, bool ok, const std::string& detail) { push(name, ok, detail, true); }

    std::vector<Check> take() { return std::move(checks_); }

private:
    void push(const std::string& name, bool ok, const std::string& detail, bool informational = false) {
        checks_.push_back({name, ok, detail, informational});
    }
    std::optional<double> override_;
    std::vector<Check> checks_;
};

double max_abs(const Matrix& M) { return M.cwiseAbs().maxCoeff(); }

void check_example(const std::string& id, const std::vector<ExperimentReport>& runs, Checker& c) {
    if (id == "1") {
        c.near("fixed gamma=1e-6: alpha_hat", runs[0].ident.A_hat(0, 0), 0.4997, 1e-3);
        c.near("cross-validated: alpha_hat", runs[1].ident.A_hat(0, 0), 0.5, 1e-3);
        c.at_most("cross-validated: tail error energy k=100..300", runs[1].compare->tail_energy, 1e-20);
    } else if (id == "3") {
        c.at_most("max |A_hat - A|", runs[0].distance.max_abs, 1e-2);
        c.at_most("tail error energy k=100..300", runs[0].compare->tail_energy, 1e-8);
    } else if (id == "4") {
        for (std::size_t i = 0; i < 2; ++i) {
            const std::string tag = i == 0 ? "fixed gamma=1e-6" : "cross-validated";
            c.near(tag + ": sigma", runs[i].ident.sigma, 11.46, 1e-12);
            c.interval(tag + ": alpha_hat", runs[i].ident.A_hat(0, 0), 11.40, 11.47);
        }
    } else if (id == "4b") {
        c.at_most("max |A_hat - A|", runs[0].distance.max_abs, 1e-3);
        c.truth("eigenvalues of A - A_hat inside the unit disk", runs[0].distance.error_spectrum.radius < 1.0,
                "radius " + fmt(runs[0].distance.error_spectrum.radius));
    } else if (id == "5") {
        c.at_most("diag(20, -0.1): max |A_hat - A|", runs[0].distance.max_abs, 1e-3);
        c.at_most("diag(-0.5, 25): max |A_hat - A|", runs[1].distance.max_abs, 1e-3);
    } else if (id == "6") {
        c.spectrum("spec(A_hat)", runs[0].spectrum_A_hat, {-21.9, 10.4, -1.5, 1.0}, 1e-2);
    } else if (id == "7") {
        c.spectrum("spec(A_hat)", runs[0].spectrum_A_hat, {-40.0, 15.3, 0.5, -0.4}, 1e-2);
    } else if (id == "8") {
        const double want_A[] = {34.80, 55.30};
        const double want_hat[] = {34.7999, 55.3008};
        const char* tag[] = {"radius 21.9", "radius 40"};
        for (std::size_t i = 0; i < 2; ++i) {
            const auto& r = runs[i];
            const std::string t = tag[i];
            c.near(t + ": h_top(A) = sum max(1,|l|)", r.entropy_A->max_one_sum, want_A[i], 1e-6);
            c.near(t + ": h_top(A_hat)", r.entropy_A_hat->max_one_sum, want_hat[i], 1e-2);
            double oracle = 0.0;
            for (const auto& l : r.spectrum_A.eigenvalues)
                if (std::abs(l) > 1.0) oracle += std::log(std::abs(l));
            c.near(t + ": h_bowen(A) vs direct log-sum", r.entropy_A->bowen, oracle, 1e-10);
            c.note(t + ": sum of |l| over |l| >= 1, A / A_hat",
                   std::abs(r.entropy_A->unstable_sum - want_A[i]) <= 1e-6 &&
                       std::abs(r.entropy_A_hat->unstable_sum - want_hat[i]) <= 1e-2,
                   fmt(r.entropy_A->unstable_sum) + " / " + fmt(r.entropy_A_hat->unstable_sum));
        }
    } else if (id == "9") {
        c.near("a_hat", runs[0].ident.A_hat(0, 0), -0.9, 1e-4);
        c.near("b_hat", (*runs[0].ident.B_hat)(0, 0), 3.5, 1e-4);
    } else if (id == "10") {
        c.at_most("max |A_hat - A|", runs[0].distance.max_abs, 1e-3);
        c.at_most("max |B_hat - B|", runs[0].distance_B->max_abs, 1e-3);
    } else if (id == "11") {
        c.at_most("max |A_hat - A|", runs[0].distance.max_abs, 0.5);
        c.at_most("max |B_hat - B|", runs[0].distance_B->max_abs, 0.5);
        c.spectrum("spec(A_hat) near {-20, 1, 20}", runs[0].spectrum_A_hat, {-20.0, 1.0, 20.0}, 0.3);
    } else if (id == "12") {
        const auto& s = *runs[0].stabilize;
        c.truth("DARE on (a, b) converged", s.plant_dare.has_value(), s.plant_dare_error);
        if (s.plant_dare) c.near("a - b F", s.plant_dare->closed_loop(0, 0), -0.0643, 5e-4);
        c.near("a_hat - b_hat F_hat", s.model_dare.closed_loop(0, 0), -0.0643, 1e-3);
    } else if (id == "13") {
        const auto& s = *runs[0].stabilize;
        c.spectrum("spec(A_hat - B_hat F_hat)", s.model_loop.spectrum, {-0.6172, 0.4049, -0.0018}, 1e-3);
        c.truth("A - B F_hat stabilized", s.plant_loop.stable, "radius " + fmt(s.plant_loop.spectrum.radius));
    } else if (id == "14") {
        const auto& s = *runs[0].stabilize;
        c.truth("A - B F_hat NOT stabilized", !s.plant_loop.stable, "radius " + fmt(s.plant_loop.spectrum.radius));
        c.spectrum("spec(A - B F_hat)", s.plant_loop.spectrum, {{-0.1234, 2.0777}, {-0.1234, -2.0777}, 0.5279}, 1e-2);

        // The same design from reference estimates rounded to four decimals.
        Matrix Ap(3, 3), Bp(3, 1);
        Ap << -19.9945, 1.0009, -0.0137, 0.0013, 0.9995, 0.9919, 0.0155, -0.0171, 19.7835;
        Bp << 0.9898, 1.9898, 2.9333;
        const auto& cfg = runs[0].config;
        const auto d = solve_dare({Ap, Bp, s.Q, s.R});
        const auto loop = closed_loop_analysis(cfg.system.A, *cfg.system.B, d.F);
        Checker inner(ReproOptions{});
        inner.spectrum("", loop.spectrum, {{-0.1234, 2.0777}, {-0.1234, -2.0777}, 0.5279}, 1e-2);
        const auto sub = inner.take().front();
        c.note("reference estimates rounded to four decimals: spec(A - B F_hat)", sub.passed && !loop.stable, sub.detail);
    }
}

}  // namespace

bool ExampleOutcome::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.informational || c.passed; });
}

std::vector<std::string> example_ids() {
    std::vector<std::string> ids;
    for (const auto& e : catalogue()) ids.emplace_back(e.id);
    return ids;
}

bool is_example_id(const std::string& id) {
    for (const auto& e : catalogue())
        if (id == e.id) return true;
    return false;
}

std::vector<ExperimentConfig> example_configs(const std::string& id, const ReproOptions& opts) {
    std::vector<ExperimentConfig> out;
    for (const char* text : find(id).configs) {
        auto cfg = parse_config(Json::parse(text));
        if (opts.mode) cfg.ident.mode = *opts.mode;
        out.push_back(std::move(cfg));
    }
    return out;
}

ExampleOutcome run_example(const std::string& id, const ReproOptions& opts) {
    ExampleOutcome out;
    const auto& ex = find(id);
    out.id = ex.id;
    out.title = ex.title;
    for (const auto& cfg : example_configs(id, opts)) out.runs.push_back(run_experiment(cfg));
    Checker c(opts);
    check_example(id, out.runs, c);
    out.checks = c.take();
    return out;
}

}  // namespace ksid::cli
