#include "ksid/cli/app.hpp"

#include "ksid/cli/experiment.hpp"
#include "ksid/cli/repro.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace ksid::cli {
namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string mode;
    std::string gamma;
    std::optional<double> tol;
    bool quiet = false;
};

/// Thrown for problems in the command line itself (not the config).
class UsageError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

RegressionMode parse_mode(const std::string& s) {
    if (s == "paper") return RegressionMode::paper_literal;
    if (s == "representer") return RegressionMode::representer;
    throw UsageError("--mode must be 'paper' or 'representer', got '" + s + "'");
}

void apply_overrides(ExperimentConfig& cfg, const Options& o) {
    if (o.seed) {
        if (cfg.noise) cfg.noise->seed = *o.seed;
        cfg.cv.split_seed = *o.seed;
    }
    if (!o.mode.empty()) cfg.ident.mode = parse_mode(o.mode);
    if (!o.gamma.empty()) {
        if (o.gamma == "cv") {
            cfg.ident.cross_validate = true;
        } else {
            double g = 0.0;
            std::size_t used = 0;
            try {
                g = std::stod(o.gamma, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != o.gamma.size() || !(g >= 0.0))
                throw UsageError("--gamma must be a non-negative number or 'cv', got '" + o.gamma + "'");
            cfg.ident.cross_validate = false;
            cfg.ident.gammas = {g};
        }
    }
}

ExperimentConfig configured(const Options& o) {
    if (o.config.empty()) throw UsageError("--config is required");
    auto cfg = load_config(o.config);
    apply_overrides(cfg, o);
    return cfg;
}

void add_task(ExperimentConfig& cfg, Task t) {
    if (!cfg.has_task(t)) cfg.tasks.push_back(t);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void emit(const std::string& text, const Options& o, std::ostream& out) {
    if (!o.out.empty()) {
        write_atomic(o.out, text);
    } else if (!o.quiet) {
        out << text;
    }
}

std::string fixed(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

int run_simulate(const Options& o, std::ostream& out) {
    const auto cfg = configured(o);
    std::ostringstream csv;
    csv << std::setprecision(17);
    write_trajectory_csv(csv, simulate(cfg));
    emit(csv.str(), o, out);
    return exit_ok;
}

int run_pipeline(const Options& o, std::ostream& out, std::optional<bool> need_inputs, std::optional<Task> task) {
    auto cfg = configured(o);
    if (need_inputs && *need_inputs != cfg.controlled())
        throw ConfigError("$.system.B", *need_inputs ? "identify-ctrl needs a controlled system (B and input_signal)"
                                                     : "identify needs an autonomous system; use identify-ctrl");
    if (task) add_task(cfg, *task);
    const auto report = run_experiment(cfg);

    if (task == Task::bound && !o.quiet) {
        const auto& b = *report.bound;
        const std::pair<const char*, double> rows[] = {
            {"kappa", b.kappa},       {"|L_w|", b.L_norm},    {"|K L_w|", b.KL_norm}, {"B_w", b.B_w},
            {"sigma_w^2", b.sigma_w2}, {"alpha^-1 argument", b.argument}, {"epsilon", b.epsilon},
        };
        for (const auto& [label, v] : rows) out << std::left << std::setw(20) << label << fixed(v) << "\n";
        if (b.degenerate) out << "(noise-free: bound is zero)\n";
        if (o.out.empty()) return exit_ok;
    }
    emit(dump(report_json(report)), o, out);
    return exit_ok;
}

int run_repro(const std::string& id, const Options& o, std::ostream& out) {
    if (!is_example_id(id)) throw UsageError("unknown example id '" + id + "'");
    ReproOptions ro;
    if (!o.mode.empty()) ro.mode = parse_mode(o.mode);
    ro.tolerance = o.tol;
    const auto outcome = run_example(id, ro);

    if (!o.quiet) {
        out << "example " << outcome.id << ": " << outcome.title << "\n";
        for (const auto& c : outcome.checks) {
            const char* tag = c.informational ? (c.passed ? "info" : "INFO") : (c.passed ? "PASS" : "FAIL");
            out << "  [" << tag << "] " << c.name << " (" << c.detail << ")\n";
        }
        out << (outcome.passed() ? "PASS" : "FAIL") << "\n";
    }
    if (!o.out.empty()) {
        Json j;
        j["example"] = outcome.id;
        j["passed"] = outcome.passed();
        Json checks = Json::array();
        for (const auto& c : outcome.checks)
            checks.push_back({{"name", c.name}, {"passed", c.passed}, {"informational", c.informational},
                              {"detail", c.detail}});
        j["checks"] = checks;
        Json runs = Json::array();
        for (const auto& r : outcome.runs) runs.push_back(report_json(r));
        j["runs"] = runs;
        write_atomic(o.out, dump(j));
    }
    return outcome.passed() ? exit_ok : exit_fail;
}

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("$", path + ": " + e.what());
    }
}

int run_diff(const std::string& a, const std::string& b, const Options& o, std::ostream& out) {
    const auto diffs = diff_reports(read_json(a), read_json(b), o.tol.value_or(1e-9));
    if (!o.quiet) {
        for (const auto& d : diffs) out << d.path << ": " << d.left << " != " << d.right << "\n";
        out << diffs.size() << " difference(s)\n";
    }
    return diffs.empty() ? exit_ok : exit_fail;
}

std::optional<double> as_number(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        if (s == "nan") return NAN;
    }
    return std::nullopt;
}

bool numbers_match(double x, double y, double rel, double abs) {
    if (std::isnan(x) || std::isnan(y)) return std::isnan(x) && std::isnan(y);
    if (std::isinf(x) || std::isinf(y)) return x == y;
    return std::abs(x - y) <= abs + rel * std::max(std::abs(x), std::abs(y));
}

void diff_into(const Json& a, const Json& b, const std::string& path, double rel, double abs,
               std::vector<FieldDifference>& out) {
    const auto na = as_number(a), nb = as_number(b);
    if (na && nb) {
        if (!numbers_match(*na, *nb, rel, abs)) out.push_back({path, a.dump(), b.dump()});
        return;
    }
    if (a.type() != b.type()) {
        out.push_back({path, a.dump(), b.dump()});
        return;
    }
    if (a.is_object()) {
        for (const auto& [key, va] : a.items()) {
            if (path == "$" && key == "timings") continue;
            const std::string p = path + "." + key;
            if (!b.contains(key)) {
                out.push_back({p, va.dump(), "<missing>"});
            } else {
                diff_into(va, b.at(key), p, rel, abs, out);
            }
        }
        for (const auto& [key, vb] : b.items())
            if (!a.contains(key) && !(path == "$" && key == "timings"))
                out.push_back({path + "." + key, "<missing>", vb.dump()});
    } else if (a.is_array()) {
        if (a.size() != b.size()) {
            out.push_back({path, "length " + std::to_string(a.size()), "length " + std::to_string(b.size())});
            return;
        }
        for (std::size_t i = 0; i < a.size(); ++i)
            diff_into(a[i], b[i], path + "[" + std::to_string(i) + "]", rel, abs, out);
    } else if (a != b) {
        out.push_back({path, a.dump(), b.dump()});
    }
}

}  // namespace

void write_atomic(const std::filesystem::path& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        f << text;
        f.flush();
        if (!f) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot rename into '" + path.string() + "': " + ec.message());
    }
}

std::vector<FieldDifference> diff_reports(const Json& a, const Json& b, double rel_tol, double abs_tol) {
    std::vector<FieldDifference> out;
    diff_into(a, b, "$", rel_tol, abs_tol, out);
    return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kernel-based identification and control of linear systems", "ksid"};
    app.require_subcommand(1, 1);

    Options o;
    std::string example_id, left, right;
    auto common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", o.config, "Experiment config (JSON)");
        if (needs_config) c->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "Write output here instead of stdout");
        sub->add_option("--seed", o.seed, "Override the noise and split seed");
        sub->add_option("--mode", o.mode, "Regression mode")->check(CLI::IsMember({"paper", "representer"}));
        sub->add_option("--gamma", o.gamma, "Fixed regularization or 'cv'");
        sub->add_option("--tol", o.tol, "Tolerance override")->check(CLI::PositiveNumber);
        sub->add_flag("--quiet", o.quiet, "Suppress normal output");
    };

    auto* sim = app.add_subcommand("simulate", "Simulate the configured system, CSV output");
    auto* ident = app.add_subcommand("identify", "Identify an autonomous system");
    auto* ident_ctrl = app.add_subcommand("identify-ctrl", "Identify a controlled system");
    auto* ent = app.add_subcommand("entropy", "Identification plus entropy of A and A_hat");
    auto* stab = app.add_subcommand("stabilize", "Identification plus LQR design on the estimates");
    auto* bnd = app.add_subcommand("bound", "Identification plus the sample error bound");
    auto* rep = app.add_subcommand("repro", "Reproduce a bundled example and check it");
    auto* dif = app.add_subcommand("report-diff", "Compare two report files");
    for (auto* s : {sim, ident, ident_ctrl, ent, stab, bnd}) common(s, true);
    common(rep, false);
    rep->add_option("id", example_id, "Example id")->required();
    common(dif, false);
    dif->add_option("a", left, "First report")->required()->check(CLI::ExistingFile);
    dif->add_option("b", right, "Second report")->required()->check(CLI::ExistingFile);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "ksid: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (sim->parsed()) return run_simulate(o, out);
        if (ident->parsed()) return run_pipeline(o, out, false, std::nullopt);
        if (ident_ctrl->parsed()) return run_pipeline(o, out, true, std::nullopt);
        if (ent->parsed()) return run_pipeline(o, out, std::nullopt, Task::entropy);
        if (stab->parsed()) return run_pipeline(o, out, true, Task::stabilize);
        if (bnd->parsed()) return run_pipeline(o, out, std::nullopt, Task::bound);
        if (rep->parsed()) return run_repro(example_id, o, out);
        if (dif->parsed()) return run_diff(left, right, o, out);
    } catch (const NumericError& e) {
        err << "ksid: numeric failure: " << e.what() << "\n";
        return exit_numeric;
    } catch (const ConfigError& e) {
        err << "ksid: config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const UsageError& e) {
        err << "ksid: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "ksid: invalid input: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "ksid: error: " << e.what() << "\n";
        return exit_numeric;
    }
    return exit_usage;
}

}  // namespace ksid::cli
