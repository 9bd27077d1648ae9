#include "ksid/cli/experiment.hpp"

#include <chrono>

namespace ksid::cli {
namespace {

Trajectory clean_truth(const ExperimentConfig& cfg, std::size_t steps) {
    if (cfg.controlled()) {
        const Matrix u = cfg.input->generate(static_cast<Eigen::Index>(steps), cfg.system.input_dim());
        return simulate_controlled(cfg.system, cfg.x0, u, steps);
    }
    return simulate_autonomous(cfg.system, cfg.x0, steps, std::nullopt, cfg.perturbation);
}

Trajectory model_prediction(const ExperimentConfig& cfg, const IdentResult& id, std::size_t steps) {
    if (cfg.controlled()) {
        const Matrix u = cfg.input->generate(static_cast<Eigen::Index>(steps), cfg.system.input_dim());
        return simulate_controlled({id.A_hat, id.B_hat}, cfg.x0, u, steps);
    }
    return predict(id.A_hat, cfg.x0, steps);
}

StabilizeResult stabilize(const ExperimentConfig& cfg, const IdentResult& id) {
    StabilizeResult s;
    const auto n = cfg.system.state_dim();
    const auto m = cfg.system.input_dim();
    s.Q = cfg.lqr && cfg.lqr->Q ? *cfg.lqr->Q : Matrix::Identity(n, n);
    s.R = cfg.lqr && cfg.lqr->R ? *cfg.lqr->R : Matrix::Identity(m, m);
    try {
        s.plant_dare = solve_dare({cfg.system.A, *cfg.system.B, s.Q, s.R});
    } catch (const ConvergenceError& e) {
        s.plant_dare_error = e.what();
    }
    s.model_dare = solve_dare({id.A_hat, *id.B_hat, s.Q, s.R});
    s.model_loop = closed_loop_analysis(id.A_hat, *id.B_hat, s.model_dare.F);
    s.plant_loop = closed_loop_analysis(cfg.system.A, *cfg.system.B, s.model_dare.F);
    return s;
}

// Linear kernel with the standard basis as expansion set: it spans the same
// linear functions as the data while keeping K_tt = I, so the regularized
// operator is invertible for every gamma > 0.
BoundReport bound_for(const ExperimentConfig& cfg, const Trajectory& traj, const ExperimentReport& r) {
    const RescalePolicy policy = r.ident.sigma != 1.0 ? RescalePolicy::always : RescalePolicy::never;
    const RegressionData data = prepare_regression(traj, policy);
    const auto d = data.regressors.cols();
    const PointSet basis = Matrix::Identity(d, d);
    const double gamma = cfg.bound.gamma.value_or(r.ident.gammas.front());
    if (!(gamma > 0.0)) throw std::invalid_argument("bound: gamma must be > 0 (set bound.gamma)");
    const double amplitude = cfg.noise ? cfg.noise->amplitude : 0.0;
    return sample_error_bound(
        bound_inputs_for(basis, data.regressors, KernelSpec::linear(), gamma, amplitude, cfg.bound.delta));
}

Json loop_json(const ClosedLoop& c) {
    Json j;
    j["spectrum"] = spectrum_json(c.spectrum);
    j["stable"] = c.stable;
    return j;
}

Json dare_json(const DareResult& d) {
    Json j;
    j["P"] = matrix_json(d.P);
    j["F"] = matrix_json(d.F);
    j["closed_loop"] = matrix_json(d.closed_loop);
    j["closed_loop_spectrum"] = spectrum_json(eigenvalues(d.closed_loop));
    j["residual"] = number(d.residual);
    j["iterations"] = d.iterations;
    return j;
}

Json entropy_json(const EntropyValues& e) {
    Json j;
    j["max_one_sum"] = number(e.max_one_sum);
    j["bowen"] = number(e.bowen);
    j["unstable_modulus_sum"] = number(e.unstable_sum);
    return j;
}

Json distance_json(const MatrixDistance& d) {
    Json j;
    j["max_abs"] = number(d.max_abs);
    j["frobenius"] = number(d.frobenius);
    if (!d.error_spectrum.eigenvalues.empty()) j["error_spectrum"] = spectrum_json(d.error_spectrum);
    return j;
}

}  // namespace

EntropyValues entropy_values(const Matrix& A) {
    return {topological_entropy_paper(A), topological_entropy_bowen(A), unstable_modulus_sum(A)};
}

Trajectory simulate(const ExperimentConfig& cfg) {
    if (cfg.controlled()) {
        const Matrix u = cfg.input->generate(static_cast<Eigen::Index>(cfg.N + 1), cfg.system.input_dim());
        return simulate_controlled(cfg.system, cfg.x0, u, cfg.N, cfg.noise);
    }
    return simulate_autonomous(cfg.system, cfg.x0, cfg.N, cfg.noise, cfg.perturbation);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport r;
    r.config = cfg;
    r.trajectory = simulate(cfg);

    IdentConfig ident;
    ident.mode = cfg.ident.mode;
    ident.rescale = cfg.ident.rescale;
    ident.gammas = cfg.ident.gammas;
    if (cfg.ident.cross_validate) {
        auto [res, report] = cross_validate(r.trajectory, cfg.cv.to_core(), ident);
        r.ident = std::move(res);
        r.cv = std::move(report);
    } else {
        r.ident = cfg.controlled() ? estimate_AB(r.trajectory, ident) : estimate_A(r.trajectory, ident);
    }

    r.spectrum_A = eigenvalues(cfg.system.A);
    r.spectrum_A_hat = eigenvalues(r.ident.A_hat);
    r.distance = matrix_distance(cfg.system.A, r.ident.A_hat);
    if (r.ident.B_hat) {
        MatrixDistance d;
        const Matrix diff = *cfg.system.B - *r.ident.B_hat;
        d.max_abs = diff.cwiseAbs().maxCoeff();
        d.frobenius = diff.norm();
        r.distance_B = d;
    }

    if (cfg.has_task(Task::entropy)) {
        r.entropy_A = entropy_values(cfg.system.A);
        r.entropy_A_hat = entropy_values(r.ident.A_hat);
    }
    if (cfg.has_task(Task::stabilize)) r.stabilize = stabilize(cfg, r.ident);
    if (cfg.has_task(Task::compare)) {
        const auto truth = clean_truth(cfg, cfg.compare.horizon);
        const auto pred = model_prediction(cfg, r.ident, cfg.compare.horizon);
        r.compare = compare_trajectories(truth, pred, cfg.compare.tail_start);
    }
    if (cfg.has_task(Task::bound)) r.bound = bound_for(cfg, r.trajectory, r);

    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

Json spectrum_json(const Spectrum& s) {
    Json a = Json::array();
    for (const auto& l : s.eigenvalues) {
        Json e;
        e["re"] = number(l.real());
        e["im"] = number(l.imag());
        a.push_back(std::move(e));
    }
    return a;
}

Json report_json(const ExperimentReport& r) {
    Json j;
    j["schema"] = "ksid.report/1";
    j["config"] = to_json(r.config);
    j["noise_generator"] = kNoiseGeneratorName;

    Json id;
    id["A_hat"] = matrix_json(r.ident.A_hat);
    if (r.ident.B_hat) id["B_hat"] = matrix_json(*r.ident.B_hat);
    Json g = Json::array();
    for (double v : r.ident.gammas) g.push_back(number(v));
    id["gammas"] = g;
    id["sigma"] = number(r.ident.sigma);
    id["mode"] = r.ident.mode == RegressionMode::paper_literal ? "paper" : "representer";
    Json c = Json::array();
    for (double v : r.ident.condition_estimates) c.push_back(number(v));
    id["condition_estimates"] = c;
    id["error_A"] = distance_json(r.distance);
    if (r.distance_B) id["error_B"] = distance_json(*r.distance_B);
    j["identification"] = id;

    if (r.cv) {
        Json cv;
        Json grid = Json::array();
        for (double v : r.cv->grid) grid.push_back(number(v));
        cv["grid"] = grid;
        Json chosen = Json::array();
        for (double v : r.cv->chosen_gamma) chosen.push_back(number(v));
        cv["chosen_gamma"] = chosen;
        cv["validation_mse"] = matrix_json(r.cv->validation_mse);
        cv["split"] = r.cv->split;
        cv["train_pairs"] = r.cv->train_pairs.size();
        cv["validation_pairs"] = r.cv->validation_pairs.size();
        j["cv"] = cv;
    }

    j["spectrum"]["A"] = spectrum_json(r.spectrum_A);
    j["spectrum"]["A_hat"] = spectrum_json(r.spectrum_A_hat);

    if (r.entropy_A) {
        j["entropy"]["A"] = entropy_json(*r.entropy_A);
        j["entropy"]["A_hat"] = entropy_json(*r.entropy_A_hat);
    }

    if (r.stabilize) {
        const auto& s = *r.stabilize;
        Json st;
        st["Q"] = matrix_json(s.Q);
        st["R"] = matrix_json(s.R);
        if (s.plant_dare) {
            st["plant_design"] = dare_json(*s.plant_dare);
        } else {
            st["plant_design"]["error"] = s.plant_dare_error;
        }
        st["model_design"] = dare_json(s.model_dare);
        st["model_closed_loop"] = loop_json(s.model_loop);
        st["plant_closed_loop"] = loop_json(s.plant_loop);
        j["stabilize"] = st;
    }

    if (r.compare) {
        const auto& e = *r.compare;
        Json cmp;
        cmp["horizon"] = e.errors.rows() - 1;
        cmp["full_energy"] = number(e.full_energy);
        cmp["full_energy_per_component"] = vector_json(e.full_energy_per_component);
        cmp["tail_start"] = e.tail_start;
        cmp["tail_energy"] = number(e.tail_energy);
        cmp["tail_energy_per_component"] = vector_json(e.tail_energy_per_component);
        cmp["decay_rate"] = e.decay_rate ? number(*e.decay_rate) : Json(nullptr);
        j["compare"] = cmp;
    }

    if (r.bound) {
        const auto& b = *r.bound;
        Json bd;
        bd["kappa"] = number(b.kappa);
        bd["L_norm"] = number(b.L_norm);
        bd["KL_norm"] = number(b.KL_norm);
        bd["B_w"] = number(b.B_w);
        bd["sigma_w2"] = number(b.sigma_w2);
        bd["argument"] = number(b.argument);
        bd["epsilon"] = number(b.epsilon);
        bd["degenerate"] = b.degenerate;
        j["bound"] = bd;
    }

    j["timings"]["total_ms"] = r.elapsed_ms;
    return j;
}

}  // namespace ksid::cli
