#include "nehari/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "nehari/decay.hpp"
#include "nehari/field_io.hpp"
#include "nehari/testfunctions.hpp"
#include "vendor_json.hpp"

namespace nehari {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json energy_report_json(const EnergyReport& rep) {
    json j;
    j["grad2"] = rep.integrals.grad2;
    j["lp"] = rep.integrals.lp;
    j["lq"] = rep.integrals.lq;
    j["l2"] = rep.integrals.l2;
    j["I"] = rep.I;
    j["nehari_residual"] = rep.nehari_residual;
    if (rep.nodal) {
        j["nodal"]["I_plus"] = rep.nodal->I_plus;
        j["nodal"]["I_minus"] = rep.nodal->I_minus;
        j["nodal"]["residual_plus"] = rep.nodal->residual_plus;
        j["nodal"]["residual_minus"] = rep.nodal->residual_minus;
    }
    return j;
}

json solution_json(const Solution& sol, bool with_defect) {
    json j;
    j["level"] = sol.level;
    j["converged"] = sol.converged;
    j["concentrated"] = sol.concentrated;
    if (sol.concentrated) j["bubble_scale"] = sol.bubble_scale;
    j["iterations"] = sol.iterations;
    j["report"] = energy_report_json(sol.report);
    if (with_defect) j["nodal_defect"] = sol.nodal_defect;
    json hist = json::array();
    for (const auto& rec : sol.history)
        hist.push_back({{"I", rec.I}, {"relative_gradient", rec.relative_gradient}});
    j["history"] = hist;
    return j;
}

json gap_report_json(const GapReport& rep) {
    json j;
    j["mode"] = rep.mode;
    j["c0"] = rep.c0;
    j["c0_infinity"] = rep.c0_infinity;
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json row;
        row["eps"] = r.eps;
        row["I_first"] = r.I_first;
        row["I_second"] = r.I_second;
        row["I_sum"] = r.I_sum;
        row["sup_tau"] = r.sup_tau;
        row["tau1"] = r.tau1;
        row["tau2"] = r.tau2;
        row["bound"] = r.bound;
        row["delta_v"] = r.delta_v;
        row["lq_bubble"] = r.lq_bubble;
        rows.push_back(row);
    }
    j["rows"] = rows;
    j["exponent_fits"] = {
        {"grad", {{"slope", rep.fit_grad.slope}, {"intercept", rep.fit_grad.intercept}, {"r2", rep.fit_grad.r2}}},
        {"q", {{"slope", rep.fit_q.slope}, {"intercept", rep.fit_q.intercept}, {"r2", rep.fit_q.r2}}}};
    if (!rep.fit_q_eps.empty()) j["fit_q_eps"] = rep.fit_q_eps;
    j["crossover_eps"] = rep.crossover_eps;
    j["dip_achieved"] = rep.dip_achieved;
    j["best_margin"] = rep.best_margin;
    j["best_eps"] = rep.best_eps;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
    out << text;
}

json base_report(const std::string& command, const RunConfig& cfg) {
    json j;
    j["command"] = command;
    j["config"] = json::parse(cfg.to_json_object());
    return j;
}

/// Straight-cylinder reference level c0(F-hat) at matching F, T, h.
Solution straight_reference(const RunConfig& cfg, const ProblemParams& params) {
    DomainSpec dom = make_domain(cfg.ell, cfg.cross_section(), Family::straight,
                                 cfg.resolved_T());
    auto grid = discretize(dom, cfg.h, cfg.max_points);
    return ground_state(dom, grid, params, cfg.solver);
}

Field load_or_solve_field(const RunConfig& cfg, const DomainSpec& dom,
                          std::shared_ptr<const GridSpec> grid, const ProblemParams& params,
                          bool* converged) {
    if (!cfg.decay_field.empty()) {
        if (converged) *converged = true;
        return read_field(grid, cfg.decay_field);
    }
    Solution sol = ground_state(dom, grid, params, cfg.solver);
    if (converged) *converged = sol.converged;
    return sol.field;
}

Field load_init(const RunConfig& cfg, std::shared_ptr<const GridSpec> grid) {
    return read_field(std::move(grid), cfg.solver.init_file);
}

json run_solve(const RunConfig& cfg, const std::string& out_dir, int& exit_code) {
    DomainSpec dom = cfg.domain();
    auto grid = discretize(dom, cfg.h, cfg.max_points);
    ProblemParams params = cfg.problem();
    Field init;
    bool from_file = cfg.solver.init == InitKind::file;
    if (from_file) init = load_init(cfg, grid);
    Solution sol = ground_state(dom, grid, params, cfg.solver, from_file ? &init : nullptr);
    if (!sol.converged) exit_code = 1;
    write_field(out_dir + "/solve_u.csv", sol.field);
    json j = base_report("solve", cfg);
    j["solution"] = solution_json(sol, false);
    j["c0"] = sol.level;
    if (grid->T > 0.0 && grid->ell > 0) {
        TailMasses tm = tail_masses(sol.field, params, grid->T / 2.0);
        j["tail_masses"] = {{"R", grid->T / 2.0},
                            {"grad", tm.grad_tail},
                            {"p", tm.p_tail},
                            {"q", tm.q_tail}};
    }
    j["grid"] = {{"mask_points", grid->n_mask()}, {"T", grid->T}, {"h", grid->h}};
    j["artifacts"] = {{"field", "solve_u.csv"}};
    return j;
}

json run_nodal(const RunConfig& cfg, const std::string& out_dir, int& exit_code) {
    DomainSpec dom = cfg.domain();
    auto grid = discretize(dom, cfg.h, cfg.max_points);
    ProblemParams params = cfg.problem();
    Field init;
    bool from_file = cfg.solver.init == InitKind::file;
    if (from_file) init = load_init(cfg, grid);
    Solution sol = nodal_solution(dom, grid, params, cfg.solver, from_file ? &init : nullptr);
    if (!sol.converged) exit_code = 1;
    write_field(out_dir + "/nodal_w.csv", sol.field);
    auto [up, um] = nodal_split(sol.field);
    write_field(out_dir + "/nodal_u_plus.csv", up);
    write_field(out_dir + "/nodal_u_minus.csv", um);
    json j = base_report("nodal", cfg);
    j["solution"] = solution_json(sol, true);
    j["c1"] = sol.level;
    j["grid"] = {{"mask_points", grid->n_mask()}, {"T", grid->T}, {"h", grid->h}};
    j["artifacts"] = {{"field", "nodal_w.csv"},
                      {"plus", "nodal_u_plus.csv"},
                      {"minus", "nodal_u_minus.csv"}};
    return j;
}

json run_eigen(const RunConfig& cfg, const std::string& out_dir, int&) {
    CrossSection F = cfg.cross_section();
    Eigenpair ep = principal_eigenpair(F, cfg.h);
    write_field(out_dir + "/eigen_phi.csv", ep.phi);
    json j = base_report("eigen", cfg);
    j["lambda1"] = ep.lambda1;
    j["iterations"] = ep.iterations;
    j["residual"] = ep.residual;
    j["artifacts"] = {{"phi", "eigen_phi.csv"}};
    if (cfg.eigen_h_list.size() >= 2) {
        auto rows = eigen_convergence_report(F, cfg.eigen_h_list);
        json table = json::array();
        for (const auto& r : rows)
            table.push_back({{"h", r.h},
                             {"lambda1", r.lambda1},
                             {"error", r.error},
                             {"observed_order", r.observed_order}});
        j["convergence"] = table;
    }
    return j;
}

json run_gap(const RunConfig& cfg, const std::string& out_dir, int& exit_code) {
    DomainSpec dom = cfg.domain();
    auto grid = discretize(dom, cfg.h, cfg.max_points);
    ProblemParams params = cfg.problem();
    Solution v = ground_state(dom, grid, params, cfg.solver);
    if (!v.converged) exit_code = 1;
    write_field(out_dir + "/gap_ground_state.csv", v.field);

    GapReport rep;
    if (dom.family == Family::bump_hprime) {
        if (cfg.R_list.empty())
            throw Error(ErrorCode::invalid_argument,
                        "gap on a bump family requires R_list");
        Solution psi = straight_reference(cfg, params);
        if (!psi.converged) exit_code = 1;
        HprimeParams hp;
        hp.A = cfg.a0 / cfg.a1;
        hp.m = cfg.m;
        hp.a0 = cfg.a0;
        if (cfg.gap_M > 0.0) {
            hp.M = cfg.gap_M;
        } else {
            double M = std::ceil(2.0 * hp.A + 1.0);
            while (!(1.0 / hp.A < std::pow((M - hp.A) / (M + hp.A), hp.m))) M += 1.0;
            hp.M = M;
        }
        rep = energy_gap_experiment_Hprime(dom, grid, params, v.field, v.level, psi.field,
                                           psi.level, hp, cfg.R_list, cfg.tau_grid);
    } else {
        if (cfg.eps_list.empty())
            throw Error(ErrorCode::invalid_argument, "gap requires eps_list");
        Point center{};
        center[0] = cfg.gap_center;
        rep = energy_gap_experiment_H0(dom, grid, params, v.field, v.level, cfg.eps_list,
                                       cfg.tau_grid, center);
    }
    json j = base_report("gap", cfg);
    j["gap"] = gap_report_json(rep);
    j["artifacts"] = {{"ground_state", "gap_ground_state.csv"}};
    return j;
}

json run_decay(const RunConfig& cfg, const std::string& out_dir, int& exit_code) {
    DomainSpec dom = cfg.domain();
    auto grid = discretize(dom, cfg.h, cfg.max_points);
    ProblemParams params = cfg.problem();
    bool converged = true;
    Field u = load_or_solve_field(cfg, dom, grid, params, &converged);
    if (!converged) exit_code = 1;
    write_field(out_dir + "/decay_u.csv", u);

    Eigenpair ep = principal_eigenpair(dom.base, cfg.h);
    double T = grid->T;
    double R1 = cfg.window_R1 > 0.0 ? cfg.window_R1 : T / 3.0;
    double R2 = cfg.window_R2 > 0.0 ? cfg.window_R2 : 2.0 * T / 3.0;
    bool with_pref = cfg.with_prefactor >= 0 ? cfg.with_prefactor > 0 : cfg.ell > 1;

    DecayFit fit = fit_decay_rate(u, R1, R2, with_pref);
    DecayFit gfit = fit_axial_gradient_decay(u, R1, R2, with_pref);
    HopfResult hopf = hopf_check(u, cfg.eta, ep, params.lambda);

    json j = base_report("decay", cfg);
    j["rate"] = fit.rate;
    j["expected_rate"] = std::sqrt(ep.lambda1 - params.lambda);
    j["prefactor_exponent"] = fit.prefactor_exponent;
    j["r2"] = fit.r2;
    j["hopf_beta"] = hopf.beta;
    j["hopf_passed"] = hopf.passed;
    j["grad_rate"] = gfit.rate;
    j["lambda1"] = ep.lambda1;
    j["window"] = {{"R1", R1}, {"R2", R2}};
    j["samples"] = fit.samples;
    j["artifacts"] = {{"field", "decay_u.csv"}};
    return j;
}

json run_instanton(const RunConfig& cfg, const std::string& out_dir, int&) {
    int N = cfg.N >= 3 ? cfg.N : 3;
    json j = base_report("instanton", cfg);

    // Radial quadrature refinement: both integrals at increasing panel
    // counts; the finest pair is the S^(N/2) reference.
    json radial = json::array();
    double Sgrid = 0.0;
    for (int panels : {2000, 20000, 200000}) {
        RadialIntegrals ri = instanton_radial_integrals(N, cfg.instanton_eps, 0.0, panels);
        radial.push_back({{"panels", panels}, {"grad2", ri.grad2}, {"lp", ri.lp}});
        Sgrid = ri.grad2;
    }
    j["radial"] = radial;
    j["S_pow_N_half"] = Sgrid;

    // Scale invariance of the radial route.
    RadialIntegrals r1 = instanton_radial_integrals(N, 0.1);
    RadialIntegrals r2 = instanton_radial_integrals(N, 0.2);
    j["eps_independence"] = {{"eps_0.1", r1.grad2}, {"eps_0.2", r2.grad2}};

    // Masked-grid quadrature trend over growing boxes.
    json trend = json::array();
    std::shared_ptr<const GridSpec> smallest;
    for (double L : cfg.instanton_boxes) {
        DomainSpec ball = make_domain(1, CrossSection::make_disk(L), Family::ball, L);
        auto grid = discretize(ball, cfg.instanton_h, cfg.max_points);
        if (!smallest) smallest = grid;
        InstantonSpec spec;
        spec.N = N;
        spec.eps = cfg.instanton_eps;
        Field U = instanton(spec, grid);
        double pc = ProblemParams::critical_exponent(N);
        Integrals ig = integrals(U, pc, 0.5 * (pc + 2.0));
        trend.push_back({{"box", L},
                         {"h", cfg.instanton_h},
                         {"grad2", grad_energy_interior(U)},
                         {"lp", ig.lp},
                         {"mask_points", grid->n_mask()}});
    }
    j["grid_trend"] = trend;

    if (smallest) {
        InstantonSpec spec;
        spec.N = N;
        spec.eps = cfg.instanton_eps;
        write_field(out_dir + "/instanton_U.csv", instanton(spec, smallest));
        j["artifacts"] = {{"field", "instanton_U.csv"}};
    }
    return j;
}

json run_shoot(const RunConfig& cfg, const std::string& out_dir, int&) {
    ProblemParams params = cfg.problem();
    RadialShot shot = radial_shooting(params.N, params.p, params.q, params.mu, cfg.R_ball);
    json j = base_report("shoot", cfg);
    j["has_solution"] = shot.has_solution;
    if (shot.has_solution) {
        j["u0"] = shot.u0;
        j["level"] = shot.level;
        std::ofstream prof(out_dir + "/shoot_profile.csv");
        prof << "r,u\n";
        char buf[64];
        for (std::size_t i = 0; i < shot.r.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", shot.r[i], shot.u[i]);
            prof << buf;
        }
        j["artifacts"] = {{"profile", "shoot_profile.csv"}};
    }
    return j;
}

json run_report(const RunConfig& cfg, const std::string& out_dir, int& exit_code) {
    auto read_json = [&](const std::string& name) {
        std::ifstream in(out_dir + "/" + name);
        if (!in)
            throw Error(ErrorCode::io_error,
                        "report needs " + name + " in the output directory (run solve/nodal first)");
        return json::parse(in);
    };
    json solve = read_json("solve.json");
    json nodal = read_json("nodal.json");
    double c0 = solve.at("c0").get<double>();
    double c1 = nodal.at("c1").get<double>();

    ProblemParams params = cfg.problem();
    double c0_straight = c0;
    if (cfg.family != Family::straight) {
        Solution psi = straight_reference(cfg, params);
        if (!psi.converged) exit_code = 1;
        c0_straight = psi.level;
    }

    json j = base_report("report", cfg);
    j["c0"] = c0;
    j["c1"] = c1;
    j["c0_infinity_H"] = c0_straight; // c0(F-hat), the (H) escape level
    json ineq = {{"c0_positive", c0 > 0.0},
                 {"c1_vs_2c0", c1 - 2.0 * c0},
                 {"c1_ge_2c0", c1 >= 2.0 * c0 * (1.0 - 1e-3)},
                 {"c1_below_c0_plus_c0straight", c1 < c0 + c0_straight}};
    if (params.N >= 3) {
        // bubble escape level exists only at N >= 3
        double SN = sobolev_level(params.N);
        double bubble = SN / params.N;
        j["S_pow_N_half"] = SN;
        j["c0_infinity_H0"] = bubble;
        ineq["c0_below_bubble"] = c0 < bubble;
        ineq["c1_below_c0_plus_bubble"] = c1 < c0 + bubble;
    }
    j["inequalities"] = ineq;
    return j;
}

} // namespace

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::no_convergence:
        case ErrorCode::nodal_collapse:
            return 1;
        default:
            return 2;
    }
}

RunResult run_command(const std::string& command, const RunConfig& cfg,
                      const std::string& out_dir) {
    auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);

    int exit_code = 0;
    json j;
    if (command == "solve")
        j = run_solve(cfg, out_dir, exit_code);
    else if (command == "nodal")
        j = run_nodal(cfg, out_dir, exit_code);
    else if (command == "eigen")
        j = run_eigen(cfg, out_dir, exit_code);
    else if (command == "gap")
        j = run_gap(cfg, out_dir, exit_code);
    else if (command == "decay")
        j = run_decay(cfg, out_dir, exit_code);
    else if (command == "instanton")
        j = run_instanton(cfg, out_dir, exit_code);
    else if (command == "shoot")
        j = run_shoot(cfg, out_dir, exit_code);
    else if (command == "report")
        j = run_report(cfg, out_dir, exit_code);
    else
        throw Error(ErrorCode::invalid_argument,
                    "unknown command '" + command +
                        "' (expected solve|nodal|eigen|gap|decay|instanton|shoot|report)");

    RunResult res;
    res.exit_code = exit_code;
    res.report_json = j.dump(2) + "\n";
    res.report_path = out_dir + "/" + command + ".json";
    write_text(res.report_path, res.report_json);

    // Wall-clock metadata lives outside the report so reports stay
    // byte-identical across runs.
    auto t1 = std::chrono::steady_clock::now();
    json meta;
    meta["command"] = command;
    meta["elapsed_seconds"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() / 1000.0;
    meta["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    write_text(out_dir + "/" + command + "_meta.json", meta.dump(2) + "\n");
    return res;
}

} // namespace nehari
