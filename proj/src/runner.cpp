#include "hadlab/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "json.hpp"

#include "hadlab/barrier.hpp"
#include "hadlab/csv.hpp"
#include "hadlab/errors.hpp"
#include "hadlab/exhaustion.hpp"
#include "hadlab/expr.hpp"
#include "hadlab/profile.hpp"
#include "hadlab/solver.hpp"
#include "hadlab/sr_curve.hpp"
#include "hadlab/warping.hpp"

namespace hadlab {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "hadlab 0.1.0";

AProfile profile_from(const RunConfig& cfg) {
    std::string kind = cfg.get_string("profile", cfg.has("p") ? "p_laplacian" : "p_laplacian");
    if (kind == "minimal" && cfg.has("p"))
        throw config_error("keys 'p' and 'profile = minimal' conflict");
    if (kind == "p_laplacian") {
        const double p = cfg.has("p") ? cfg.get_real("p") : 2.0;
        if (!(p > 1.0)) throw config_error("p must exceed 1");
        return AProfile::p_laplacian(p);
    }
    if (kind == "minimal") return AProfile::minimal();
    if (kind == "custom") {
        Expression a(cfg.get_string("a_expr"));
        Expression ap(cfg.get_string("a_prime_expr"));
        return AProfile::custom(
            [a](double s) { return a(s); }, [ap](double s) { return ap(s); },
            cfg.get_real("sup_a", std::numeric_limits<double>::infinity()),
            cfg.get_real("growth_p", 2.0), cfg.get_real("growth_q", 1.0),
            cfg.get_real("growth_delta", 1.0), cfg.get_real("growth_c", 1.0));
    }
    throw config_error("unknown profile kind '" + kind + "'");
}

WarpingFunction warping_from(const RunConfig& cfg) {
    const std::string kind = cfg.get_string("warping", "hyperbolic");
    const double k = cfg.require_real("k", 1e-8, 1e3);
    const double r_max = cfg.get_real("r_max", 20.0);
    if (kind == "hyperbolic") return WarpingFunction::hyperbolic(k, r_max);
    if (kind == "sinh_scaled")
        return WarpingFunction::sinh_scaled(cfg.require_real("q", k, 1e3), k, r_max);
    if (kind == "custom") {
        Expression f(cfg.get_string("f_expr"));
        Expression fp(cfg.get_string("f_prime_expr"));
        Expression fpp(cfg.get_string("f_double_prime_expr"));
        return WarpingFunction::custom([f](double r) { return f(r); },
                                       [fp](double r) { return fp(r); },
                                       [fpp](double r) { return fpp(r); }, k, r_max);
    }
    throw config_error("unknown warping kind '" + kind + "'");
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[std::size_t(i)] = lo + (hi - lo) * i / (n - 1);
    return out;
}

json config_echo(const RunConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    for (const auto& [k, v] : cfg.values) j[k] = v;
    j["seed"] = cfg.seed;
    return j;
}

json condition_json(const ConditionReport& rep) {
    auto one = [](const ConditionMargin& c) {
        return json{{"pass", c.pass}, {"margin", c.margin}, {"argmin_s", c.argmin_s}};
    };
    return json{{"a0_exact", rep.a0_exact},
                {"a1", one(rep.a1)},
                {"a2", one(rep.a2)},
                {"a3", one(rep.a3)},
                {"all_pass", rep.all_pass()}};
}

json comparison_json(const ComparisonReport& rep) {
    auto one = [](const ComparisonReport::Entry& e) {
        return json{{"pass", e.pass}, {"margin", e.margin}, {"argmin_r", e.argmin_r}};
    };
    return json{{"log_derivative", one(rep.log_derivative)},
                {"f_lower", one(rep.f_lower)},
                {"fp_lower", one(rep.fp_lower)},
                {"all_pass", rep.all_pass()}};
}

struct CommandResult {
    bool pass = true;
    json report;
};

CommandResult run_check_profile(const RunConfig& cfg, const std::string&) {
    const AProfile profile = profile_from(cfg);
    const double s_max = cfg.get_real("s_max", 10.0);
    const int n = int(cfg.int_in("n_samples", 201, 8, 2000000));
    const ConditionReport rep = check_conditions(profile, linspace(0.0, s_max, n));
    CommandResult out;
    out.pass = rep.all_pass();
    out.report["profile"] = profile.name();
    if (profile.kind() == ProfileKind::p_laplacian) out.report["p"] = profile.p();
    out.report["sup_a"] = std::isfinite(profile.sup_a()) ? json(profile.sup_a())
                                                         : json("inf");
    out.report["growth"] = {{"p", profile.growth_p()},
                            {"q", profile.growth_q()},
                            {"delta", profile.growth_delta()},
                            {"C", profile.growth_C()}};
    out.report["conditions"] = condition_json(rep);
    return out;
}

CommandResult run_check_manifold(const RunConfig& cfg, const std::string&) {
    const WarpingFunction wf = warping_from(cfg);
    const int n = int(cfg.int_in("n_grid", 1000, 8, 2000000));
    std::vector<double> grid;
    for (int i = 1; i <= n; ++i) grid.push_back(wf.r_max() * i / n);
    const ComparisonReport rep = comparison_check(wf, grid);
    CommandResult out;
    out.pass = rep.all_pass() && wf.pole_conditions_ok();
    out.report["warping"] = wf.name();
    out.report["pole_conditions_ok"] = wf.pole_conditions_ok();
    out.report["comparison"] = comparison_json(rep);
    out.report["radial_curvature_at_1"] = wf.radial_curvature(1.0);
    if (cfg.has("div_s")) {
        const double p = cfg.require_real("div_p", 2.0, 64.0);
        const double s = cfg.get_real("div_s");
        const double r_cut = cfg.get_real("div_r_cut", 4.0 * s);
        DivergenceResult div;
        if (cfg.has("area_expr")) {
            Expression area(cfg.get_string("area_expr"));
            div = divergence_test([area](double r) { return area(r); }, p, s, r_cut);
        } else {
            div = divergence_test(wf, int(cfg.int_in("div_n", 1, 1, 64)), p, s, r_cut);
        }
        out.report["divergence_test"] = {{"partial_integral", div.partial_integral},
                                         {"diverging", div.diverging},
                                         {"last_relative_growth", div.last_relative_growth},
                                         {"cutoff_values", div.cutoff_values}};
    }
    return out;
}

CommandResult run_barrier(const RunConfig& cfg, const std::string& out_dir) {
    BarrierSpec spec;
    spec.profile = profile_from(cfg);
    spec.k = cfg.require_real("k", 1e-8, 1e3);
    spec.n = int(cfg.int_in("n", 2, 2, 64));
    spec.height_C = cfg.real_in("height_c", 1.0, 1e-12, 1e12);
    spec.quadrature.abs_tol = cfg.get_real("abs_tol", 1e-10);
    spec.quadrature.rel_tol = cfg.get_real("rel_tol", 1e-12);
    spec.quadrature.tail_cut_T = cfg.get_real("tail_cut", 30.0 / spec.k);

    CommandResult out;
    spec.c = calibrate_c(spec);
    const double g0 = g_eval(spec, 0.0);
    const double s_max = cfg.get_real("s_max", 10.0 / spec.k);
    const int n_samples = int(cfg.int_in("n_samples", 200, 8, 100000));
    std::vector<double> grid;
    for (int i = 1; i <= n_samples; ++i) grid.push_back(s_max * i / n_samples);
    const ResidualReport rep = verify_supersolution(spec, grid);

    CsvWriter csv(out_dir + "/barrier_table.csv", {"s", "g", "sigma", "residual"});
    for (const BarrierTableRow& row : barrier_table(spec, grid))
        csv.row({row.s, row.g, row.sigma, row.residual});

    out.pass = rep.pass && g0 >= 2.0 * spec.height_C - 10 * spec.quadrature.abs_tol;
    out.report["c"] = spec.c;
    out.report["tau"] = spec.tau();
    out.report["g0"] = g0;
    out.report["g0_target"] = 2.0 * spec.height_C;
    out.report["residual"] = {{"pass", rep.pass},
                              {"max_residual", rep.max_residual},
                              {"max_abs_residual", rep.max_abs_residual},
                              {"worst_s", rep.arg_worst_s},
                              {"fd_discrepancy", rep.fd_discrepancy}};
    return out;
}

CommandResult run_sr_curve(const RunConfig& cfg, const std::string& out_dir) {
    const double R = cfg.real_in("r_intersect", 1.0, 1e-8, 1e3);
    const double k = cfg.require_real("k", 1e-8, 1e3);
    const double tol = cfg.real_in("tol", 1e-10, 1e-14, 1e-2);
    const double t_max = cfg.get_real("t_max", 20.0 / k);
    const double t_min = cfg.get_real("t_min", -t_max);
    const double max_dt = cfg.real_in("max_dt", 0.01, 1e-5, 1.0);
    const SrCurve curve = integrate_sr_ode(R, k, t_min, t_max, tol, max_dt);

    CsvWriter csv(out_dir + "/sr_curve.csv", {"t", "r", "theta", "first_integral_residual"});
    for (const CurveSample& s : curve.samples)
        csv.row({s.t, s.r, s.theta, curve.first_integral_residual(s)});

    CommandResult out;
    out.pass = curve.worst_first_integral <= 10.0 * tol;
    out.report["samples"] = curve.samples.size();
    out.report["worst_first_integral"] = curve.worst_first_integral;
    out.report["asymptotic_angle"] = curve.asymptotic_angle();
    out.report["theta_end"] = curve.samples.back().theta;
    out.report["r_end"] = curve.samples.back().r;
    return out;
}

CommandResult run_certify(const RunConfig& cfg, const std::string&) {
    const WarpingFunction wf = warping_from(cfg);
    const double R = cfg.real_in("r_intersect", 1.0, 1e-8, 1e3);
    const double k = wf.k();
    const double span = cfg.get_real("t_span", 4.0 / k);
    const int nt = int(cfg.int_in("n_t_grid", 200, 2, 100000));
    const int nth = int(cfg.int_in("n_theta_grid", 50, 2, 100000));
    const double tol = cfg.real_in("tol", 1e-8, 0.0, 1.0);
    std::vector<double> t_grid = linspace(-span, span, nt);
    std::vector<double> th_grid(static_cast<std::size_t>(nth));
    for (int j = 0; j < nth; ++j)
        th_grid[std::size_t(j)] = std::numbers::pi * (j + 1) / (nth + 1);
    const ConvexityCertificate cert =
        certify_convexity(wf, R, k, t_grid, th_grid, tol, int(cfg.int_in("n_dim", 2, 2, 16)));
    CommandResult out;
    out.pass = cert.pass;
    out.report["min_h_tt"] = cert.min_h_tt;
    out.report["min_h_ii"] = cert.min_h_ii;
    out.report["grid"] = {cert.grid_t, cert.grid_theta};
    out.report["tol"] = cert.tol;
    out.report["verdict"] = cert.pass ? "pass" : "fail";
    return out;
}

CommandResult run_borbely(const RunConfig& cfg, const std::string& out_dir) {
    const double k = cfg.require_real("k", 1e-3, 64.0);
    const double eps = cfg.require_real("eps", 1e-3, 16.0);
    const double alpha = cfg.real_in("alpha", std::numbers::pi / 4, 1e-6,
                                     std::numbers::pi / 2 - 1e-9);
    const double r0 = cfg.has("r0") ? cfg.get_real("r0") : choose_r0(k, eps, alpha);
    const double r_stop = cfg.get_real("r_stop", r0 + 10.0);
    const long long max_steps = cfg.get_int("max_steps", 2000000);
    const ExhaustionSchedule sch = run_schedule(k, eps, alpha, r0, max_steps, r_stop);

    CsvWriter csv(out_dir + "/borbely_schedule.csv",
                  {"n", "r", "eps_step", "theta_bound", "partial_budget"});
    double partial = 0.0;
    for (const ScheduleStep& st : sch.steps) {
        partial += st.theta_bound;
        csv.row({double(st.n), st.r, st.eps, st.theta_bound, partial});
    }

    CommandResult out;
    out.pass = sch.angle_budget_direct <= sch.angle_budget_bucket + 1e-12;
    out.report["r0"] = r0;
    out.report["beta"] = sch.beta;
    out.report["L"] = sch.L;
    out.report["m"] = sch.m;
    out.report["C_ang"] = sch.C_ang;
    out.report["r_tilde"] = sch.r_tilde;
    out.report["steps"] = sch.step_count;
    out.report["final_r"] = sch.final_r;
    out.report["reached_r_stop"] = sch.reached_r_stop;
    out.report["angle_budget_direct"] = sch.angle_budget_direct;
    out.report["angle_budget_bucket"] = sch.angle_budget_bucket;
    out.report["alpha_admissible"] = sch.alpha_admissible;
    out.report["finite_crossing_log10_steps"] =
        finite_crossing_log10_steps(k, eps, r0, r_stop - r0);
    return out;
}

CommandResult run_solve(const RunConfig& cfg, const std::string& out_dir) {
    const WarpingFunction wf = warping_from(cfg);
    DirichletProblem pb{profile_from(cfg), nullptr, nullptr, {}};
    pb.opts.max_newton = int(cfg.int_in("max_newton", 60, 1, 10000));
    pb.opts.tol_newton = cfg.real_in("tol_newton", 1e-10, 1e-15, 1e-2);

    const bool annulus = cfg.has("r_in");
    double inner = 0.0, outer;
    if (annulus) {
        inner = cfg.require_real("r_in", 1e-9, 1e6);
        outer = cfg.require_real("r_out", inner, 1e6);
        pb.phi_inner = [v = cfg.get_real("u_in", 0.0)](double) { return v; };
        pb.phi = [v = cfg.get_real("u_out", 1.0)](double) { return v; };
    } else {
        outer = cfg.require_real("radius", 1e-9, 1e6);
        Expression phi(cfg.get_string("phi_expr", "cos(t)"));
        pb.phi = [phi](double t) { return phi(t); };
    }
    const int n_r = int(cfg.int_in("n_r", 64, 8, 4096));
    const int n_t = int(cfg.int_in("n_t", 64, 4, 4096));
    PolarGrid grid(wf, inner, outer, n_r, n_t);
    const DiscreteSolution sol = solve_ball(pb, grid);

    CsvWriter csv(out_dir + "/solution.csv", {"r", "t", "u"});
    for (int i = grid.is_ball() ? 1 : 0; i <= n_r; ++i)
        for (int j = 0; j < n_t; ++j)
            csv.row({grid.radius(i), grid.angle(j), sol.value(i, j)});

    const MaxPrincipleReport mp = discrete_max_principle(sol, 100 * pb.opts.tol_newton);
    CommandResult out;
    out.pass = mp.ok;
    out.report["energy"] = sol.energy;
    out.report["newton_iters"] = sol.newton_iters;
    out.report["residual"] = sol.residual_norm;
    out.report["max_principle_ok"] = mp.ok;
    out.report["max_principle_violation"] = mp.worst_violation;
    return out;
}

CommandResult run_cascade(const RunConfig& cfg, const std::string& out_dir) {
    const WarpingFunction wf = warping_from(cfg);
    DirichletProblem pb{profile_from(cfg), nullptr, nullptr, {}};
    pb.opts.max_newton = int(cfg.int_in("max_newton", 60, 1, 10000));
    pb.opts.tol_newton = cfg.real_in("tol_newton", 1e-10, 1e-15, 1e-2);
    Expression phi(cfg.get_string("phi_expr", "cos(t)"));
    pb.phi = [phi](double t) { return phi(t); };

    const std::vector<double> radii = cfg.get_list("radii");
    const int n_r_base = int(cfg.int_in("n_r_base", 48, 8, 4096));
    const int n_t = int(cfg.int_in("n_t", 96, 4, 4096));
    const double tol_cascade = cfg.real_in("tol_cascade", 1e-4, 1e-14, 1.0);
    auto [sol, rep] = exhaustion_solve(pb, wf, radii, n_r_base, n_t, tol_cascade);

    CsvWriter csv(out_dir + "/cascade_solution.csv", {"r", "t", "u"});
    const double dr = radii.back() / sol.n_r;
    for (int i = 1; i <= sol.n_r; ++i)
        for (int j = 0; j < sol.n_t; ++j)
            csv.row({dr * i, 2.0 * std::numbers::pi * j / sol.n_t, sol.value(i, j)});

    double worst_mp = 0.0;
    for (double v : rep.max_principle_violation) worst_mp = std::max(worst_mp, v);
    CommandResult out;
    out.pass = rep.converged && worst_mp <= 100 * pb.opts.tol_newton;
    out.report["radii"] = rep.radii;
    out.report["d"] = rep.d;
    out.report["iters"] = rep.iters;
    out.report["monotone"] = rep.monotone;
    out.report["converged"] = rep.converged;
    out.report["worst_max_principle_violation"] = worst_mp;
    return out;
}

CommandResult run_report(const RunConfig& cfg, const std::string& out_dir) {
    CommandResult out;
    CommandResult prof = run_check_profile(cfg, out_dir);
    CommandResult mani = run_check_manifold(cfg, out_dir);
    CommandResult barr = run_barrier(cfg, out_dir);
    CommandResult curve = run_sr_curve(cfg, out_dir);
    out.report["profile_conditions"] = prof.report;
    out.report["manifold"] = mani.report;
    out.report["barrier"] = barr.report;
    out.report["sr_curve"] = curve.report;
    out.pass = prof.pass && mani.pass && barr.pass && curve.pass;
    out.report["all_pass"] = out.pass;
    return out;
}

} // namespace

RunOutcome run(const RunConfig& cfg, bool quiet) {
    namespace fs = std::filesystem;
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(cfg.output_dir);

    CommandResult result;
    int exit_code = 0;
    try {
        if (cfg.command == "check-profile") result = run_check_profile(cfg, cfg.output_dir);
        else if (cfg.command == "check-manifold") result = run_check_manifold(cfg, cfg.output_dir);
        else if (cfg.command == "barrier") result = run_barrier(cfg, cfg.output_dir);
        else if (cfg.command == "sr-curve") result = run_sr_curve(cfg, cfg.output_dir);
        else if (cfg.command == "certify-convexity") result = run_certify(cfg, cfg.output_dir);
        else if (cfg.command == "borbely") result = run_borbely(cfg, cfg.output_dir);
        else if (cfg.command == "solve") result = run_solve(cfg, cfg.output_dir);
        else if (cfg.command == "cascade") result = run_cascade(cfg, cfg.output_dir);
        else if (cfg.command == "report") result = run_report(cfg, cfg.output_dir);
        else throw config_error("unknown command: " + cfg.command);
        exit_code = result.pass ? 0 : 1;
    } catch (const config_error& e) {
        result.report["error"] = {{"kind", "config"}, {"what", e.what()}};
        exit_code = 2;
    } catch (const nonconvergence_error& e) {
        result.report["error"] = {{"kind", "nonconvergence"},
                                  {"what", e.what()},
                                  {"last_residual", e.last_residual()}};
        exit_code = 3;
    } catch (const integrator_error& e) {
        result.report["error"] = {{"kind", "integrator"},
                                  {"what", e.what()},
                                  {"worst_residual", e.worst_residual()}};
        exit_code = 3;
    } catch (const calibration_error& e) {
        result.report["error"] = {{"kind", "calibration"},
                                  {"what", e.what()},
                                  {"achievable_g0", e.achievable_g0()}};
        exit_code = 1;
    } catch (const std::exception& e) {
        result.report["error"] = {{"kind", "invalid"}, {"what", e.what()}};
        exit_code = 2;
    }

    const auto t1 = std::chrono::steady_clock::now();
    json doc;
    doc["version"] = kVersion;
    doc["config"] = config_echo(cfg);
    doc["wall_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    doc["exit_code"] = exit_code;
    doc["result"] = result.report;

    RunOutcome outcome;
    outcome.exit_code = exit_code;
    outcome.report_path = cfg.output_dir + "/" + cfg.command + "_report.json";
    std::ofstream(outcome.report_path) << doc.dump(2) << "\n";
    if (!quiet) {
        std::cout << cfg.command << ": "
                  << (exit_code == 0 ? "pass" : "fail (exit " + std::to_string(exit_code) + ")")
                  << " -> " << outcome.report_path << "\n";
    }
    return outcome;
}

} // namespace hadlab
