// Acceptance suite: runs every shipped correctness criterion end to end and
// prints one pass/fail line each. Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "hadlab/barrier.hpp"
#include "hadlab/exhaustion.hpp"
#include "hadlab/solver.hpp"
#include "hadlab/sr_curve.hpp"
#include "hadlab/warping.hpp"
#include "support/oracles.hpp"

using namespace hadlab;

namespace {

const double pi = std::numbers::pi;

struct Criterion {
    int id;
    std::string label;
    std::function<bool(std::string&)> body;
};

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[std::size_t(i)] = lo + (hi - lo) * i / (n - 1);
    return g;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------- criteria

bool c1_first_integral(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double R : {0.5, 1.0, 2.0})
        for (double k : {0.5, 1.0, 2.0}) {
            const SrCurve c = integrate_sr_ode(R, k, -20.0 / k, 20.0 / k, 1e-10, 0.01);
            worst = std::max(worst, c.worst_first_integral);
        }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail = fmt("max residual %.3g (tol 1e-9), %.2f s (limit 1)", worst, secs);
    return worst <= 1e-9 && secs < 1.0;
}

bool c2_asymptotic_angle(std::string& detail) {
    double worst = 0.0;
    for (double R : {0.5, 1.0, 2.0})
        for (double k : {0.5, 1.0, 2.0}) {
            const SrCurve c = integrate_sr_ode(R, k, 0.0, R + 21.0 / k, 1e-10, 0.01);
            const CurveSample end = c.samples.back();
            if (end.r < R + 20.0 / k) {
                detail = "span never reached r >= R + 20/k";
                return false;
            }
            worst = std::max(worst, std::abs(end.theta - c.asymptotic_angle()));
        }
    detail = fmt("max |theta_end - arccos(tanh kR)| = %.3g (tol 1e-4)", worst);
    return worst <= 1e-4;
}

bool c3_hyperbolic_flatness(std::string& detail) {
    const auto cert = certify_convexity(WarpingFunction::hyperbolic(1.0), 1.0, 1.0,
                                        linspace(-4.0, 4.0, 200),
                                        [] {
                                            std::vector<double> th;
                                            for (int j = 1; j <= 50; ++j)
                                                th.push_back(pi * j / 51);
                                            return th;
                                        }(),
                                        1e-9);
    const double worst = std::max({std::abs(cert.min_h_tt), std::abs(cert.max_h_tt),
                                   std::abs(cert.min_h_ii), std::abs(cert.max_h_ii)});
    detail = fmt("max |form scalar| = %.3g on 200x50 (tol 1e-9)", worst);
    return worst <= 1e-9;
}

bool c4_convexity_certificates(std::string& detail) {
    double least = std::numeric_limits<double>::infinity();
    for (double q : {1.5, 2.0})
        for (double R : {1.0, 2.0}) {
            const auto cert = certify_convexity(WarpingFunction::sinh_scaled(q, 1.0), R,
                                                1.0, linspace(-4.0, 4.0, 200),
                                                [] {
                                                    std::vector<double> th;
                                                    for (int j = 1; j <= 50; ++j)
                                                        th.push_back(pi * j / 51);
                                                    return th;
                                                }(),
                                                1e-8);
            if (!cert.pass) {
                detail = fmt("certificate failed at q=%.1f R=%.0f", q, R);
                return false;
            }
            least = std::min({least, cert.min_h_tt, cert.min_h_ii});
        }
    detail = fmt("all pass; smallest scalar %.3g > 0", least);
    return least > 0.0;
}

bool c5_comparison_inequalities(std::string& detail) {
    std::vector<double> grid;
    for (int i = 1; i <= 1000; ++i) grid.push_back(10.0 * i / 1000);
    double eq_worst = 0.0;
    for (double k : {0.5, 1.0, 2.0}) {
        const auto rep = comparison_check(WarpingFunction::hyperbolic(k), grid);
        if (!rep.all_pass()) {
            detail = fmt("hyperbolic k=%.1f failed", k);
            return false;
        }
        // equality case: margins vanish relative to the functions' size
        eq_worst = std::max(eq_worst, std::abs(rep.log_derivative.margin));
        eq_worst = std::max(eq_worst, std::abs(rep.f_lower.margin) /
                                          (std::sinh(10.0 * k) / k));
        eq_worst = std::max(eq_worst, std::abs(rep.fp_lower.margin) / std::cosh(10.0 * k));
    }
    for (double q : {1.5, 2.0}) {
        const auto rep = comparison_check(WarpingFunction::sinh_scaled(q, 1.0), grid);
        if (!rep.all_pass()) {
            detail = fmt("sinh_scaled q=%.1f failed", q);
            return false;
        }
    }
    detail = fmt("all inequalities hold; equality deviation %.3g (tol 1e-10)", eq_worst);
    return eq_worst <= 1e-10;
}

bool c6_barrier_residual(std::string& detail) {
    double worst_res = 0.0, worst_tail = 0.0;
    for (int n : {2, 3})
        for (int which : {0, 1}) {
            BarrierSpec spec;
            spec.profile = which ? AProfile::minimal() : AProfile::p_laplacian(2.0);
            spec.k = 1.0;
            spec.n = n;
            spec.height_C = which ? 0.3 : 1.0;
            spec.c = calibrate_c(spec);
            const double g0 = g_eval(spec, 0.0);
            if (g0 < 2.0 * spec.height_C - 1e-9) {
                detail = fmt("g(0)=%.6f below 2C for %s n=%d", g0,
                             spec.profile.name().c_str(), n);
                return false;
            }
            std::vector<double> grid;
            for (int i = 1; i <= 400; ++i) grid.push_back(12.0 * i / 400);
            const ResidualReport rep = verify_supersolution(spec, grid);
            worst_res = std::max(worst_res, rep.max_abs_residual);
            BarrierSpec doubled = spec;
            doubled.quadrature.tail_cut_T *= 2.0;
            for (double s : {0.0, 1.0})
                worst_tail =
                    std::max(worst_tail, std::abs(g_eval(spec, s) - g_eval(doubled, s)));
        }
    detail = fmt("residual %.3g (tol 1e-12), tail-doubling drift %.3g (tol 1e-10)",
                 worst_res, worst_tail);
    return worst_res <= 1e-12 && worst_tail <= 1e-10;
}

bool c7_radial_oracle(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto wf = WarpingFunction::hyperbolic(1.0);
    PolarGrid grid(wf, 1.0, 2.0, 256, 16);
    double worst = 0.0;
    for (int which = 0; which < 4; ++which) {
        const AProfile pr = which < 3 ? AProfile::p_laplacian(which == 0 ? 1.5
                                                              : which == 1 ? 2.0
                                                                           : 3.0)
                                      : AProfile::minimal();
        const double u_out = which == 3 ? 0.8 : 1.0;
        DirichletProblem pb;
        pb.profile = pr;
        pb.phi = [u_out](double) { return u_out; };
        pb.phi_inner = [](double) { return 0.0; };
        const DiscreteSolution sol = solve_ball(pb, grid);
        const RadialSolution rs = solve_radial(pr, wf, 1, 1.0, 2.0, 0.0, u_out);
        for (int i = 1; i < grid.n_r(); ++i)
            worst = std::max(worst, std::abs(sol.value(i, 0) - rs(grid.radius(i))));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail = fmt("max |2D - radial| = %.3g (tol 1e-4), %.1f s (limit 10)", worst, secs);
    return worst <= 1e-4 && secs < 10.0;
}

double harmonic_ball_error(int n_r, int n_t) {
    const auto wf = WarpingFunction::hyperbolic(1.0);
    PolarGrid grid(wf, 0.0, 2.0, n_r, n_t);
    DirichletProblem pb;
    pb.profile = AProfile::p_laplacian(2.0);
    pb.phi = [](double t) { return std::cos(t); };
    const DiscreteSolution sol = solve_ball(pb, grid);
    double worst = 0.0;
    for (int i = 1; i <= grid.n_r(); ++i)
        for (int j = 0; j < grid.n_t(); ++j) {
            const double exact =
                std::tanh(0.5 * grid.radius(i)) / std::tanh(1.0) * std::cos(grid.angle(j));
            worst = std::max(worst, std::abs(sol.value(i, j) - exact));
        }
    return worst;
}

bool c8_harmonic_oracle(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const double e1 = harmonic_ball_error(128, 256);
    const double e2 = harmonic_ball_error(256, 512);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double order = std::log2(e1 / e2);
    detail = fmt("error %.3g (tol 1e-2), refined %.3g, order %.2f (need >= 1), %.0f s "
                 "(limit 60)",
                 e1, e2, order, secs);
    return e1 <= 1e-2 && order >= 1.0 && secs < 60.0;
}

bool c9_exhaustion_stability(std::string& detail) {
    // Exact disk-model solutions give d_3 = tanh(1) (coth(2) - coth(2.5))
    // ~= 1.81e-2 for p = 2; the 1e-2 target is checked as stated and the
    // measured values are reported either way.
    const double d3_closed =
        std::tanh(1.0) * (std::cosh(2.0) / std::sinh(2.0) - std::cosh(2.5) / std::sinh(2.5));
    std::string parts;
    bool ok = true;
    const auto wf = WarpingFunction::hyperbolic(1.0);
    for (int which = 0; which < 2; ++which) {
        DirichletProblem pb;
        pb.profile = which ? AProfile::minimal() : AProfile::p_laplacian(2.0);
        pb.phi = [](double t) { return std::cos(t); };
        const auto [sol, rep] = exhaustion_solve(pb, wf, {2.0, 3.0, 4.0, 5.0}, 48, 96,
                                                 1e-2);
        bool decreasing = true;
        for (std::size_t i = 1; i < rep.d.size(); ++i)
            decreasing = decreasing && rep.d[i] < rep.d[i - 1];
        double mp = 0.0;
        for (double v : rep.max_principle_violation) mp = std::max(mp, v);
        const bool this_ok = decreasing && rep.d.back() <= 1e-2 && mp <= 1e-8;
        parts += fmt("%s%s: d = {%.3g, %.3g, %.3g}%s mp %.1g", which ? "; " : "",
                     which ? "minimal" : "p=2", rep.d[0], rep.d[1], rep.d[2],
                     decreasing ? " (decreasing)" : " (NOT decreasing)", mp);
        ok = ok && this_ok;
    }
    detail = parts + fmt(" | need d_3 <= 1e-2; exact p=2 value tanh(1)(coth 2 - coth 2.5)"
                         " = %.4g already exceeds it",
                         d3_closed);
    return ok;
}

bool c10_barrier_sandwich(std::string& detail) {
    const auto wf = WarpingFunction::hyperbolic(1.0);
    PolarGrid grid(wf, 0.0, 4.0, 96, 192);
    const HalfPlane window{std::atanh(std::cos(pi / 4)), 0.0, 1.0};
    std::string parts;
    bool ok = true;
    for (int which = 0; which < 2; ++which) {
        DirichletProblem pb;
        pb.profile = which ? AProfile::minimal() : AProfile::p_laplacian(2.0);
        pb.phi = [](double t) { return std::cos(t); };
        const DiscreteSolution sol = solve_ball(pb, grid);
        BarrierSpec spec;
        spec.profile = pb.profile;
        spec.k = 1.0;
        spec.n = 2;
        spec.height_C = 1.0;
        spec.c = calibrate_c(spec);
        const SandwichReport rep = barrier_sandwich_report(
            sol, grid, spec, window, [](double t) { return std::cos(t); });
        parts += fmt("%s%s: %d nodes, worst slack %.3g", which ? "; " : "",
                     which ? "minimal" : "p=2", rep.checked_nodes, rep.worst_slack);
        ok = ok && rep.pass;
    }
    detail = parts;
    return ok;
}

bool c11_borbely_skeleton(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const double k = 1.0, eps = 1.0, alpha = pi / 4;
    const double L = build_bump().L;
    const double beta = compute_beta(k, L, eps);

    // (i) finitely many steps across [r0, r0+10]: the chosen r0 makes the
    // steps underflow doubles, so finiteness is certified by the Claim-3
    // lower bound on the step size (log10 of the step-count bound below);
    // a desk-scale run validates the certificate against a live crossing.
    const double r0 = choose_r0(k, eps, alpha);
    const double lg_bound = finite_crossing_log10_steps(k, eps, r0, 10.0);
    const bool i_cert = std::isfinite(lg_bound) && lg_bound > 0.0;
    const ExhaustionSchedule live = run_schedule(k, eps, alpha, 10.0, 100'000'000, 13.0);
    const bool i_live =
        live.reached_r_stop &&
        double(live.step_count) <= std::pow(10.0, finite_crossing_log10_steps(k, eps, 10.0, 3.0));

    // (ii) Hessian chain at the extreme admissible curvature
    bool ii_ok = true;
    for (int i = 0; i <= 300; ++i) {
        const double R = std::pow(50.0, i / 300.0);
        const double aR = std::max(std::exp(k * R) * std::pow(R, -(1.0 + eps)), k);
        ii_ok = ii_ok && hessian_certificate(k, L, eps, beta, R, aR).pass;
    }

    // (iii) budgets at the chosen r0
    const ExhaustionSchedule sch = run_schedule(k, eps, alpha, r0, 1000, r0 + 10.0);
    const bool iii_ok = sch.angle_budget_direct <= sch.angle_budget_bucket + 1e-12 &&
                        sch.angle_budget_bucket <= alpha;

    // (iv) viewing-angle bounds across the validity range
    bool iv_ok = true;
    for (double kk : {0.5, 1.0, 2.0})
        for (double R = theta_r_tilde(kk); R <= 30.0 / kk; R += 0.25 / kk) {
            const double th = theta_r(kk, R);
            iv_ok = iv_ok && th <= 2.0 * std::sinh(kk) / std::sinh(kk * R) + 1e-15 &&
                    th <= 8.0 * std::sinh(kk) * std::exp(-kk * R) + 1e-15;
        }

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail = fmt("(i) r0 = %.1f, crossing steps <= 1e%.0f (finite; live check at r0=10: "
                 "%lld steps) (ii) chain >= k/2 on [1,50] %s (iii) direct %.4f <= bucket "
                 "%.4f <= alpha %.4f (iv) bounds hold %s | %.2f s (limit 1)",
                 r0, lg_bound, (long long)live.step_count, ii_ok ? "yes" : "NO",
                 sch.angle_budget_direct, sch.angle_budget_bucket, alpha,
                 iv_ok ? "yes" : "NO", secs);
    return i_cert && i_live && ii_ok && iii_ok && iv_ok && secs < 1.0;
}

bool c12_divergence_diagnostic(std::string& detail) {
    const DivergenceResult slow = divergence_test(
        [](double r) { return r * std::log(r); }, 2.0, std::numbers::e, 64.0);
    const double loglog_err =
        std::abs(slow.partial_integral - std::log(std::log(64.0)));

    const DivergenceResult hyp =
        divergence_test(WarpingFunction::hyperbolic(1.0), 1, 2.0, 1.0, 50.0);
    const auto& v = hyp.cutoff_values;
    const double drift = std::abs(v[v.size() - 1] - v[v.size() - 2]);

    detail = fmt("r log r: diverging=%d (loglog err %.2g); hyperbolic: diverging=%d, "
                 "doubling drift %.3g (tol 1e-10)",
                 int(slow.diverging), loglog_err, int(hyp.diverging), drift);
    return slow.diverging && loglog_err <= 1e-9 && !hyp.diverging && drift <= 1e-10;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "SR ODE first integral", c1_first_integral},
        {2, "asymptotic angle", c2_asymptotic_angle},
        {3, "hyperbolic flatness", c3_hyperbolic_flatness},
        {4, "convexity certificates", c4_convexity_certificates},
        {5, "comparison inequalities", c5_comparison_inequalities},
        {6, "barrier residual + calibration", c6_barrier_residual},
        {7, "radial oracle equivalence", c7_radial_oracle},
        {8, "harmonic oracle convergence", c8_harmonic_oracle},
        {9, "exhaustion stability", c9_exhaustion_stability},
        {10, "barrier sandwich", c10_barrier_sandwich},
        {11, "convex exhaustion skeleton", c11_borbely_skeleton},
        {12, "volume-growth divergence diagnostic", c12_divergence_diagnostic},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!ok) ++failed;
        std::printf("[%2d] %s  %-38s %s\n", c.id, ok ? "PASS" : "FAIL", c.label.c_str(),
                    detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed,
                criteria.size());
    return failed;
}
