#include "hadlab/exhaustion.hpp"

#include <cmath>
#include <stdexcept>

namespace hadlab {

namespace {

// Quintic smoothstep on [0, 1].
double smoothstep(double x) { return x * x * x * (10.0 + x * (-15.0 + 6.0 * x)); }
double smoothstep_d1(double x) { return 30.0 * x * x * (1.0 - x) * (1.0 - x); }
double smoothstep_d2(double x) { return 60.0 * x * (2.0 * x - 1.0) * (x - 1.0); }

double coth(double x) { return std::cosh(x) / std::sinh(x); }

} // namespace

double BumpFunction::operator()(double rho) const {
    if (rho <= 0.5) return 0.0;
    if (rho >= 1.0) return 1.0;
    return smoothstep(2.0 * rho - 1.0);
}

double BumpFunction::d1(double rho) const {
    if (rho <= 0.5 || rho >= 1.0) return 0.0;
    return 2.0 * smoothstep_d1(2.0 * rho - 1.0);
}

double BumpFunction::d2(double rho) const {
    if (rho <= 0.5 || rho >= 1.0) return 0.0;
    return 4.0 * smoothstep_d2(2.0 * rho - 1.0);
}

BumpFunction build_bump() {
    BumpFunction bump;
    // Chain rule on [1/2, 1]: |phi'| <= 2 * 15/8, |phi''| <= 4 * 10/sqrt(3).
    bump.max_abs_d1 = 2.0 * (15.0 / 8.0);
    bump.max_abs_d2 = 4.0 * (10.0 / std::sqrt(3.0));
    bump.L = std::max(bump.max_abs_d1, bump.max_abs_d2);

    // Cross-check the closed forms on a dense grid.
    double g1 = 0.0, g2 = 0.0;
    const int m = 10000;
    for (int i = 0; i <= m; ++i) {
        const double rho = double(i) / m * 1.5;
        g1 = std::max(g1, std::abs(bump.d1(rho)));
        g2 = std::max(g2, std::abs(bump.d2(rho)));
    }
    if (g1 > bump.max_abs_d1 + 1e-12 || g2 > bump.max_abs_d2 + 1e-9)
        throw std::logic_error("bump derivative bound violated on the check grid");
    return bump;
}

double compute_m(double k, double eps) {
    if (!(k > 0.0) || !(eps > 0.0)) throw std::invalid_argument("need k, eps > 0");
    const double r_star = std::max((1.0 + eps) / k, 1.0);
    return std::exp(-k * r_star) * std::pow(r_star, 1.0 + eps);
}

double compute_beta(double k, double L, double eps) {
    if (!(L > 0.0)) throw std::invalid_argument("need L > 0");
    const double m = compute_m(k, eps);
    return k / (2.0 * L * (m * (k + 1.0) + coth(0.5 * k)));
}

double epsilon_step(double beta, double k, double eps, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("need R > 0");
    return beta * std::pow(R, 1.0 + eps) * std::exp(-k * R);
}

HessianCertificate hessian_certificate(double k, double L, double eps, double beta,
                                       double R, double a_R) {
    if (!(a_R >= k))
        throw std::invalid_argument("a_R must be >= k (curvature below -k^2)");
    const double a_cap = std::exp(k * R) * std::pow(R, -(1.0 + eps));
    if (!(a_R <= a_cap * (1.0 + 1e-12)))
        throw std::invalid_argument("a_R exceeds the admissible decay e^{kR} R^{-(1+eps)}");
    HessianCertificate cert;
    cert.eps_R = epsilon_step(beta, k, eps, R);
    const double eL = cert.eps_R * L;
    cert.lower_bound = k * (1.0 - eL) - eL * a_R * coth(0.5 * k) - eL;
    cert.pass = cert.lower_bound >= 0.5 * k - 1e-12;
    return cert;
}

double theta_r_tilde(double k) {
    return std::max(std::asinh(2.0 * std::sinh(k) / std::sqrt(3.0)) / k,
                    std::log(2.0) / (2.0 * k));
}

double theta_r(double k, double R) {
    if (R < theta_r_tilde(k) - 1e-12)
        throw std::domain_error("theta_R bound is valid only for R >= r_tilde");
    const double ratio = std::sinh(k) / std::sinh(k * R);
    return std::asin(ratio);
}

namespace {

// sum_{j >= j0} (r0 + j)^{-(1+eps)}: explicit terms plus the integral bound
// (r0 + N - 1)^{-eps} / eps for the remainder.
double bucket_series(double r0, double eps, long long j0) {
    double sum = 0.0;
    const long long explicit_terms = 20000;
    long long j = j0;
    for (; j < j0 + explicit_terms; ++j) {
        const double term = std::pow(r0 + double(j), -(1.0 + eps));
        sum += term;
        if (term < 1e-18 * sum) { ++j; break; }
    }
    sum += std::pow(r0 + double(j) - 1.0, -eps) / eps;
    return sum;
}

} // namespace

double bucket_angle_budget(double k, double eps, double r0) {
    const double L = build_bump().L;
    const double beta = compute_beta(k, L, eps);
    const double C_ang = 8.0 * std::sinh(k);
    return C_ang * std::exp(k) / beta * bucket_series(r0, eps, 0);
}

ExhaustionSchedule run_schedule(double k, double eps, double alpha, double r0,
                                long long max_steps, double r_stop,
                                std::size_t keep_steps) {
    ExhaustionSchedule sch;
    sch.k = k;
    sch.eps = eps;
    sch.alpha = alpha;
    sch.r0 = r0;
    sch.r_tilde = theta_r_tilde(k);
    if (r0 < sch.r_tilde - 1e-12)
        throw std::invalid_argument("r0 must be at least r_tilde for the angle bounds");
    const BumpFunction bump = build_bump();
    sch.L = bump.L;
    sch.m = compute_m(k, eps);
    sch.beta = compute_beta(k, sch.L, eps);
    sch.C_ang = 8.0 * std::sinh(k);

    double r = r0;
    double direct = 0.0;
    long long n = 0;
    while (r < r_stop && n < max_steps) {
        const double step = epsilon_step(sch.beta, k, eps, r);
        const double theta_bound = sch.C_ang * std::exp(-k * r);
        direct += theta_bound;
        if (sch.steps.size() < keep_steps)
            sch.steps.push_back({int(n), r, step, theta_bound});
        r += step;
        ++n;
        if (step == 0.0) break; // underflow: the recursion cannot advance in doubles
    }
    sch.final_r = r;
    sch.step_count = n;
    sch.reached_r_stop = r >= r_stop;

    const double scale = sch.C_ang * std::exp(k) / sch.beta;
    // Tail over the unit buckets at and past the last executed radius.
    const long long j_tail = std::max<long long>(0, (long long)std::floor(r - r0));
    sch.angle_budget_direct = direct + scale * bucket_series(r0, eps, j_tail);
    sch.angle_budget_bucket = scale * bucket_series(r0, eps, 0);
    sch.alpha_admissible = sch.angle_budget_bucket <= alpha;
    return sch;
}

double choose_r0(double k, double eps, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("need alpha > 0");
    const double r_tilde = theta_r_tilde(k);
    const double step = 0.5;
    const long long cap = 4'000'000;
    // The bucket budget is strictly decreasing in r0, so binary-search the
    // grid r_tilde + step * j for the first admissible point.
    if (bucket_angle_budget(k, eps, r_tilde) <= alpha) return r_tilde;
    long long lo = 0, hi = 1;
    while (bucket_angle_budget(k, eps, r_tilde + step * double(hi)) > alpha) {
        lo = hi;
        hi *= 2;
        if (hi > cap) throw std::runtime_error("r0 search cap exceeded");
    }
    while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        if (bucket_angle_budget(k, eps, r_tilde + step * double(mid)) <= alpha)
            hi = mid;
        else
            lo = mid;
    }
    return r_tilde + step * double(hi);
}

double finite_crossing_log10_steps(double k, double eps, double r0, double delta) {
    const double L = build_bump().L;
    const double beta = compute_beta(k, L, eps);
    // steps <= delta / min_step, min_step = beta r0^{1+eps} e^{-k(r0+delta)}
    const double log10_min_step =
        (std::log(beta) + (1.0 + eps) * std::log(r0) - k * (r0 + delta)) / std::log(10.0);
    return std::log10(delta) - log10_min_step;
}

} // namespace hadlab
