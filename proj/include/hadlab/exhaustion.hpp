#pragma once

#include <vector>

namespace hadlab {

/// C^2 quintic smoothstep ramp: 0 on [0, 1/2], 1 on [1, inf), nondecreasing.
/// L bounds both |phi'| and |phi''| (exact maxima of the rescaled smoothstep,
/// cross-checked on a dense grid at construction).
struct BumpFunction {
    double L = 0.0;
    double max_abs_d1 = 0.0; ///< 15/4
    double max_abs_d2 = 0.0; ///< 40/sqrt(3)

    double operator()(double rho) const;
    double d1(double rho) const;
    double d2(double rho) const;
};

BumpFunction build_bump();

/// max{ e^{-kR} R^{1+eps} : R >= 1 }, attained at R* = (1+eps)/k clamped to 1.
double compute_m(double k, double eps);

/// beta = k / (2 L (m (k+1) + coth(k/2))).
double compute_beta(double k, double L, double eps);

/// Step size eps_R = beta R^{1+eps} e^{-kR}.
double epsilon_step(double beta, double k, double eps, double R);

struct HessianCertificate {
    double lower_bound = 0.0;
    bool pass = false;
    double eps_R = 0.0;
};

/// Scalar chain behind the convexity of the shaved ball: with the curvature
/// scale a_R in [k, e^{kR} R^{-(1+eps)}],
///   lower_bound = k (1 - eps_R L) - eps_R L a_R coth(k/2) - eps_R L
/// must stay >= k/2. Preconditions on a_R throw std::invalid_argument.
HessianCertificate hessian_certificate(double k, double L, double eps, double beta,
                                       double R, double a_R);

/// Validity threshold for the viewing-angle bound: the larger of
/// asinh(2 sinh(k)/sqrt(3))/k and ln(2)/(2k).
double theta_r_tilde(double k);

/// Half viewing angle of a unit ball at distance R: arcsin(sinh k / sinh kR),
/// for R >= theta_r_tilde(k). Satisfies theta_R <= 2 sinh k / sinh kR and
/// theta_R <= 8 sinh(k) e^{-kR}.
double theta_r(double k, double R);

struct ScheduleStep {
    int n;
    double r;
    double eps;
    double theta_bound; ///< C_ang e^{-k r_n}
};

struct ExhaustionSchedule {
    double k = 0.0, eps = 0.0, alpha = 0.0;
    double r0 = 0.0;
    double beta = 0.0;
    double L = 0.0;
    double m = 0.0;
    double C_ang = 0.0;    ///< 8 sinh k
    double r_tilde = 0.0;
    std::vector<ScheduleStep> steps;
    bool reached_r_stop = false; ///< false marks a divergence-pace report
    double final_r = 0.0;
    long long step_count = 0;

    /// Executed-step angle sum plus the analytic bucket tail past the last
    /// executed radius.
    double angle_budget_direct = 0.0;
    /// Full bucket bound (C_ang e^k / beta) * sum_n (r0+n)^{-(1+eps)}.
    double angle_budget_bucket = 0.0;
    bool alpha_admissible = false; ///< bucket budget <= alpha
};

/// Runs the radius recursion r_{n+1} = r_n + eps_{r_n} until r >= r_stop or
/// max_steps, recording per-step angle bounds and both budget estimates.
/// keep_steps caps the stored rows (the count and budgets always cover every
/// executed step).
ExhaustionSchedule run_schedule(double k, double eps, double alpha, double r0,
                                long long max_steps, double r_stop,
                                std::size_t keep_steps = 100000);

/// Bucket-bound angle budget as a function of r0 alone (no recursion run).
double bucket_angle_budget(double k, double eps, double r0);

/// Smallest r0 on the grid {r_tilde, r_tilde + 0.5, ...} whose bucket-bound
/// budget is <= alpha. Throws std::runtime_error past a generous cap.
double choose_r0(double k, double eps, double alpha);

/// log10 of the step-count bound for crossing [r0, r0 + delta]: every step
/// there is at least beta r0^{1+eps} e^{-k(r0+delta)}, so the crossing takes
/// finitely many steps. Computed in log space; finite for every r0.
double finite_crossing_log10_steps(double k, double eps, double r0, double delta);

} // namespace hadlab
