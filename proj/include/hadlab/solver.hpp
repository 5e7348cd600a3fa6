#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hadlab/barrier.hpp"
#include "hadlab/grid.hpp"
#include "hadlab/profile.hpp"

namespace hadlab {

struct SolverOptions {
    int max_newton = 60;
    double tol_newton = 1e-10;   ///< on the scaled first-order residual
    double damping_floor = 9.5367431640625e-7; ///< 2^-20
    double delta_reg_scale = 1e-8; ///< delta = scale * data range / outer radius
};

/// Dirichlet data for a single solve: either nodal boundary values on the
/// outer ring (and inner ring for an annulus), or angular data phi applied as
/// the radial extension phi(angle).
struct DirichletProblem {
    AProfile profile = AProfile::p_laplacian(2.0);
    std::function<double(double)> phi;        ///< angle -> value
    std::function<double(double)> phi_inner;  ///< annulus inner ring; optional
    SolverOptions opts;
};

struct DiscreteSolution {
    int n_r = 0, n_t = 0;
    bool ball = true;
    double inner_radius = 0.0, outer_radius = 0.0;
    std::vector<double> u;   ///< ring-major nodal values, rings 0..n_r
    double pole_value = 0.0; ///< average of ring 1 (ball only)
    double energy = 0.0;
    double residual_norm = 0.0; ///< scaled, unregularized
    int newton_iters = 0;
    std::vector<double> energy_history; ///< energy after each accepted step

    double value(int i, int j) const;
    double boundary_min = 0.0, boundary_max = 0.0;
};

/// Damped-Newton energy minimization of sum_T w_T A(|grad u|_T) on the grid.
/// p != 2 and minimal profiles warm-start from the harmonic (p = 2) solve.
/// Throws nonconvergence_error when Newton stalls at the damping floor.
DiscreteSolution solve_ball(const DirichletProblem& problem, const PolarGrid& grid,
                            const std::vector<double>* warm_start = nullptr,
                            bool parallel_assembly = true);

/// Discrete maximum principle check: boundary_min - tol <= u <= boundary_max + tol.
struct MaxPrincipleReport {
    bool ok = false;
    double worst_violation = 0.0;
};
MaxPrincipleReport discrete_max_principle(const DiscreteSolution& sol, double tol);

/// Nodewise comparison u <= v + tol. Grids must match (throws
/// std::invalid_argument otherwise); boundary ordering is a precondition.
struct ComparisonResult {
    bool ordered = false;
    double worst_violation = 0.0;
    int worst_i = 0, worst_j = 0;
};
ComparisonResult comparison_check_discrete(const DiscreteSolution& u,
                                           const DiscreteSolution& v, double tol);

/// Exact radial reduction: with n the warped-sphere dimension, radial
/// solutions satisfy f(r)^n a(u'(r)) = c_flux, so
///   u(r) = u_in + integral a^{-1}(c_flux f(t)^{-n}) dt.
/// c_flux is found by monotone bisection to |u(r_out) - u_out| <= 1e-12.
/// Throws infeasibility_error when the required flux exceeds sup a f(r_in)^n.
class RadialSolution {
public:
    double c_flux = 0.0;
    double r_in = 0.0, r_out = 0.0;
    double u_in = 0.0, u_out = 0.0;
    double operator()(double r) const; ///< dense output (Hermite on a fine table)

    std::vector<double> table_r, table_u, table_du;
};
RadialSolution solve_radial(const AProfile& profile, const WarpingFunction& wf, int n,
                            double r_in, double r_out, double u_in, double u_out);

struct CascadeReport {
    std::vector<double> radii;
    std::vector<double> d;       ///< sup difference of consecutive solves on the base ball
    std::vector<int> iters;
    std::vector<double> max_principle_violation;
    bool converged = false;      ///< last d <= tol_cascade
    bool monotone = true;        ///< d nonincreasing up to noise
};

/// Exhaustion run: solves on balls of increasing radius with boundary data
/// phi(angle), comparing consecutive solutions on the smallest ball.
/// Returns the solution on the largest ball plus the convergence report.
std::pair<DiscreteSolution, CascadeReport>
exhaustion_solve(const DirichletProblem& problem, const WarpingFunction& wf,
                 const std::vector<double>& radii, int n_r_base, int n_t,
                 double tol_cascade);

/// Half-plane past the geodesic orthogonal to the ray at angle `angle_x` at
/// parameter distance d0 (hyperbolic warping; closed forms in the disk model).
struct HalfPlane {
    double d0 = 1.0;
    double angle_x = 0.0;
    double k = 1.0;

    /// Signed separation sigma > 0 strictly inside the half-plane.
    double separation(double r, double t) const;
    /// Geodesic distance to the bounding geodesic for points inside.
    double distance(double r, double t) const;
    /// Asymptotic half-width arccos(tanh(k d0)) of the window.
    double window_half_width() const;
};

struct SandwichReport {
    bool pass = false;
    double eps = 0.0;         ///< modulus-of-continuity allowance over the window
    double worst_slack = 0.0; ///< min over checked nodes of eps + Sigma - |u - phi(x)|
    int checked_nodes = 0;
    int worst_i = 0, worst_j = 0;
};

/// Asserts |u(q) - phi(x)| <= eps + Sigma(q) on the solved ball's nodes inside
/// the half-plane window. The BarrierSpec must be calibrated with
/// height_C >= max |phi| (throws std::invalid_argument otherwise).
SandwichReport barrier_sandwich_report(const DiscreteSolution& sol, const PolarGrid& grid,
                                       const BarrierSpec& spec, const HalfPlane& window,
                                       const std::function<double(double)>& phi,
                                       double allowance = 1e-9);

} // namespace hadlab
