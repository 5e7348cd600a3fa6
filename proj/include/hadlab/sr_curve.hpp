#pragma once

#include <cstddef>
#include <vector>

#include "hadlab/warping.hpp"

namespace hadlab {

/// One dense-output sample of the generating curve.
struct CurveSample {
    double t, r, theta, r_dot, theta_dot;
};

/// Trajectory of the hypersurface-generating system
///   r'     = cosh(kR) sin(theta)
///   theta' = k sinh(kR) / sinh^2(k r),   r(0) = R, theta(0) = 0,
/// integrated in both directions from t = 0. Along exact solutions
/// cos(theta) tanh(kr) = tanh(kR) is conserved; the integrator uses it as an
/// error monitor, never as a projection.
class SrCurve {
public:
    double R = 1.0;
    double k = 1.0;
    double t_min = 0.0;
    double t_max = 0.0;
    double integrator_tol = 1e-10;
    double worst_first_integral = 0.0; ///< max |cos(theta) tanh(kr) - tanh(kR)|
    std::vector<CurveSample> samples;  ///< sorted by t, includes t = 0

    /// First-integral residual at a sample.
    double first_integral_residual(const CurveSample& s) const;

    /// Sample interpolated at t by cubic Hermite between stored samples
    /// (derivatives are exact on the stored nodes). Throws std::domain_error
    /// outside [t_min, t_max].
    CurveSample at(double t) const;

    /// Asymptotic half-angle arccos(tanh(kR)) both branches approach.
    double asymptotic_angle() const;
};

/// Integrates the system with an embedded Runge-Kutta-Fehlberg 4(5) pair and
/// error-per-unit-step control, recording samples at spacing <= max_dt.
/// Throws integrator_error when the first integral drifts past 10 * tol.
SrCurve integrate_sr_ode(double R, double k, double t_min, double t_max,
                         double tol = 1e-10, double max_dt = 0.01);

/// Ambient coordinates (dimension angles.size() + 2) of the hypersurface
/// point at parameter t with free angles theta_1..theta_{n-1}.
std::vector<double> embed_sr(const SrCurve& curve, const std::vector<double>& angles,
                             double t);

/// Unnormalized second-fundamental-form scalars at curve parameter t against
/// the inward normal; positivity certifies convexity of the inner component.
///
///   h_tt = f th' (f f_r th'^2 - r'') + (r'/f) (f^2 th')'
///   h_ii = f^2 * prod_j sin^2(theta_free) * (f_r th' - cosh(kR) cos(theta)/f)
///
/// h_ii entries are indexed i = 1..n-1; the i-th carries n-i sin^2 factors of
/// the free angle. The sign factor uses the on-trajectory identity
/// r' cot(theta) = cosh(kR) cos(theta), which is regular at t = 0.
/// theta_free in {0, pi} degenerates the frame and is rejected.
struct FundamentalForms {
    double h_tt = 0.0;
    std::vector<double> h_ii;
};
FundamentalForms second_fundamental_form(const WarpingFunction& wf, const SrCurve& curve,
                                         double t, double theta_free, int n_dim = 2);

struct ConvexityCertificate {
    double R = 0.0, k = 0.0;
    double min_h_tt = 0.0;
    double min_h_ii = 0.0;
    double max_h_tt = 0.0; ///< for equality-case (flatness) reporting
    double max_h_ii = 0.0;
    std::size_t argmin_tt = 0, argmin_ii = 0; ///< flattened grid indices
    std::size_t grid_t = 0, grid_theta = 0;
    double tol = 1e-8;
    bool pass = false;
};

/// Evaluates the forms over t_grid x theta_grid and records the minima.
/// Requires wf to pass comparison_check first (throws std::invalid_argument
/// otherwise). `parallel` switches the OpenMP kernel; results are identical
/// to the serial reference.
ConvexityCertificate certify_convexity(const WarpingFunction& wf, double R, double k,
                                       const std::vector<double>& t_grid,
                                       const std::vector<double>& theta_grid,
                                       double tol = 1e-8, int n_dim = 2,
                                       bool parallel = true);

/// Witness for the strict-convexity condition at asymptotic half-angle
/// alpha in (0, pi/2): radius R = artanh(cos alpha)/k and its curve.
struct ScWitness {
    double R;
    SrCurve curve;
};
ScWitness sc_witness(const WarpingFunction& wf, double k, double alpha,
                     double tol = 1e-10);

} // namespace hadlab
