#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hadlab {

enum class WarpingKind { hyperbolic, sinh_scaled, custom };

/// Warping profile f of a rotationally symmetric metric dr^2 + f(r)^2 dw^2.
///
/// hyperbolic(k)   : f = sinh(k r)/k, constant curvature -k^2
/// sinh_scaled(q,k): f = sinh(q r)/q with q >= k, curvature -q^2 <= -k^2
/// custom          : analytic triple (f, f', f''); no symbolic or numeric
///                   differentiation happens here, curvature needs f'' exact.
class WarpingFunction {
public:
    static WarpingFunction hyperbolic(double k, double r_max = 20.0);
    static WarpingFunction sinh_scaled(double q, double k, double r_max = 20.0);
    static WarpingFunction custom(std::function<double(double)> f,
                                  std::function<double(double)> f_prime,
                                  std::function<double(double)> f_double_prime,
                                  double k, double r_max = 20.0,
                                  std::string name = "custom");

    WarpingKind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    double k() const noexcept { return k_; }
    double q() const noexcept { return q_; }
    double r_max() const noexcept { return r_max_; }

    double f(double r) const { return f_(r); }
    double f_prime(double r) const { return f_prime_(r); }
    double f_double_prime(double r) const { return f_double_prime_(r); }

    /// -f''(r)/f(r); throws std::domain_error at the pole (r <= 0).
    double radial_curvature(double r) const;

    /// One-sided pole check at r = 1e-6: f(0)=0, f'(0)=1 within tolerance.
    bool pole_conditions_ok() const;

private:
    WarpingKind kind_ = WarpingKind::custom;
    std::string name_;
    double k_ = 1.0;
    double q_ = 1.0;
    double r_max_ = 20.0;
    std::function<double(double)> f_, f_prime_, f_double_prime_;
};

/// Pointwise margins of the three comparison inequalities
///   f'/f >= k coth(kr),  f >= sinh(kr)/k,  f' >= cosh(kr)
/// over a grid. A negative margin marks a violation (curvature bound broken).
struct ComparisonReport {
    struct Entry {
        bool pass = false;
        double margin = 0.0;
        double argmin_r = 0.0;
    };
    Entry log_derivative; // f'/f - k coth(kr)
    Entry f_lower;        // f - sinh(kr)/k
    Entry fp_lower;       // f' - cosh(kr)
    bool all_pass() const noexcept {
        return log_derivative.pass && f_lower.pass && fp_lower.pass;
    }
};

ComparisonReport comparison_check(const WarpingFunction& wf, const std::vector<double>& grid);

/// Diagonal metric coefficients (g_00, g_11, ..., g_nn) at (r, theta_1..theta_n):
/// g_00 = 1, g_ii = f(r)^2 sin^2(theta_{i+1}) ... sin^2(theta_n) for i < n,
/// g_nn = f(r)^2. Off-diagonals vanish by contract.
std::vector<double> metric_coefficients(const WarpingFunction& wf, double r,
                                        const std::vector<double>& angles);

/// Area of the unit n-sphere (2*pi for n=1, 4*pi for n=2, ...).
double unit_sphere_area(int n);

struct DivergenceResult {
    double partial_integral = 0.0; ///< value at the requested cutoff
    bool diverging = false;        ///< heuristic from cutoff doubling
    double last_relative_growth = 0.0;
    std::vector<double> cutoff_values; ///< integral at r_cut, 2 r_cut, 4 r_cut, ...
};

/// Volume-growth test: integral of dr / area(r)^(1/(p-1)) from s to r_cut,
/// plus a divergence heuristic (flagged when doubling the cutoff still grows
/// the value by more than 1% at the largest tested cutoff). Numerics cannot
/// prove divergence; the flag is a diagnostic.
DivergenceResult divergence_test(const std::function<double(double)>& boundary_area,
                                 double p, double s, double r_cut, int doublings = 4);

/// Same with area(r) = unit_sphere_area(n) * f(r)^n.
DivergenceResult divergence_test(const WarpingFunction& wf, int n, double p, double s,
                                 double r_cut, int doublings = 4);

} // namespace hadlab
