#include "hadlab/warping.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hadlab/quadrature.hpp"

namespace hadlab {

WarpingFunction WarpingFunction::hyperbolic(double k, double r_max) {
    if (!(k > 0.0)) throw std::invalid_argument("hyperbolic warping requires k > 0");
    WarpingFunction out;
    out.kind_ = WarpingKind::hyperbolic;
    out.name_ = "hyperbolic";
    out.k_ = k;
    out.q_ = k;
    out.r_max_ = r_max;
    out.f_ = [k](double r) { return std::sinh(k * r) / k; };
    out.f_prime_ = [k](double r) { return std::cosh(k * r); };
    out.f_double_prime_ = [k](double r) { return k * std::sinh(k * r); };
    return out;
}

WarpingFunction WarpingFunction::sinh_scaled(double q, double k, double r_max) {
    if (!(k > 0.0) || !(q >= k))
        throw std::invalid_argument("sinh_scaled warping requires q >= k > 0");
    WarpingFunction out;
    out.kind_ = WarpingKind::sinh_scaled;
    out.name_ = "sinh_scaled";
    out.k_ = k;
    out.q_ = q;
    out.r_max_ = r_max;
    out.f_ = [q](double r) { return std::sinh(q * r) / q; };
    out.f_prime_ = [q](double r) { return std::cosh(q * r); };
    out.f_double_prime_ = [q](double r) { return q * std::sinh(q * r); };
    return out;
}

WarpingFunction WarpingFunction::custom(std::function<double(double)> f,
                                        std::function<double(double)> f_prime,
                                        std::function<double(double)> f_double_prime,
                                        double k, double r_max, std::string name) {
    if (!(k > 0.0)) throw std::invalid_argument("warping requires k > 0");
    WarpingFunction out;
    out.kind_ = WarpingKind::custom;
    out.name_ = std::move(name);
    out.k_ = k;
    out.q_ = k;
    out.r_max_ = r_max;
    out.f_ = std::move(f);
    out.f_prime_ = std::move(f_prime);
    out.f_double_prime_ = std::move(f_double_prime);
    return out;
}

double WarpingFunction::radial_curvature(double r) const {
    if (!(r > 0.0)) throw std::domain_error("radial curvature undefined at the pole");
    return -f_double_prime_(r) / f_(r);
}

bool WarpingFunction::pole_conditions_ok() const {
    const double r0 = 1e-6;
    return std::abs(f_(r0) - r0) <= 1e-4 * r0 + 1e-12 &&
           std::abs(f_prime_(r0) - 1.0) <= 1e-4;
}

ComparisonReport comparison_check(const WarpingFunction& wf, const std::vector<double>& grid) {
    ComparisonReport rep;
    const double k = wf.k();
    bool first = true;
    for (double r : grid) {
        if (!(r > 0.0) || r > wf.r_max()) continue;
        const double f = wf.f(r);
        const double fp = wf.f_prime(r);
        const double m1 = fp / f - k * std::cosh(k * r) / std::sinh(k * r);
        const double m2 = f - std::sinh(k * r) / k;
        const double m3 = fp - std::cosh(k * r);
        if (first || m1 < rep.log_derivative.margin) {
            rep.log_derivative.margin = m1;
            rep.log_derivative.argmin_r = r;
        }
        if (first || m2 < rep.f_lower.margin) {
            rep.f_lower.margin = m2;
            rep.f_lower.argmin_r = r;
        }
        if (first || m3 < rep.fp_lower.margin) {
            rep.fp_lower.margin = m3;
            rep.fp_lower.argmin_r = r;
        }
        first = false;
    }
    if (first) throw std::invalid_argument("comparison grid has no node in (0, r_max]");
    // Equality (hyperbolic case) must count as a pass, hence a small slack
    // scaled to the inequality magnitudes.
    const double slack = 1e-10;
    rep.log_derivative.pass = rep.log_derivative.margin >= -slack * std::max(1.0, k);
    rep.f_lower.pass = rep.f_lower.margin >= -slack * std::max(1.0, wf.f(rep.f_lower.argmin_r));
    rep.fp_lower.pass =
        rep.fp_lower.margin >= -slack * std::max(1.0, wf.f_prime(rep.fp_lower.argmin_r));
    return rep;
}

std::vector<double> metric_coefficients(const WarpingFunction& wf, double r,
                                        const std::vector<double>& angles) {
    if (!(r > 0.0)) throw std::domain_error("metric coefficients need r > 0");
    const std::size_t n = angles.size();
    std::vector<double> g(n + 1, 1.0);
    const double f2 = wf.f(r) * wf.f(r);
    if (n == 0) return g;
    g[n] = f2;
    double tail = 1.0; // running product sin^2(theta_{i+1}) ... sin^2(theta_n)
    for (std::size_t i = n - 1; i >= 1; --i) {
        const double s = std::sin(angles[i]); // angles[i] is theta_{i+1}
        tail *= s * s;
        g[i] = f2 * tail;
    }
    return g;
}

double unit_sphere_area(int n) {
    if (n < 1) throw std::invalid_argument("sphere dimension must be >= 1");
    // |S^n| = 2 pi^((n+1)/2) / Gamma((n+1)/2)
    const double half = 0.5 * (n + 1);
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

DivergenceResult divergence_test(const std::function<double(double)>& boundary_area,
                                 double p, double s, double r_cut, int doublings) {
    if (!(p >= 2.0)) throw std::invalid_argument("divergence test requires p >= 2");
    if (!(s > 0.0) || !(s <= r_cut)) throw std::domain_error("need 0 < s <= r_cut");
    if (!(boundary_area(s) > 0.0))
        throw std::domain_error("boundary area must be positive at the lower limit");

    const double expo = 1.0 / (p - 1.0);
    auto integrand = [&](double r) { return std::pow(boundary_area(r), -expo); };

    DivergenceResult out;
    if (s == r_cut) {
        out.cutoff_values.assign(std::size_t(doublings) + 1, 0.0);
        return out;
    }

    double cutoff = r_cut;
    double prev = 0.0;
    for (int d = 0; d <= doublings; ++d) {
        const double val = integrate(integrand, s, cutoff, 1e-12, 1e-12).value;
        out.cutoff_values.push_back(val);
        if (d == 0) out.partial_integral = val;
        if (d > 0 && prev > 0.0) out.last_relative_growth = (val - prev) / prev;
        prev = val;
        cutoff *= 2.0;
    }
    out.diverging = out.last_relative_growth > 0.01;
    return out;
}

DivergenceResult divergence_test(const WarpingFunction& wf, int n, double p, double s,
                                 double r_cut, int doublings) {
    const double omega = unit_sphere_area(n);
    auto area = [&wf, n, omega](double r) { return omega * std::pow(wf.f(r), n); };
    return divergence_test(area, p, s, r_cut, doublings);
}

} // namespace hadlab
