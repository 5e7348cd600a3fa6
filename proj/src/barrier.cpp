#include "hadlab/barrier.hpp"

#include <cmath>
#include <stdexcept>

#include "hadlab/errors.hpp"
#include "hadlab/quadrature.hpp"

namespace hadlab {

namespace {

double cosh_pow(double k, int n, double t) {
    // c cosh^{1-n}(kt) evaluated stably: cosh >= 1, exponent 1-n <= -1.
    return std::pow(std::cosh(k * t), 1 - n);
}

} // namespace

double BarrierSpec::tau() const {
    const double delta = profile.growth_delta();
    if (delta >= c) return 0.0;
    // cosh(k tau) = (c/delta)^{1/(n-1)}
    return std::acosh(std::pow(c / delta, 1.0 / (n - 1))) / k;
}

double g_tail_bound(const BarrierSpec& spec, double T) {
    // From a^{-1}(y) <= y^{1/q} on [0, delta] and cosh x >= e^x / 2:
    //   tail(T) <= (2^{n-1} c)^{1/q} * q / (k (n-1)) * exp(-k (n-1) T / q).
    const double q = spec.profile.growth_q();
    const double kn = spec.k * (spec.n - 1);
    return std::pow(std::ldexp(spec.c, spec.n - 1), 1.0 / q) * (q / kn) *
           std::exp(-kn * T / q);
}

double g_eval(const BarrierSpec& spec, double s) {
    if (s < 0.0) throw std::domain_error("g is defined for s >= 0");
    if (!(spec.c > 0.0)) throw std::invalid_argument("barrier constant c must be positive");
    if (!(spec.c < spec.profile.sup_a()))
        throw std::range_error("barrier constant exceeds sup a; profile cannot carry it");
    if (spec.n < 2) throw std::invalid_argument("barrier needs dim >= 2");

    const double abs_tol = spec.quadrature.abs_tol;

    // Truncation point: past tau (so the tail bound applies) and far enough
    // that the bound itself is below half the error budget.
    double T = std::max({spec.quadrature.tail_cut_T, spec.tau() + 1.0, s});
    while (g_tail_bound(spec, T) > 0.5 * abs_tol && T < 1e6) T *= 1.5;
    const double tail = g_tail_bound(spec, T);

    auto integrand = [&spec](double t) {
        return spec.profile.inverse(spec.c * cosh_pow(spec.k, spec.n, t));
    };
    const QuadResult quad =
        integrate(integrand, s, T, 0.5 * abs_tol, spec.quadrature.rel_tol);
    // True value lies in [quad, quad + tail]; report the midpoint.
    return quad.value + 0.5 * tail;
}

double calibrate_c(const BarrierSpec& spec) {
    const double target = 2.0 * spec.height_C;
    const double sup = spec.profile.sup_a();
    const double c0 = spec.profile.evaluate(2.0 * spec.height_C);
    // g(0) is nondecreasing in c, so a monotone scan terminates or proves
    // the target unreachable. Scan decisions only need modest quadrature
    // accuracy (the c grid is geometric); near sup a the integrand grows a
    // spike that makes tight tolerances needlessly expensive.
    BarrierSpec trial = spec;
    trial.quadrature.abs_tol =
        std::max(spec.quadrature.abs_tol, 1e-7 * std::max(1.0, target));
    const double slack = std::max(10.0 * trial.quadrature.abs_tol, 1e-12 * spec.height_C);
    double best_g0 = 0.0;
    double prev_c = -1.0;
    for (int j = 0; j < 300; ++j) {
        double cj;
        if (std::isinf(sup)) {
            cj = c0 * std::pow(2.0, j);
        } else {
            cj = sup - (sup - c0) * std::pow(2.0, -j);
            if (cj >= sup) cj = std::nextafter(sup, 0.0);
        }
        if (cj == prev_c) break; // geometric approach exhausted in doubles
        prev_c = cj;
        trial.c = cj;
        const double g0 = g_eval(trial, 0.0);
        best_g0 = std::max(best_g0, g0);
        if (g0 >= target - slack) return cj;
    }
    throw calibration_error("no admissible barrier constant below sup a reaches g(0) >= 2C"
                            " (best g(0) = " + std::to_string(best_g0) + ")",
                            best_g0);
}

double sigma_eval(const BarrierSpec& spec, std::optional<double> dist_to_boundary) {
    if (!dist_to_boundary.has_value()) return spec.height_C;
    const double d = *dist_to_boundary;
    if (d < 0.0) throw std::domain_error("distance to the boundary must be nonnegative");
    return std::min(g_eval(spec, d), spec.height_C);
}

ResidualReport verify_supersolution(const BarrierSpec& spec, const std::vector<double>& grid,
                                    const std::function<double(double)>& laplacian_s) {
    if (grid.empty()) throw std::invalid_argument("residual grid must be nonempty");
    const double k = spec.k;
    const int n = spec.n;
    const double c = spec.c;
    if (!(c > 0.0)) throw std::invalid_argument("calibrate the spec before verification");

    auto lap = laplacian_s
                   ? laplacian_s
                   : std::function<double(double)>(
                         [k, n](double s) { return (n - 1) * k * std::tanh(k * s); });
    auto flux = [k, n, c](double s) { return c * cosh_pow(k, n, s); };

    ResidualReport rep;
    rep.tol = 1e-10 * c * k;
    bool first = true;
    double max_fd = 0.0;
    for (double s : grid) {
        if (!(s > 0.0)) throw std::domain_error("residual grid must be positive");
        const double ch = std::cosh(k * s);
        const double res =
            (n - 1) * c * k * std::pow(ch, -n) * std::sinh(k * s) - flux(s) * lap(s);
        if (first || res > rep.max_residual) {
            rep.max_residual = res;
            rep.arg_worst_s = s;
        }
        rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(res));
        first = false;

        // Independent route: Q[v] = -(d/ds) flux(s) - flux(s) * laplacian_s.
        const double h = 1e-5 * std::max(1.0, s);
        const double dflux = (flux(s + h) - flux(s - h)) / (2.0 * h);
        const double res_fd = -dflux - flux(s) * lap(s);
        max_fd = std::max(max_fd, std::abs(res_fd - res));
    }
    rep.fd_discrepancy = max_fd;
    rep.pass = rep.max_residual <= rep.tol;
    return rep;
}

std::vector<BarrierTableRow> barrier_table(const BarrierSpec& spec,
                                           const std::vector<double>& grid) {
    std::vector<BarrierTableRow> rows;
    rows.reserve(grid.size());
    const double k = spec.k;
    const int n = spec.n;
    for (double s : grid) {
        BarrierTableRow row;
        row.s = s;
        row.g = g_eval(spec, s);
        row.sigma = std::min(row.g, spec.height_C);
        const double ch = std::cosh(k * s);
        row.residual = (n - 1) * spec.c * k * std::pow(ch, -n) * std::sinh(k * s) -
                       spec.c * cosh_pow(k, n, s) * (n - 1) * k * std::tanh(k * s);
        rows.push_back(row);
    }
    return rows;
}

} // namespace hadlab
