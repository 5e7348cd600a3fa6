#include "hadlab/sr_curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hadlab/errors.hpp"

namespace hadlab {

namespace {

struct State {
    double r, theta;
};

struct Field {
    double k, coshkR, ksinhkR;
    State operator()(const State& y) const {
        const double sh = std::sinh(k * y.r);
        return {coshkR * std::sin(y.theta), ksinhkR / (sh * sh)};
    }
};

State axpy(const State& y, double a, const State& d) {
    return {y.r + a * d.r, y.theta + a * d.theta};
}

// Dormand-Prince 5(4) embedded pair.
struct DopriStep {
    State y5;
    double err;
};

DopriStep dopri_step(const Field& f, const State& y, double h) {
    const State k1 = f(y);
    const State k2 = f(axpy(y, h * (1.0 / 5), k1));
    State tmp = y;
    tmp = axpy(tmp, h * (3.0 / 40), k1);
    tmp = axpy(tmp, h * (9.0 / 40), k2);
    const State k3 = f(tmp);
    tmp = y;
    tmp = axpy(tmp, h * (44.0 / 45), k1);
    tmp = axpy(tmp, h * (-56.0 / 15), k2);
    tmp = axpy(tmp, h * (32.0 / 9), k3);
    const State k4 = f(tmp);
    tmp = y;
    tmp = axpy(tmp, h * (19372.0 / 6561), k1);
    tmp = axpy(tmp, h * (-25360.0 / 2187), k2);
    tmp = axpy(tmp, h * (64448.0 / 6561), k3);
    tmp = axpy(tmp, h * (-212.0 / 729), k4);
    const State k5 = f(tmp);
    tmp = y;
    tmp = axpy(tmp, h * (9017.0 / 3168), k1);
    tmp = axpy(tmp, h * (-355.0 / 33), k2);
    tmp = axpy(tmp, h * (46732.0 / 5247), k3);
    tmp = axpy(tmp, h * (49.0 / 176), k4);
    tmp = axpy(tmp, h * (-5103.0 / 18656), k5);
    const State k6 = f(tmp);

    State y5 = y;
    y5 = axpy(y5, h * (35.0 / 384), k1);
    y5 = axpy(y5, h * (500.0 / 1113), k3);
    y5 = axpy(y5, h * (125.0 / 192), k4);
    y5 = axpy(y5, h * (-2187.0 / 6784), k5);
    y5 = axpy(y5, h * (11.0 / 84), k6);
    const State k7 = f(y5);

    // 4th-order solution difference (FSAL row).
    const double er = h * (71.0 / 57600 * k1.r - 71.0 / 16695 * k3.r + 71.0 / 1920 * k4.r -
                           17253.0 / 339200 * k5.r + 22.0 / 525 * k6.r - 1.0 / 40 * k7.r);
    const double et = h * (71.0 / 57600 * k1.theta - 71.0 / 16695 * k3.theta +
                           71.0 / 1920 * k4.theta - 17253.0 / 339200 * k5.theta +
                           22.0 / 525 * k6.theta - 1.0 / 40 * k7.theta);
    return {y5, std::hypot(er, et)};
}

} // namespace

double SrCurve::first_integral_residual(const CurveSample& s) const {
    return std::cos(s.theta) * std::tanh(k * s.r) - std::tanh(k * R);
}

double SrCurve::asymptotic_angle() const { return std::acos(std::tanh(k * R)); }

CurveSample SrCurve::at(double t) const {
    if (t < t_min - 1e-12 || t > t_max + 1e-12)
        throw std::domain_error("curve parameter outside the integrated span");
    t = std::clamp(t, samples.front().t, samples.back().t);
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const CurveSample& s, double v) { return s.t < v; });
    if (it == samples.begin()) return samples.front();
    if (it == samples.end()) return samples.back();
    const CurveSample& b = *it;
    const CurveSample& a = *(it - 1);
    if (b.t == t) return b;

    const double h = b.t - a.t;
    const double u = (t - a.t) / h;
    auto hermite = [h, u](double ya, double yb, double da, double db, double& val,
                          double& slope) {
        const double u2 = u * u, u3 = u2 * u;
        val = (2 * u3 - 3 * u2 + 1) * ya + (u3 - 2 * u2 + u) * h * da +
              (-2 * u3 + 3 * u2) * yb + (u3 - u2) * h * db;
        slope = ((6 * u2 - 6 * u) * ya + (3 * u2 - 4 * u + 1) * h * da +
                 (-6 * u2 + 6 * u) * yb + (3 * u2 - 2 * u) * h * db) /
                h;
    };
    CurveSample out;
    out.t = t;
    hermite(a.r, b.r, a.r_dot, b.r_dot, out.r, out.r_dot);
    hermite(a.theta, b.theta, a.theta_dot, b.theta_dot, out.theta, out.theta_dot);
    return out;
}

SrCurve integrate_sr_ode(double R, double k, double t_min, double t_max, double tol,
                         double max_dt) {
    if (!(R > 0.0) || !(k > 0.0)) throw std::invalid_argument("need R > 0 and k > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("need tol > 0");
    if (t_min > 0.0 || t_max < 0.0)
        throw std::invalid_argument("span must contain t = 0");

    SrCurve curve;
    curve.R = R;
    curve.k = k;
    curve.t_min = t_min;
    curve.t_max = t_max;
    curve.integrator_tol = tol;

    const Field field{k, std::cosh(k * R), k * std::sinh(k * R)};
    const double span = t_max - t_min;
    const double fi_ref = std::tanh(k * R);

    auto push_sample = [&](std::vector<CurveSample>& dst, double t, const State& y) {
        const State d = field(y);
        dst.push_back({t, y.r, y.theta, d.r, d.theta});
        const double res = std::cos(y.theta) * std::tanh(k * y.r) - fi_ref;
        curve.worst_first_integral = std::max(curve.worst_first_integral, std::abs(res));
    };

    auto march = [&](double t_end) {
        std::vector<CurveSample> branch;
        State y{R, 0.0};
        double t = 0.0;
        push_sample(branch, t, y);
        if (t_end == 0.0) return branch;
        const double dir = t_end > 0.0 ? 1.0 : -1.0;
        double h = dir * std::min(max_dt, 1e-3);
        int rejected_in_row = 0;
        while (dir * (t_end - t) > 0.0) {
            if (dir * (t + h) > dir * t_end) h = t_end - t;
            const DopriStep step = dopri_step(field, y, h);
            // Error-per-unit-step: local budget proportional to the step so
            // the accumulated drift stays near tol over the whole span.
            const double budget = tol * std::abs(h) / span;
            if (step.err <= budget || std::abs(h) <= 1e-14 * span) {
                t += h;
                y = step.y5;
                push_sample(branch, t, y);
                rejected_in_row = 0;
            } else if (++rejected_in_row > 200) {
                throw integrator_error("step size control stalled", step.err);
            }
            const double scale =
                step.err > 0.0 ? 0.9 * std::pow(budget / step.err, 0.25) : 5.0;
            h *= std::clamp(scale, 0.2, 5.0);
            if (std::abs(h) > max_dt) h = dir * max_dt;
            if (branch.size() > 50'000'000)
                throw integrator_error("sample budget exhausted", 0.0);
        }
        return branch;
    };

    std::vector<CurveSample> fwd = march(t_max);
    std::vector<CurveSample> bwd = march(t_min);
    std::reverse(bwd.begin(), bwd.end());
    if (!bwd.empty()) bwd.pop_back(); // drop duplicate t = 0
    curve.samples = std::move(bwd);
    curve.samples.insert(curve.samples.end(), fwd.begin(), fwd.end());

    if (curve.worst_first_integral > 10.0 * tol)
        throw integrator_error("first integral drifted beyond 10 * tol",
                               curve.worst_first_integral);
    return curve;
}

std::vector<double> embed_sr(const SrCurve& curve, const std::vector<double>& angles,
                             double t) {
    const CurveSample s = curve.at(t);
    std::vector<double> full(angles);
    full.push_back(s.theta);
    const std::size_t m = full.size();
    std::vector<double> x(m + 1);
    double sin_tail = 1.0; // running product of sines from the back
    x[m] = s.r * std::cos(full[m - 1]);
    for (std::size_t i = m - 1; i > 0; --i) {
        sin_tail *= std::sin(full[i]);
        x[i] = s.r * std::cos(full[i - 1]) * sin_tail;
    }
    sin_tail *= std::sin(full[0]);
    x[0] = s.r * sin_tail;
    return x;
}

namespace {

struct FormContext {
    double k, R, coshkR;
};

// Per-parameter ingredients shared by h_tt and every h_ii entry.
struct FormAtT {
    double h_tt;
    double f2;          // f(r)^2
    double sign_factor; // f_r th' - cosh(kR) cos(theta) / f
};

FormAtT forms_at(const WarpingFunction& wf, const FormContext& cx, const CurveSample& s0) {
    // Re-derive the velocities from (r, theta); on the trajectory these are
    // exact and keep the flatness identity tight under interpolation.
    const double k = cx.k;
    const double sh = std::sinh(k * s0.r);
    const double r_dot = cx.coshkR * std::sin(s0.theta);
    const double th_dot = k * std::sinh(k * cx.R) / (sh * sh);
    const double r_ddot = cx.coshkR * std::cos(s0.theta) * th_dot;
    const double th_ddot = -2.0 * r_dot * th_dot * k * (std::cosh(k * s0.r) / sh);

    const double f = wf.f(s0.r);
    const double fr = wf.f_prime(s0.r);

    FormAtT out;
    out.f2 = f * f;
    const double ft2_prime = 2.0 * f * fr * r_dot * th_dot + f * f * th_ddot;
    out.h_tt = f * th_dot * (f * fr * th_dot * th_dot - r_ddot) + (r_dot / f) * ft2_prime;
    // r' cot(theta) = cosh(kR) cos(theta) on the trajectory, which removes
    // the 0/0 at t = 0.
    out.sign_factor = fr * th_dot - cx.coshkR * std::cos(s0.theta) / f;
    return out;
}

} // namespace

FundamentalForms second_fundamental_form(const WarpingFunction& wf, const SrCurve& curve,
                                         double t, double theta_free, int n_dim) {
    if (n_dim < 2) throw std::invalid_argument("ambient dimension must be >= 3 (n >= 2)");
    if (!(theta_free > 0.0) || !(theta_free < std::numbers::pi))
        throw std::domain_error("coordinate frame degenerates at theta in {0, pi}");
    const FormContext cx{curve.k, curve.R, std::cosh(curve.k * curve.R)};
    const FormAtT ft = forms_at(wf, cx, curve.at(t));

    FundamentalForms out;
    out.h_tt = ft.h_tt;
    const double s2 = std::sin(theta_free) * std::sin(theta_free);
    out.h_ii.resize(std::size_t(n_dim) - 1);
    double prod = 1.0;
    // entry i = n-1 carries one sin^2 factor, i = n-2 two, and so on
    for (int i = n_dim - 1; i >= 1; --i) {
        prod *= s2;
        out.h_ii[std::size_t(i) - 1] = ft.f2 * prod * ft.sign_factor;
    }
    return out;
}

namespace {

struct MinLoc {
    double value = std::numeric_limits<double>::infinity();
    std::size_t index = 0;
    void consider(double v, std::size_t i) {
        if (v < value || (v == value && i < index)) {
            value = v;
            index = i;
        }
    }
    void merge(const MinLoc& o) { consider(o.value, o.index); }
};

} // namespace

ConvexityCertificate certify_convexity(const WarpingFunction& wf, double R, double k,
                                       const std::vector<double>& t_grid,
                                       const std::vector<double>& theta_grid,
                                       double tol, int n_dim, bool parallel) {
    if (t_grid.empty() || theta_grid.empty())
        throw std::invalid_argument("certificate grids must be nonempty");
    {
        std::vector<double> probe;
        const int m = 400;
        for (int i = 1; i <= m; ++i) probe.push_back(wf.r_max() * i / m);
        if (!comparison_check(wf, probe).all_pass())
            throw std::invalid_argument(
                "warping fails the curvature comparison bound; certificate preconditions "
                "not met");
    }
    for (double th : theta_grid)
        if (!(th > 0.0) || !(th < std::numbers::pi))
            throw std::domain_error("theta grid must stay inside (0, pi)");

    const auto [lo, hi] = std::minmax_element(t_grid.begin(), t_grid.end());
    const SrCurve curve =
        integrate_sr_ode(R, k, std::min(*lo, 0.0), std::max(*hi, 0.0), 1e-12, 0.005);
    const FormContext cx{k, R, std::cosh(k * R)};

    const std::size_t nt = t_grid.size();
    const std::size_t nth = theta_grid.size();
    std::vector<FormAtT> per_t(nt);

    MinLoc min_tt, min_ii;
    double max_tt = -std::numeric_limits<double>::infinity();
    double max_ii = -std::numeric_limits<double>::infinity();

#ifdef _OPENMP
    if (parallel) {
        #pragma omp parallel
        {
            MinLoc loc_tt, loc_ii;
            double loc_max_tt = -std::numeric_limits<double>::infinity();
            double loc_max_ii = loc_max_tt;
            #pragma omp for nowait schedule(static)
            for (std::ptrdiff_t it = 0; it < std::ptrdiff_t(nt); ++it) {
                per_t[it] = forms_at(wf, cx, curve.at(t_grid[it]));
                loc_tt.consider(per_t[it].h_tt, std::size_t(it));
                loc_max_tt = std::max(loc_max_tt, per_t[it].h_tt);
            }
            #pragma omp barrier
            #pragma omp for nowait schedule(static)
            for (std::ptrdiff_t cell = 0; cell < std::ptrdiff_t(nt * nth); ++cell) {
                const std::size_t it = std::size_t(cell) / nth;
                const std::size_t jt = std::size_t(cell) % nth;
                const double s = std::sin(theta_grid[jt]);
                double prod = 1.0;
                for (int i = n_dim - 1; i >= 1; --i) {
                    prod *= s * s;
                    const double v = per_t[it].f2 * prod * per_t[it].sign_factor;
                    loc_ii.consider(v, std::size_t(cell));
                    loc_max_ii = std::max(loc_max_ii, v);
                }
            }
            #pragma omp critical
            {
                min_tt.merge(loc_tt);
                min_ii.merge(loc_ii);
                max_tt = std::max(max_tt, loc_max_tt);
                max_ii = std::max(max_ii, loc_max_ii);
            }
        }
    } else
#endif
    {
        (void)parallel;
        for (std::size_t it = 0; it < nt; ++it) {
            per_t[it] = forms_at(wf, cx, curve.at(t_grid[it]));
            min_tt.consider(per_t[it].h_tt, it);
            max_tt = std::max(max_tt, per_t[it].h_tt);
        }
        for (std::size_t cell = 0; cell < nt * nth; ++cell) {
            const std::size_t it = cell / nth;
            const std::size_t jt = cell % nth;
            const double s = std::sin(theta_grid[jt]);
            double prod = 1.0;
            for (int i = n_dim - 1; i >= 1; --i) {
                prod *= s * s;
                const double v = per_t[it].f2 * prod * per_t[it].sign_factor;
                min_ii.consider(v, cell);
                max_ii = std::max(max_ii, v);
            }
        }
    }

    ConvexityCertificate cert;
    cert.R = R;
    cert.k = k;
    cert.min_h_tt = min_tt.value;
    cert.min_h_ii = min_ii.value;
    cert.max_h_tt = max_tt;
    cert.max_h_ii = max_ii;
    cert.argmin_tt = min_tt.index;
    cert.argmin_ii = min_ii.index;
    cert.grid_t = nt;
    cert.grid_theta = nth;
    cert.tol = tol;
    cert.pass = cert.min_h_tt >= -tol && cert.min_h_ii >= -tol;
    return cert;
}

ScWitness sc_witness(const WarpingFunction& wf, double k, double alpha, double tol) {
    if (!(alpha > 0.0) || !(alpha < 0.5 * std::numbers::pi))
        throw std::domain_error("asymptotic half-angle must lie in (0, pi/2)");
    {
        std::vector<double> probe;
        const int m = 200;
        for (int i = 1; i <= m; ++i) probe.push_back(wf.r_max() * i / m);
        if (!comparison_check(wf, probe).all_pass())
            throw std::invalid_argument("warping violates the curvature bound -k^2");
    }
    const double R = std::atanh(std::cos(alpha)) / k;
    const double t_end = R + 22.0 / k;
    return {R, integrate_sr_ode(R, k, -t_end, t_end, tol, 0.01)};
}

} // namespace hadlab
