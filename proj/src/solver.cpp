#include "hadlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "hadlab/errors.hpp"
#include "hadlab/quadrature.hpp"

namespace hadlab {

namespace {

// Energy density A with A' = a, per profile kind.
struct EnergyDensity {
    const AProfile* profile;

    double A(double s) const {
        switch (profile->kind()) {
        case ProfileKind::p_laplacian: {
            const double p = profile->p();
            return std::pow(s, p) / p;
        }
        case ProfileKind::minimal:
            return std::sqrt(1.0 + s * s);
        default:
            // Generic profiles integrate a numerically; only used off the
            // hot paths (presets cover the lab's solves).
            return integrate([this](double x) { return profile->evaluate(x); }, 0.0, s,
                             1e-12, 1e-12)
                .value;
        }
    }
    double a(double s) const { return profile->evaluate(s); }
    double a_prime(double s) const { return profile->derivative(s); }
};

// One P1 triangle with legs along the grid axes. Gradient components are the
// one-sided differences on the two legs:
//   G1 = (U[rp] - U[rm]) / dr,   G2 = (U[tp] - U[tm]) / (dt * f_leg).
// The angular metric factor is sampled at the leg's own radius and the
// volume weight integrates f over the triangle's half-cell
// [r_leg, r_leg +- dr/2]. For the p = 2 energy this reduces to the classic
// dual-cell flux scheme, which stays second-order consistent up to the pole;
// centroid sampling instead leaves an O(dr/r) mismatch that costs a whole
// order near the pole.
struct Elem {
    int rp, rm, tp, tm;
    double w;     // dt * integral of f over the half-cell
    double f_leg; // warping at the angular leg's radius
};

// Collapsed fan element at the pole: the affine interpolant of
// (pole, b, c) over the whole coordinate sector [0, dr] x [t_j, t_{j+1}],
// conforming with the (r, t) ring cells. The angular leg is the ring-1 edge,
// so the angular metric factor is f(r_1); the area weight integrates the
// sector with the midpoint metric f(dr/2) (for f ~ r this reproduces
// integral r dr exactly, which the centroid rule misses by a third):
//   G1 = ((u_b + u_c)/2 - u_pole) / dr,  G2 = (u_c - u_b) / (dt f(r_1)).
// Components are encoded as coefficient triples over (pole, b, c).
struct PoleElem {
    int b, c;
    double w;
    double b1[3];
    double b2[3];
};

struct Mesh {
    std::vector<Elem> elems;
    std::vector<PoleElem> pole_elems;
    int n_full = 0; // full-field size (n_r + 1) * n_t
};

int fidx(const PolarGrid& g, int i, int j) { return i * g.n_t() + g.wrap(j); }

// Simpson integral of f; f is smooth, so per-cell O(dr^5) is ample.
double f_integral(const WarpingFunction& wf, double a, double b) {
    return (b - a) / 6.0 * (wf.f(a) + 4.0 * wf.f(0.5 * (a + b)) + wf.f(b));
}

Mesh build_mesh(const PolarGrid& g) {
    Mesh mesh;
    mesh.n_full = (g.n_r() + 1) * g.n_t();
    const int i0 = g.is_ball() ? 1 : 0;
    mesh.elems.reserve(std::size_t(2) * (g.n_r() - i0) * g.n_t());
    for (int i = i0; i < g.n_r(); ++i) {
        const double r_lo = g.radius(i);
        const double r_mid = r_lo + 0.5 * g.dr();
        const double r_hi = r_lo + g.dr();
        for (int j = 0; j < g.n_t(); ++j) {
            Elem ll;
            ll.rm = fidx(g, i, j);
            ll.rp = fidx(g, i + 1, j);
            ll.tm = fidx(g, i, j);
            ll.tp = fidx(g, i, j + 1);
            ll.f_leg = g.wf().f(r_lo);
            ll.w = g.dt() * f_integral(g.wf(), r_lo, r_mid);
            mesh.elems.push_back(ll);
            Elem ur;
            ur.rm = fidx(g, i, j + 1);
            ur.rp = fidx(g, i + 1, j + 1);
            ur.tm = fidx(g, i + 1, j);
            ur.tp = fidx(g, i + 1, j + 1);
            ur.f_leg = g.wf().f(r_hi);
            ur.w = g.dt() * f_integral(g.wf(), r_mid, r_hi);
            mesh.elems.push_back(ur);
        }
    }
    if (g.is_ball()) {
        // The fan's volume covers the whole coordinate sector [0, dr]; its
        // angular term carries only the ring-1 dual share [dr/2, dr], hence
        // the sqrt(lambda) rescale of the angular coefficients.
        mesh.pole_elems.reserve(g.n_t());
        const double r1 = g.dr();
        const double vol = f_integral(g.wf(), 0.0, r1);
        const double lambda = f_integral(g.wf(), 0.5 * r1, r1) / vol;
        const double s2 = std::sqrt(lambda) / (g.dt() * g.wf().f(r1));
        for (int j = 0; j < g.n_t(); ++j) {
            PoleElem pe;
            pe.b = fidx(g, 1, j);
            pe.c = fidx(g, 1, j + 1);
            pe.b1[0] = -1.0 / r1;
            pe.b1[1] = 0.5 / r1;
            pe.b1[2] = 0.5 / r1;
            pe.b2[0] = 0.0;
            pe.b2[1] = -s2;
            pe.b2[2] = s2;
            pe.w = g.dt() * vol;
            mesh.pole_elems.push_back(pe);
        }
    }
    return mesh;
}

double pole_average(const PolarGrid& g, const std::vector<double>& U) {
    double s = 0.0;
    for (int j = 0; j < g.n_t(); ++j) s += U[std::size_t(fidx(g, 1, j))];
    return s / g.n_t();
}

// Per-element intermediate results; scatter happens serially so serial and
// OpenMP assembly produce bit-identical output.
struct ElemOut {
    double energy;
    double c1, c2;           // w * sigma * G_i (gradient prefactors)
    double m11, m12, m22;    // w * regularized Hessian in the (G1, G2) frame
};

template <typename ElemT>
ElemOut eval_elem(const EnergyDensity& density, const ElemT& e, double G1, double G2,
                  double delta, bool want_hessian) {
    ElemOut out;
    const double norm2 = G1 * G1 + G2 * G2;
    const double norm = std::sqrt(norm2);
    out.energy = e.w * density.A(norm);
    const double sigma = norm > 0.0 ? density.a(norm) / norm : 0.0;
    out.c1 = e.w * sigma * G1;
    out.c2 = e.w * sigma * G2;
    if (want_hessian) {
        const double nd = std::sqrt(norm2 + delta * delta);
        const double sd = nd > 0.0 ? density.a(nd) / nd : density.a_prime(0.0);
        const double kappa = density.a_prime(nd);
        // sd * (I - gg^T) + kappa * gg^T with g = G / |G|_delta
        const double inv2 = nd > 0.0 ? 1.0 / (nd * nd) : 0.0;
        const double diff = (kappa - sd) * inv2;
        out.m11 = e.w * (sd + diff * G1 * G1);
        out.m12 = e.w * diff * G1 * G2;
        out.m22 = e.w * (sd + diff * G2 * G2);
    } else {
        out.m11 = out.m12 = out.m22 = 0.0;
    }
    return out;
}

struct Assembly {
    double energy = 0.0;
    Eigen::VectorXd grad;                       // over unknowns
    std::vector<Eigen::Triplet<double>> trips;  // unknown x unknown
};

// unknown index of a full-field node, or -1 when Dirichlet-fixed
int unknown_of(const PolarGrid& g, int full) {
    const int i = full / g.n_t();
    if (i < 1 || i >= g.n_r()) return -1;
    return full - g.n_t();
}

Assembly assemble(const PolarGrid& g, const Mesh& mesh, const EnergyDensity& density,
                  const std::vector<double>& U, double pole, double delta,
                  bool want_hessian, bool parallel) {
    const double inv_dr = 1.0 / g.dr();
    const double inv_dt = 1.0 / g.dt();
    const std::size_t ne = mesh.elems.size();
    const std::size_t np = mesh.pole_elems.size();
    std::vector<ElemOut> out(ne + np);

#ifdef _OPENMP
    #pragma omp parallel for schedule(static) if (parallel)
#endif
    for (std::ptrdiff_t idx = 0; idx < std::ptrdiff_t(ne); ++idx) {
        const Elem& e = mesh.elems[std::size_t(idx)];
        const double G1 = (U[std::size_t(e.rp)] - U[std::size_t(e.rm)]) * inv_dr;
        const double G2 = (U[std::size_t(e.tp)] - U[std::size_t(e.tm)]) * inv_dt / e.f_leg;
        out[std::size_t(idx)] = eval_elem(density, e, G1, G2, delta, want_hessian);
    }
#ifdef _OPENMP
    #pragma omp parallel for schedule(static) if (parallel)
#endif
    for (std::ptrdiff_t idx = 0; idx < std::ptrdiff_t(np); ++idx) {
        const PoleElem& e = mesh.pole_elems[std::size_t(idx)];
        const double ub = U[std::size_t(e.b)], uc = U[std::size_t(e.c)];
        const double G1 = e.b1[0] * pole + e.b1[1] * ub + e.b1[2] * uc;
        const double G2 = e.b2[0] * pole + e.b2[1] * ub + e.b2[2] * uc;
        out[ne + std::size_t(idx)] = eval_elem(density, e, G1, G2, delta, want_hessian);
    }

    // Serial scatter in fixed element order.
    Assembly a;
    a.grad = Eigen::VectorXd::Zero(g.n_unknowns());
    if (want_hessian) a.trips.reserve(16 * (ne + np));

    auto add_grad = [&](int full, double v) {
        const int u = unknown_of(g, full);
        if (u >= 0) a.grad[u] += v;
    };
    auto add_trip = [&](int fx, int fy, double v) {
        const int ux = unknown_of(g, fx);
        const int uy = unknown_of(g, fy);
        if (ux >= 0 && uy >= 0) a.trips.emplace_back(ux, uy, v);
    };

    for (std::size_t idx = 0; idx < ne; ++idx) {
        const Elem& e = mesh.elems[idx];
        const ElemOut& o = out[idx];
        a.energy += o.energy;
        const double inv2 = inv_dt / e.f_leg;
        add_grad(e.rp, o.c1 * inv_dr);
        add_grad(e.rm, -o.c1 * inv_dr);
        add_grad(e.tp, o.c2 * inv2);
        add_grad(e.tm, -o.c2 * inv2);
        if (!want_hessian) continue;
        const int ids[4] = {e.rp, e.rm, e.tp, e.tm};
        const double b1[4] = {inv_dr, -inv_dr, 0.0, 0.0};
        const double b2[4] = {0.0, 0.0, inv2, -inv2};
        // zero-valued entries stay in the triplet list: the factorization
        // pattern must not drift between Newton iterations
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y)
                add_trip(ids[x], ids[y],
                         o.m11 * b1[x] * b1[y] + o.m22 * b2[x] * b2[y] +
                             o.m12 * (b1[x] * b2[y] + b2[x] * b1[y]));
    }

    if (!mesh.pole_elems.empty()) {
        const int nt = g.n_t();
        double g_pole = 0.0;  // dE/d(pole)
        double h_pp = 0.0;    // d2E/d(pole)^2
        std::vector<double> h_pb(std::size_t(nt), 0.0); // pole-row couplings to ring 1
        for (std::size_t idx = 0; idx < np; ++idx) {
            const PoleElem& e = mesh.pole_elems[idx];
            const ElemOut& o = out[ne + idx];
            a.energy += o.energy;
            add_grad(e.b, o.c1 * e.b1[1] + o.c2 * e.b2[1]);
            add_grad(e.c, o.c1 * e.b1[2] + o.c2 * e.b2[2]);
            g_pole += o.c1 * e.b1[0] + o.c2 * e.b2[0];
            if (!want_hessian) continue;
            auto entry = [&](int x, int y) {
                return o.m11 * e.b1[x] * e.b1[y] + o.m22 * e.b2[x] * e.b2[y] +
                       o.m12 * (e.b1[x] * e.b2[y] + e.b2[x] * e.b1[y]);
            };
            add_trip(e.b, e.b, entry(1, 1));
            add_trip(e.b, e.c, entry(1, 2));
            add_trip(e.c, e.b, entry(2, 1));
            add_trip(e.c, e.c, entry(2, 2));
            h_pp += entry(0, 0);
            h_pb[std::size_t(idx)] += entry(0, 1);
            h_pb[(idx + 1) % std::size_t(nt)] += entry(0, 2);
        }
        // pole value is the ring-1 average: chain rule distributes the pole
        // row uniformly over ring 1
        for (int m = 0; m < nt; ++m) add_grad(fidx(g, 1, m), g_pole / nt);
        if (want_hessian) {
            for (int b = 0; b < nt; ++b) {
                const double v = h_pb[std::size_t(b)] / nt;
                for (int m = 0; m < nt; ++m) {
                    add_trip(fidx(g, 1, m), fidx(g, 1, b), v);
                    add_trip(fidx(g, 1, b), fidx(g, 1, m), v);
                }
            }
            const double vpp = h_pp / double(nt) / double(nt);
            for (int m = 0; m < nt; ++m)
                for (int mm = 0; mm < nt; ++mm)
                    add_trip(fidx(g, 1, m), fidx(g, 1, mm), vpp);
        }
    }
    return a;
}

double energy_only(const PolarGrid& g, const Mesh& mesh, const EnergyDensity& density,
                   const std::vector<double>& U, double pole, bool parallel) {
    return assemble(g, mesh, density, U, pole, 0.0, false, parallel).energy;
}

struct NewtonResult {
    int iters = 0;
    double residual = 0.0;
    double energy = 0.0;
    std::vector<double> energy_history;
};

NewtonResult newton_minimize(const PolarGrid& g, const Mesh& mesh,
                             const EnergyDensity& density, std::vector<double>& U,
                             const SolverOptions& opts, double delta, double resid_scale,
                             bool parallel) {
    NewtonResult res;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    bool analyzed = false;
    Eigen::SparseMatrix<double> H(g.n_unknowns(), g.n_unknowns());

    for (int iter = 0;; ++iter) {
        const double pole = g.is_ball() ? pole_average(g, U) : 0.0;
        Assembly full = assemble(g, mesh, density, U, pole, delta, true, parallel);
        res.residual = full.grad.lpNorm<Eigen::Infinity>() / resid_scale;
        res.energy = full.energy;
        res.iters = iter;
        if (res.residual <= opts.tol_newton) return res;
        if (iter >= opts.max_newton)
            throw nonconvergence_error("Newton did not reach tolerance", res.residual);

        H.setFromTriplets(full.trips.begin(), full.trips.end());
        if (!analyzed) {
            ldlt.analyzePattern(H);
            analyzed = true;
        }
        ldlt.factorize(H);
        if (ldlt.info() != Eigen::Success)
            throw nonconvergence_error("Hessian factorization failed", res.residual);
        Eigen::VectorXd d = ldlt.solve(-full.grad);

        // Backtracking on the exact energy; the damping floor marks stagnation.
        double lambda = 1.0;
        std::vector<double> trial(U);
        bool accepted = false;
        while (lambda >= opts.damping_floor) {
            for (int i = 1; i < g.n_r(); ++i)
                for (int j = 0; j < g.n_t(); ++j) {
                    const int u = (i - 1) * g.n_t() + j;
                    trial[std::size_t(fidx(g, i, j))] =
                        U[std::size_t(fidx(g, i, j))] + lambda * d[u];
                }
            const double pole_t = g.is_ball() ? pole_average(g, trial) : 0.0;
            const double e_t = energy_only(g, mesh, density, trial, pole_t, parallel);
            if (e_t <= full.energy + 1e-14 * std::abs(full.energy)) {
                U = trial;
                res.energy_history.push_back(e_t);
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted)
            throw nonconvergence_error("line search hit the damping floor", res.residual);
    }
}

std::vector<double> boundary_field(const PolarGrid& g, const DirichletProblem& pb) {
    std::vector<double> U(std::size_t(g.n_r() + 1) * g.n_t(), 0.0);
    for (int j = 0; j < g.n_t(); ++j)
        U[std::size_t(fidx(g, g.n_r(), j))] = pb.phi(g.angle(j));
    if (!g.is_ball()) {
        if (!pb.phi_inner)
            throw std::invalid_argument("annulus problems need inner boundary data");
        for (int j = 0; j < g.n_t(); ++j)
            U[std::size_t(fidx(g, 0, j))] = pb.phi_inner(g.angle(j));
    }
    return U;
}

} // namespace

double DiscreteSolution::value(int i, int j) const {
    if (i == 0 && ball) return pole_value;
    j %= n_t;
    if (j < 0) j += n_t;
    return u[std::size_t(i) * n_t + j];
}

DiscreteSolution solve_ball(const DirichletProblem& problem, const PolarGrid& grid,
                            const std::vector<double>* warm_start, bool parallel_assembly) {
    const Mesh mesh = build_mesh(grid);
    std::vector<double> U = boundary_field(grid, problem);

    double bmin = std::numeric_limits<double>::infinity(), bmax = -bmin;
    for (int j = 0; j < grid.n_t(); ++j) {
        bmin = std::min(bmin, U[std::size_t(fidx(grid, grid.n_r(), j))]);
        bmax = std::max(bmax, U[std::size_t(fidx(grid, grid.n_r(), j))]);
        if (!grid.is_ball()) {
            bmin = std::min(bmin, U[std::size_t(fidx(grid, 0, j))]);
            bmax = std::max(bmax, U[std::size_t(fidx(grid, 0, j))]);
        }
    }
    const double resid_scale = std::max(1.0, std::max(std::abs(bmin), std::abs(bmax)));
    const double delta =
        problem.opts.delta_reg_scale * (bmax - bmin) / grid.outer_radius();

    if (warm_start) {
        if (warm_start->size() != U.size())
            throw std::invalid_argument("warm start field has wrong size");
        for (int i = 1; i < grid.n_r(); ++i)
            for (int j = 0; j < grid.n_t(); ++j)
                U[std::size_t(fidx(grid, i, j))] = (*warm_start)[std::size_t(fidx(grid, i, j))];
    } else {
        const double mean = 0.5 * (bmin + bmax);
        for (int i = 1; i < grid.n_r(); ++i)
            for (int j = 0; j < grid.n_t(); ++j) U[std::size_t(fidx(grid, i, j))] = mean;
    }

    const bool is_p2 =
        problem.profile.kind() == ProfileKind::p_laplacian && problem.profile.p() == 2.0;
    if (!is_p2 && !warm_start) {
        // Harmonic warm start: all shipped energies are convex, so this is a
        // safe and fast initial guess.
        const AProfile harmonic = AProfile::p_laplacian(2.0);
        const EnergyDensity d2{&harmonic};
        newton_minimize(grid, mesh, d2, U, problem.opts, delta, resid_scale,
                        parallel_assembly);
    }

    const EnergyDensity density{&problem.profile};
    NewtonResult nr = newton_minimize(grid, mesh, density, U, problem.opts, delta,
                                      resid_scale, parallel_assembly);

    DiscreteSolution sol;
    sol.n_r = grid.n_r();
    sol.n_t = grid.n_t();
    sol.ball = grid.is_ball();
    sol.inner_radius = grid.inner_radius();
    sol.outer_radius = grid.outer_radius();
    sol.u.assign(U.begin(), U.end());
    sol.pole_value = grid.is_ball() ? pole_average(grid, U) : 0.0;
    sol.energy = nr.energy;
    sol.residual_norm = nr.residual;
    sol.newton_iters = nr.iters;
    sol.energy_history = std::move(nr.energy_history);
    sol.boundary_min = bmin;
    sol.boundary_max = bmax;
    return sol;
}

MaxPrincipleReport discrete_max_principle(const DiscreteSolution& sol, double tol) {
    MaxPrincipleReport rep;
    double worst = 0.0;
    for (int i = sol.ball ? 0 : 1; i < sol.n_r; ++i) {
        if (i == 0) {
            worst = std::max({worst, sol.boundary_min - sol.pole_value,
                              sol.pole_value - sol.boundary_max});
            continue;
        }
        for (int j = 0; j < sol.n_t; ++j) {
            const double v = sol.value(i, j);
            worst = std::max({worst, sol.boundary_min - v, v - sol.boundary_max});
        }
    }
    rep.worst_violation = worst;
    rep.ok = worst <= tol;
    return rep;
}

ComparisonResult comparison_check_discrete(const DiscreteSolution& u,
                                           const DiscreteSolution& v, double tol) {
    if (u.n_r != v.n_r || u.n_t != v.n_t || u.ball != v.ball)
        throw std::invalid_argument("comparison requires identical grids");
    ComparisonResult res;
    res.ordered = true;
    for (int i = u.ball ? 0 : 1; i <= u.n_r; ++i) {
        if (i == 0) {
            const double viol = u.pole_value - v.pole_value;
            if (viol > res.worst_violation) res.worst_violation = viol;
            continue;
        }
        for (int j = 0; j < u.n_t; ++j) {
            const double viol = u.value(i, j) - v.value(i, j);
            if (viol > res.worst_violation) {
                res.worst_violation = viol;
                res.worst_i = i;
                res.worst_j = j;
            }
        }
    }
    res.ordered = res.worst_violation <= tol;
    return res;
}

double RadialSolution::operator()(double r) const {
    if (r < table_r.front() - 1e-12 || r > table_r.back() + 1e-12)
        throw std::domain_error("radius outside the solved interval");
    r = std::clamp(r, table_r.front(), table_r.back());
    const auto it = std::lower_bound(table_r.begin(), table_r.end(), r);
    std::size_t hi = std::size_t(it - table_r.begin());
    if (hi == 0) return table_u.front();
    if (hi >= table_r.size()) return table_u.back();
    const std::size_t lo = hi - 1;
    const double h = table_r[hi] - table_r[lo];
    const double x = (r - table_r[lo]) / h;
    const double x2 = x * x, x3 = x2 * x;
    return (2 * x3 - 3 * x2 + 1) * table_u[lo] + (x3 - 2 * x2 + x) * h * table_du[lo] +
           (-2 * x3 + 3 * x2) * table_u[hi] + (x3 - x2) * h * table_du[hi];
}

RadialSolution solve_radial(const AProfile& profile, const WarpingFunction& wf, int n,
                            double r_in, double r_out, double u_in, double u_out) {
    if (!(r_in > 0.0) || !(r_out > r_in))
        throw std::invalid_argument("need 0 < r_in < r_out");
    if (n < 1) throw std::invalid_argument("sphere dimension must be >= 1");

    RadialSolution sol;
    sol.r_in = r_in;
    sol.r_out = r_out;
    sol.u_in = u_in;
    sol.u_out = u_out;

    const double sign = u_out >= u_in ? 1.0 : -1.0;
    const double rise = sign * (u_out - u_in);

    auto slope = [&](double c, double r) {
        return profile.inverse(c * std::pow(wf.f(r), -n));
    };
    auto total = [&](double c) {
        if (c == 0.0) return 0.0;
        return integrate([&](double r) { return slope(c, r); }, r_in, r_out, 1e-13, 1e-13)
            .value;
    };

    double c = 0.0;
    if (rise > 0.0) {
        const double sup = profile.sup_a();
        const double fn_in = std::pow(wf.f(r_in), n);
        double hi;
        if (std::isinf(sup)) {
            hi = std::max(profile.evaluate(rise / (r_out - r_in)) * fn_in, 1e-8);
            while (total(hi) < rise) {
                hi *= 2.0;
                if (hi > 1e300) throw infeasibility_error("flux bracket overflow");
            }
        } else {
            hi = sup * fn_in * (1.0 - 1e-13);
            if (total(hi) < rise)
                throw infeasibility_error(
                    "required flux exceeds sup(a) * f(r_in)^n; no radial solution");
        }
        double lo = 0.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double v = total(mid);
            if (std::abs(v - rise) <= 1e-12) {
                lo = hi = mid;
                break;
            }
            (v < rise ? lo : hi) = mid;
        }
        c = 0.5 * (lo + hi);
    }
    sol.c_flux = sign * c;

    const int m = 2048;
    sol.table_r.resize(m + 1);
    sol.table_u.resize(m + 1);
    sol.table_du.resize(m + 1);
    double acc = u_in;
    for (int i = 0; i <= m; ++i) {
        const double r = r_in + (r_out - r_in) * i / m;
        sol.table_r[std::size_t(i)] = r;
        if (i > 0) {
            acc += sign * integrate([&](double t) { return slope(c, t); },
                                    sol.table_r[std::size_t(i) - 1], r, 1e-14, 1e-12)
                              .value;
        }
        sol.table_u[std::size_t(i)] = acc;
        sol.table_du[std::size_t(i)] = c > 0.0 ? sign * slope(c, r) : 0.0;
    }
    return sol;
}

std::pair<DiscreteSolution, CascadeReport>
exhaustion_solve(const DirichletProblem& problem, const WarpingFunction& wf,
                 const std::vector<double>& radii, int n_r_base, int n_t,
                 double tol_cascade) {
    if (radii.size() < 2) throw std::invalid_argument("cascade needs at least two radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw std::invalid_argument("cascade radii must increase");
    // Continuity probe of the asymptotic data at two angular resolutions.
    {
        auto max_jump = [&](int m) {
            double worst = 0.0;
            for (int j = 0; j < m; ++j) {
                const double a = problem.phi(2.0 * std::numbers::pi * j / m);
                const double b = problem.phi(2.0 * std::numbers::pi * (j + 1) / m);
                worst = std::max(worst, std::abs(b - a));
            }
            return worst;
        };
        const double j1 = max_jump(256), j2 = max_jump(512);
        if (j2 > 0.75 * j1 + 1e-12 && j2 > 1e-6)
            throw std::invalid_argument(
                "asymptotic data looks discontinuous (angular jumps do not refine)");
    }

    CascadeReport rep;
    rep.radii = radii;
    const double base_R = radii.front();

    DiscreteSolution prev, cur;
    std::vector<double> prev_field;
    PolarGrid base_grid(wf, 0.0, base_R, n_r_base, n_t);

    for (std::size_t kk = 0; kk < radii.size(); ++kk) {
        const double R = radii[kk];
        const int n_r = int(std::lround(n_r_base * R / base_R));
        PolarGrid grid(wf, 0.0, R, n_r, n_t);

        std::vector<double>* warm = nullptr;
        std::vector<double> warm_field;
        if (kk > 0) {
            // carry the previous solution inward, extend outward with data
            warm_field.assign(std::size_t(n_r + 1) * n_t, 0.0);
            const int n_r_prev = prev.n_r;
            for (int i = 1; i <= n_r; ++i)
                for (int j = 0; j < n_t; ++j) {
                    const double v = i <= n_r_prev ? prev.value(std::min(i, n_r_prev), j)
                                                   : problem.phi(grid.angle(j));
                    warm_field[std::size_t(i) * n_t + j] = v;
                }
            warm = &warm_field;
        }

        DirichletProblem pb = problem;
        cur = solve_ball(pb, grid, warm);
        rep.iters.push_back(cur.newton_iters);
        rep.max_principle_violation.push_back(
            discrete_max_principle(cur, 100 * problem.opts.tol_newton).worst_violation);

        if (kk > 0) {
            double d = std::abs(cur.pole_value - prev.pole_value);
            for (int i = 1; i <= base_grid.n_r(); ++i)
                for (int j = 0; j < n_t; ++j)
                    d = std::max(d, std::abs(cur.value(i, j) - prev.value(i, j)));
            rep.d.push_back(d);
        }
        prev = cur;
    }

    rep.converged = !rep.d.empty() && rep.d.back() <= tol_cascade;
    for (std::size_t i = 1; i < rep.d.size(); ++i)
        if (rep.d[i] > rep.d[i - 1] + 100 * problem.opts.tol_newton) rep.monotone = false;
    return {cur, rep};
}

double HalfPlane::separation(double r, double t) const {
    return std::sinh(k * r) * std::cos(t - angle_x) * std::cosh(k * d0) -
           std::cosh(k * r) * std::sinh(k * d0);
}

double HalfPlane::distance(double r, double t) const {
    const double s = separation(r, t);
    if (s < 0.0) throw std::domain_error("point lies outside the half-plane");
    return std::asinh(s) / k;
}

double HalfPlane::window_half_width() const { return std::acos(std::tanh(k * d0)); }

SandwichReport barrier_sandwich_report(const DiscreteSolution& sol, const PolarGrid& grid,
                                       const BarrierSpec& spec, const HalfPlane& window,
                                       const std::function<double(double)>& phi,
                                       double allowance) {
    if (grid.wf().kind() != WarpingKind::hyperbolic)
        throw std::invalid_argument("sandwich check needs the hyperbolic warping");
    const double phix = phi(window.angle_x);

    double max_abs_phi = 0.0;
    const int mprobe = 4096;
    for (int j = 0; j < mprobe; ++j)
        max_abs_phi =
            std::max(max_abs_phi, std::abs(phi(2.0 * std::numbers::pi * j / mprobe)));
    if (spec.height_C < max_abs_phi - 1e-12)
        throw std::invalid_argument("barrier height must dominate max |phi|");

    const double w = window.window_half_width();
    double eps = 0.0;
    for (int j = 0; j <= 2000; ++j) {
        const double dtheta = -w + 2.0 * w * j / 2000.0;
        eps = std::max(eps, std::abs(phi(window.angle_x + dtheta) - phix));
    }

    // Dense table of g with exact slopes; nodes hit it thousands of times.
    const double s_cap = std::asinh(std::max(window.separation(grid.outer_radius(), window.angle_x), 1.0)) / window.k + 1.0;
    const int mtab = 2000;
    std::vector<double> ts(std::size_t(mtab) + 1), gs(std::size_t(mtab) + 1);
    for (int i = 0; i <= mtab; ++i) ts[std::size_t(i)] = s_cap * i / mtab;
    gs[std::size_t(mtab)] = g_eval(spec, s_cap);
    auto g_slope = [&spec](double s) {
        return -spec.profile.inverse(spec.c *
                                     std::pow(std::cosh(spec.k * s), 1 - spec.n));
    };
    for (int i = mtab; i > 0; --i) {
        const double seg = integrate([&](double s) { return -g_slope(s); },
                                     ts[std::size_t(i) - 1], ts[std::size_t(i)], 1e-13,
                                     1e-12)
                               .value;
        gs[std::size_t(i) - 1] = gs[std::size_t(i)] + seg;
    }
    auto g_table = [&](double s) {
        if (s >= s_cap) return g_eval(spec, s);
        const double x = s / s_cap * mtab;
        const std::size_t lo = std::min(std::size_t(x), std::size_t(mtab) - 1);
        const double h = ts[lo + 1] - ts[lo];
        const double u = (s - ts[lo]) / h;
        const double u2 = u * u, u3 = u2 * u;
        return (2 * u3 - 3 * u2 + 1) * gs[lo] + (u3 - 2 * u2 + u) * h * g_slope(ts[lo]) +
               (-2 * u3 + 3 * u2) * gs[lo + 1] + (u3 - u2) * h * g_slope(ts[lo + 1]);
    };

    SandwichReport rep;
    rep.eps = eps;
    rep.worst_slack = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= grid.n_r(); ++i)
        for (int j = 0; j < grid.n_t(); ++j) {
            const double sep = window.separation(grid.radius(i), grid.angle(j));
            if (sep <= 0.0) continue;
            const double s = std::asinh(sep) / window.k;
            const double Sigma = std::min(g_table(s), spec.height_C);
            const double slack = eps + Sigma - std::abs(sol.value(i, j) - phix);
            ++rep.checked_nodes;
            if (slack < rep.worst_slack) {
                rep.worst_slack = slack;
                rep.worst_i = i;
                rep.worst_j = j;
            }
        }
    rep.pass = rep.checked_nodes > 0 && rep.worst_slack >= -allowance;
    return rep;
}

} // namespace hadlab
