#include "hadlab/profile.hpp"

#include <cmath>
#include <stdexcept>

namespace hadlab {

AProfile AProfile::p_laplacian(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("p_laplacian requires p > 1");
    AProfile out;
    out.kind_ = ProfileKind::p_laplacian;
    out.name_ = "p_laplacian";
    out.p_ = p;
    out.a_ = [p](double s) { return std::pow(s, p - 1.0); };
    out.a_prime_ = [p](double s) { return (p - 1.0) * std::pow(s, p - 2.0); };
    out.sup_a_ = std::numeric_limits<double>::infinity();
    out.growth_p_ = p;
    out.growth_C_ = 1.0;
    // s^(p-1) >= s^q on [0,1] needs q >= p-1; q = max(p-1, 1) keeps delta = 1
    // valid for every p > 1.
    out.growth_q_ = std::max(p - 1.0, 1.0);
    out.growth_delta_ = 1.0;
    return out;
}

AProfile AProfile::minimal() {
    AProfile out;
    out.kind_ = ProfileKind::minimal;
    out.name_ = "minimal";
    out.a_ = [](double s) { return s / std::sqrt(1.0 + s * s); };
    out.a_prime_ = [](double s) { return std::pow(1.0 + s * s, -1.5); };
    out.sup_a_ = 1.0;
    out.growth_p_ = 1.0;
    out.growth_C_ = 1.0;
    // s/sqrt(1+s^2) < s for s > 0, so q = 1 is impossible; q = 2 admits
    // deltas up to ~0.786 (s*sqrt(1+s^2) <= 1). Fixed by brute-force scan,
    // see the profile tests.
    out.growth_q_ = 2.0;
    out.growth_delta_ = 0.75;
    return out;
}

AProfile AProfile::custom(std::function<double(double)> a,
                          std::function<double(double)> a_prime, double sup_a,
                          double growth_p, double growth_q, double growth_delta,
                          double growth_C, std::string name) {
    AProfile out;
    out.kind_ = ProfileKind::custom;
    out.name_ = std::move(name);
    out.a_ = std::move(a);
    out.a_prime_ = std::move(a_prime);
    out.sup_a_ = sup_a;
    out.growth_p_ = growth_p;
    out.growth_q_ = growth_q;
    out.growth_delta_ = growth_delta;
    out.growth_C_ = growth_C;
    return out;
}

double AProfile::evaluate(double s) const {
    if (s < 0.0) throw std::domain_error("profile argument must be nonnegative");
    switch (kind_) {
    case ProfileKind::p_laplacian:
        return std::pow(s, p_ - 1.0);
    case ProfileKind::minimal:
        return s / std::sqrt(1.0 + s * s);
    default:
        return a_(s);
    }
}

double AProfile::derivative(double s) const {
    if (s < 0.0) throw std::domain_error("profile argument must be nonnegative");
    return a_prime_(s);
}

double AProfile::inverse(double y) const {
    if (y < 0.0) throw std::domain_error("inverse argument must be nonnegative");
    if (!(y < sup_a_))
        throw std::range_error("inverse argument must stay below sup a (" +
                               std::to_string(sup_a_) + ")");
    if (y == 0.0) return 0.0;
    switch (kind_) {
    case ProfileKind::p_laplacian:
        return std::pow(y, 1.0 / (p_ - 1.0));
    case ProfileKind::minimal:
        return y / std::sqrt(1.0 - y * y);
    default:
        break;
    }

    constexpr double tol_inv = 1e-12;
    double hi = 1.0;
    while (a_(hi) < y) {
        hi *= 2.0;
        if (hi > 1e300) throw std::range_error("inverse bracket growth overflow");
    }
    double lo = 0.0;
    // a is strictly increasing, so plain bisection is unconditionally safe.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = a_(mid);
        if (std::abs(v - y) <= tol_inv) return mid;
        (v < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ConditionReport check_conditions(const AProfile& profile, const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("condition grid must be nonempty");
    ConditionReport rep;

    rep.a0_exact = profile.evaluate(0.0) == 0.0;

    bool first = true;
    for (double s : grid) {
        if (s <= 0.0) continue;
        const double d = profile.derivative(s);
        if (first || d < rep.a1.margin) {
            rep.a1.margin = d;
            rep.a1.argmin_s = s;
            first = false;
        }
    }
    if (first) { // no positive node sampled
        rep.a1.margin = 0.0;
        rep.a1.argmin_s = 0.0;
    }
    rep.a1.pass = !first && rep.a1.margin > 0.0;

    first = true;
    for (double s : grid) {
        const double bound = profile.growth_C() * (std::pow(s, profile.growth_p() - 1.0) + 1.0);
        const double m = bound - profile.evaluate(s);
        if (first || m < rep.a2.margin) {
            rep.a2.margin = m;
            rep.a2.argmin_s = s;
            first = false;
        }
    }
    rep.a2.pass = rep.a2.margin >= 0.0;

    first = true;
    for (double s : grid) {
        if (s > profile.growth_delta()) break;
        const double m = profile.evaluate(s) - std::pow(s, profile.growth_q());
        if (first || m < rep.a3.margin) {
            rep.a3.margin = m;
            rep.a3.argmin_s = s;
            first = false;
        }
    }
    if (first) { // grid misses [0, delta] entirely
        rep.a3.margin = -std::numeric_limits<double>::infinity();
        rep.a3.pass = false;
    } else {
        rep.a3.pass = rep.a3.margin >= 0.0;
    }
    return rep;
}

} // namespace hadlab
