#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace hadlab {

enum class ProfileKind { p_laplacian, minimal, custom };

/// Profile a(s) of the divergence-form operator div(a(|du|)/|du| du).
///
/// Presets:
///   p_laplacian(p) : a(s) = s^(p-1), p > 1
///   minimal        : a(s) = s / sqrt(1 + s^2), sup a = 1
///
/// Structural conditions carried as data so they can be checked on a grid:
///   (a1) a(0) = 0, a'(s) > 0 for s > 0
///   (a2) a(s) <= growth_C * (s^(growth_p - 1) + 1)
///   (a3) a(s) >= s^growth_q on [0, growth_delta]
///
/// Immutable after construction; safe for concurrent reads.
class AProfile {
public:
    static AProfile p_laplacian(double p);
    static AProfile minimal();
    /// Custom profiles must supply the derivative explicitly; there is no
    /// numerical differentiation here.
    static AProfile custom(std::function<double(double)> a,
                           std::function<double(double)> a_prime, double sup_a,
                           double growth_p, double growth_q, double growth_delta,
                           double growth_C, std::string name = "custom");

    ProfileKind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    double p() const noexcept { return p_; }
    double sup_a() const noexcept { return sup_a_; }
    double growth_p() const noexcept { return growth_p_; }
    double growth_q() const noexcept { return growth_q_; }
    double growth_delta() const noexcept { return growth_delta_; }
    double growth_C() const noexcept { return growth_C_; }

    /// a(s); throws std::domain_error for s < 0.
    double evaluate(double s) const;
    /// a'(s); throws std::domain_error for s < 0.
    double derivative(double s) const;

    /// s with a(s) = y, for 0 <= y < sup_a; throws std::range_error at or
    /// above sup_a. Closed forms for the presets, bisection (tol 1e-12 on
    /// |a(s)-y|) with geometric bracket growth otherwise.
    double inverse(double y) const;

private:
    AProfile() = default;

    ProfileKind kind_ = ProfileKind::custom;
    std::string name_;
    double p_ = 2.0; // p-Laplacian exponent, meaningful for that kind only
    std::function<double(double)> a_;
    std::function<double(double)> a_prime_;
    double sup_a_ = std::numeric_limits<double>::infinity();
    double growth_p_ = 2.0;
    double growth_q_ = 1.0;
    double growth_delta_ = 1.0;
    double growth_C_ = 1.0;
};

struct ConditionMargin {
    bool pass = false;
    double margin = 0.0;   ///< min over the grid of (lhs - rhs); >= 0 passes
    double argmin_s = 0.0; ///< grid point attaining the margin
};

struct ConditionReport {
    ConditionMargin a1; // margin = min a'(s) over s > 0 (and a(0) checked exactly)
    ConditionMargin a2; // margin = min growth_C*(s^(p-1)+1) - a(s)
    ConditionMargin a3; // margin = min a(s) - s^q over grid cap growth_delta
    bool a0_exact = false;
    bool all_pass() const noexcept { return a0_exact && a1.pass && a2.pass && a3.pass; }
};

/// Evaluates (a1)-(a3) on a sampled grid. The grid must be nonempty and
/// sorted ascending with nonnegative entries.
ConditionReport check_conditions(const AProfile& profile, const std::vector<double>& grid);

} // namespace hadlab
