#pragma once

#include <cstddef>
#include <vector>

#include "hadlab/warping.hpp"

namespace hadlab {

/// Structured polar grid on a geodesic ball (inner_radius == 0) or annulus.
///
/// Rings are i = 0..n_r at r_i = inner_radius + i * dr; the angular index is
/// periodic with t_j = j * dt. On a ball, ring 0 is the pole: it carries no
/// unknown, its value is the average of ring 1. Dirichlet rings: n_r always,
/// plus ring 0 on an annulus. Unknowns are rings 1..n_r-1, indexed
/// (i-1)*n_t + j.
class PolarGrid {
public:
    PolarGrid(const WarpingFunction& wf, double inner_radius, double outer_radius,
              int n_r, int n_t);

    const WarpingFunction& wf() const noexcept { return *wf_; }
    bool is_ball() const noexcept { return inner_ == 0.0; }
    double inner_radius() const noexcept { return inner_; }
    double outer_radius() const noexcept { return outer_; }
    int n_r() const noexcept { return n_r_; }
    int n_t() const noexcept { return n_t_; }
    double dr() const noexcept { return dr_; }
    double dt() const noexcept { return dt_; }
    double radius(int i) const noexcept { return inner_ + i * dr_; }
    double angle(int j) const noexcept { return j * dt_; }

    int n_unknowns() const noexcept { return (n_r_ - 1) * n_t_; }
    int unknown_index(int i, int j) const noexcept { return (i - 1) * n_t_ + wrap(j); }
    int wrap(int j) const noexcept {
        j %= n_t_;
        return j < 0 ? j + n_t_ : j;
    }

    /// Positive area weight f(r_i) dr dt of the cell anchored at ring i.
    double cell_weight(int i) const { return wf_->f(radius(i)) * dr_ * dt_; }

private:
    const WarpingFunction* wf_;
    double inner_, outer_, dr_, dt_;
    int n_r_, n_t_;
};

} // namespace hadlab
