#include "hadlab/grid.hpp"

#include <numbers>
#include <stdexcept>

namespace hadlab {

PolarGrid::PolarGrid(const WarpingFunction& wf, double inner_radius, double outer_radius,
                     int n_r, int n_t)
    : wf_(&wf), inner_(inner_radius), outer_(outer_radius), n_r_(n_r), n_t_(n_t) {
    if (!(inner_radius >= 0.0) || !(outer_radius > inner_radius))
        throw std::invalid_argument("need 0 <= inner radius < outer radius");
    if (n_r < 8) throw std::invalid_argument("need at least 8 radial nodes");
    if (n_t < 4 || n_t % 2 != 0) throw std::invalid_argument("n_t must be even and >= 4");
    dr_ = (outer_ - inner_) / n_r_;
    dt_ = 2.0 * std::numbers::pi / n_t_;
    for (int i = is_ball() ? 1 : 0; i <= n_r_; ++i)
        if (!(cell_weight(i) > 0.0))
            throw std::invalid_argument("area weights must be positive on every ring");
}

} // namespace hadlab
