#pragma once

// Kelvin transform w(x) = u(x / |x|^2) of stream grids.

#include "annulus_lab/stream.hpp"
#include "annulus_lab/trace.hpp"

namespace annulus_lab {

/// Inverts the grid in the unit circle. Radii map to 1/r in reverse order
/// and the angular nodes are kept, so values are copied without interpolation.
inline StreamGrid kelvin_transform(const StreamGrid& sg) {
    const PolarGrid& g = sg.grid();
    const AnnularDomain& d = g.domain();
    require(g.r_min() > 0.0 && g.r_max() > g.r_min(), "kelvin_transform: grid needs a positive radial extent");
    const std::size_t nr = g.n_r(), nt = g.n_theta();
    std::vector<double> radii(nr);
    for (std::size_t i = 0; i < nr; ++i) radii[i] = 1.0 / g.radii()[nr - 1 - i];
    double inner = d.unbounded() ? 0.0 : 1.0 / d.outer_radius();
    double outer = d.punctured() ? kInf : 1.0 / d.inner_radius();
    AnnularDomain nd(inner, outer, std::max(inner, radii.front()), std::min(outer, radii.back()));
    std::vector<double> vals(nr * nt);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nt; ++j) vals[i * nt + j] = sg.value(nr - 1 - i, j);
    Vec2 b = sg.base_point();
    Vec2 nb = dot(b, b) > 0.0 ? b / dot(b, b) : b;
    return StreamGrid(PolarGrid(nd, std::move(radii), nt), std::move(vals), nb, sg.base_value());
}

/// Residual of Lap w + |x|^-4 f(w) = 0 on a transformed grid.
inline ResidualReport kelvin_residual(const StreamGrid& wg, const ScalarFn& f) {
    ResidualOptions opts;
    opts.weight = [](Vec2 x) {
        double r2 = dot(x, x);
        return 1.0 / (r2 * r2);
    };
    return semilinear_residual(wg, f, opts);
}

}  // namespace annulus_lab
