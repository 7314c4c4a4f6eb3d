#pragma once

// Stream-function reconstruction on polar grids, circle diagnostics and the
// side-condition checkers (stagnation sets, radial flux decay).

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "annulus_lab/field.hpp"
#include "annulus_lab/geometry.hpp"
#include "annulus_lab/interp.hpp"
#include "annulus_lab/quadrature.hpp"

namespace annulus_lab {

// ---------------------------------------------------------------------------
// Circle integrals

inline void require_circle(const VectorField& field, double r, std::size_t n, const char* what) {
    require(n >= 64, std::string(what) + ": need n >= 64 samples");
    field.domain.require_in_band(r, std::string(what) + ": circle");
}

/// Trapezoid value of the integral of |v . e_r| over C_r.
inline double flux_abs_on_circle(const VectorField& field, double r, std::size_t n = 512) {
    require_circle(field, r, n, "flux_abs_on_circle");
    double sum = 0.0;
    for (const Vec2& x : circle_samples(r, n)) sum += std::abs(radial_velocity(field, x));
    return sum * kTwoPi * r / static_cast<double>(n);
}

/// Trapezoid value of the integral of v . e_r over C_r.
inline double signed_flux_on_circle(const VectorField& field, double r, std::size_t n = 512) {
    require_circle(field, r, n, "signed_flux_on_circle");
    double sum = 0.0;
    for (const Vec2& x : circle_samples(r, n)) sum += radial_velocity(field, x);
    return sum * kTwoPi * r / static_cast<double>(n);
}

/// Integral of |v| over C_r, the scale for the flux tolerance.
inline double speed_on_circle(const VectorField& field, double r, std::size_t n = 512) {
    double sum = 0.0;
    for (const Vec2& x : circle_samples(r, n)) sum += norm(field.velocity(x));
    return sum * kTwoPi * r / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// StreamGrid

/// Derivative weights of the quadratic through three nodes, evaluated at x.
inline std::array<double, 3> quad_deriv_weights(double x0, double x1, double x2, double x) {
    return {((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2)), ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2)),
            ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1))};
}

/// Second-derivative weights of the same quadratic.
inline std::array<double, 3> quad_second_weights(double x0, double x1, double x2) {
    return {2 / ((x0 - x1) * (x0 - x2)), 2 / ((x1 - x0) * (x1 - x2)), 2 / ((x2 - x0) * (x2 - x1))};
}

/// Stream-function samples on a polar grid. Interpolation is cubic Lagrange
/// in r (one-sided near the ends) times periodic cubic Lagrange in theta.
class StreamGrid {
  public:
    StreamGrid(PolarGrid grid, std::vector<double> values, Vec2 base_point = {}, double base_value = 0.0)
        : grid_(std::move(grid)), values_(std::move(values)), base_point_(base_point), base_value_(base_value) {
        require(values_.size() == grid_.n_r() * grid_.n_theta(), "StreamGrid: value count does not match grid");
    }

    const PolarGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double value(std::size_t i, std::size_t j) const { return values_[i * grid_.n_theta() + j]; }
    Vec2 base_point() const { return base_point_; }
    double base_value() const { return base_value_; }
    /// Max difference between the two leg orders used to build the grid.
    double path_discrepancy() const { return discrepancy_; }
    void set_path_discrepancy(double d) { discrepancy_ = d; }

    double min_value() const { return *std::min_element(values_.begin(), values_.end()); }
    double max_value() const { return *std::max_element(values_.begin(), values_.end()); }

    bool in_band(double r) const { return r >= grid_.r_min() * (1 - 1e-12) && r <= grid_.r_max() * (1 + 1e-12); }

    double value_at(Vec2 x) const {
        double r = norm(x);
        if (!in_band(r)) throw OutOfBandError("StreamGrid: point outside grid band", r);
        const auto& rs = grid_.radii();
        const std::size_t nr = rs.size(), nt = grid_.n_theta();
        std::size_t k = bracket(rs, r);
        std::size_t i0 = std::min(k > 0 ? k - 1 : 0, nr - 4);
        auto wr = lagrange4({rs[i0], rs[i0 + 1], rs[i0 + 2], rs[i0 + 3]}, r);
        double th = std::atan2(x.y, x.x);
        if (th < 0) th += kTwoPi;
        double pos = th / grid_.dtheta();
        double fl = std::floor(pos);
        auto wt = lagrange4({-1.0, 0.0, 1.0, 2.0}, pos - fl);
        std::size_t j = static_cast<std::size_t>(fl) % nt;
        double out = 0.0;
        for (int a = 0; a < 4; ++a) {
            double row = 0.0;
            for (int b = 0; b < 4; ++b) row += wt[b] * value(i0 + a, (j + nt + b - 1) % nt);
            out += wr[a] * row;
        }
        return out;
    }

    /// (du/dr, (1/r) du/dtheta) at node (i, j); three-point stencils,
    /// one-sided on the first and last rows.
    std::pair<double, double> node_polar_gradient(std::size_t i, std::size_t j) const {
        const auto& rs = grid_.radii();
        const std::size_t nr = rs.size(), nt = grid_.n_theta();
        std::size_t c = std::clamp<std::size_t>(i, 1, nr - 2);
        auto w = quad_deriv_weights(rs[c - 1], rs[c], rs[c + 1], rs[i]);
        double ur = w[0] * value(c - 1, j) + w[1] * value(c, j) + w[2] * value(c + 1, j);
        double ut = (value(i, (j + 1) % nt) - value(i, (j + nt - 1) % nt)) / (2 * grid_.dtheta());
        return {ur, ut / rs[i]};
    }

    /// Grad-perp of the samples at node (i, j), as a Cartesian vector.
    Vec2 node_velocity(std::size_t i, std::size_t j) const {
        auto [ur, ut_r] = node_polar_gradient(i, j);
        double th = grid_.angles()[j];
        Vec2 er{std::cos(th), std::sin(th)};
        return ur * perp(er) - ut_r * er;
    }

    /// Five-point polar Laplacian at an interior row (1 <= i <= n_r - 2).
    double node_laplacian(std::size_t i, std::size_t j) const {
        const auto& rs = grid_.radii();
        const std::size_t nt = grid_.n_theta();
        auto w1 = quad_deriv_weights(rs[i - 1], rs[i], rs[i + 1], rs[i]);
        auto w2 = quad_second_weights(rs[i - 1], rs[i], rs[i + 1]);
        double um = value(i - 1, j), u0 = value(i, j), up = value(i + 1, j);
        double urr = w2[0] * um + w2[1] * u0 + w2[2] * up;
        double ur = w1[0] * um + w1[1] * u0 + w1[2] * up;
        double dt = grid_.dtheta();
        double utt = (value(i, (j + 1) % nt) - 2 * u0 + value(i, (j + nt - 1) % nt)) / (dt * dt);
        return urr + ur / rs[i] + utt / (rs[i] * rs[i]);
    }

  private:
    PolarGrid grid_;
    std::vector<double> values_;
    Vec2 base_point_;
    double base_value_ = 0.0;
    double discrepancy_ = 0.0;
};

/// Samples a closed-form scalar on every node.
template <class F>
StreamGrid sample_stream(const PolarGrid& grid, const F& fn) {
    std::vector<double> vals(grid.n_r() * grid.n_theta());
    for (std::size_t i = 0; i < grid.n_r(); ++i)
        for (std::size_t j = 0; j < grid.n_theta(); ++j) vals[i * grid.n_theta() + j] = fn(grid.node(i, j));
    return StreamGrid(grid, std::move(vals));
}

/// Samples the closed-form stream function of a field.
inline StreamGrid sample_stream(const PolarGrid& grid, const VectorField& field) {
    require(field.stream.has_value(), "sample_stream: field has no closed-form stream function");
    const auto& s = *field.stream;
    return sample_stream(grid, [&](Vec2 x) { return s(x).u; });
}

class MultivaluedStreamError : public Error {
  public:
    MultivaluedStreamError(double circulation, double tol)
        : Error("stream function is multivalued: signed flux " + std::to_string(circulation) +
                " through the base circle exceeds tolerance " + std::to_string(tol)),
          circulation_(circulation) {}
    double circulation() const { return circulation_; }

  private:
    double circulation_;
};

struct StreamOptions {
    double leg_tol = 1e-10;              // absolute tolerance per integration leg
    std::optional<double> flux_tol;      // default 1e-8 * (1 + integral of |v| on the base circle)
};

/// Reconstructs u with grad-perp u = v by line integrals from the base point:
/// a radial leg along the base angle then an angular leg. The opposite leg
/// order is computed as well and the largest discrepancy is recorded.
inline StreamGrid stream_on_grid(const VectorField& field, const PolarGrid& grid, Vec2 base, double base_value = 0.0,
                                 StreamOptions opts = {}) {
    const double r0 = norm(base);
    require(r0 > 0.0, "stream_on_grid: base point must differ from the origin");
    field.domain.require_in_band(r0, "stream_on_grid: base point");
    double flux = signed_flux_on_circle(field, r0, 1024);
    double tol = opts.flux_tol.value_or(1e-8 * (1.0 + speed_on_circle(field, r0, 1024)));
    if (std::abs(flux) > tol) throw MultivaluedStreamError(flux, tol);

    double th0 = std::atan2(base.y, base.x);
    const std::size_t nr = grid.n_r(), nt = grid.n_theta();
    const auto& rs = grid.radii();

    // Angular offsets of the grid columns measured counter-clockwise from th0.
    std::vector<double> offset(nt);
    for (std::size_t j = 0; j < nt; ++j) {
        double d = std::fmod(grid.angles()[j] - th0, kTwoPi);
        offset[j] = d < 0 ? d + kTwoPi : d;
    }
    std::vector<std::size_t> order(nt);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return offset[p] < offset[q]; });

    auto v_theta = [&](double r, double th) { return angular_velocity(field, polar_point(r, th)); };
    auto v_r = [&](double r, double th) { return radial_velocity(field, polar_point(r, th)); };
    auto radial_leg = [&](double th, double r_from, double r_to) {
        return adaptive_simpson([&](double r) { return v_theta(r, th); }, r_from, r_to, opts.leg_tol);
    };
    auto angular_leg = [&](double r, double t_from, double t_to) {
        return adaptive_simpson([&](double t) { return -r * v_r(r, th0 + t); }, t_from, t_to, opts.leg_tol);
    };
    // Cumulative radial integrals from r0 out to every grid radius along angle th.
    auto radial_profile = [&](double th) {
        std::vector<double> out(nr);
        std::size_t k = static_cast<std::size_t>(std::lower_bound(rs.begin(), rs.end(), r0) - rs.begin());
        double acc = 0.0, prev = r0;
        for (std::size_t i = k; i < nr; ++i) {
            acc += radial_leg(th, prev, rs[i]);
            out[i] = acc;
            prev = rs[i];
        }
        acc = 0.0, prev = r0;
        for (std::size_t i = k; i-- > 0;) {
            acc += radial_leg(th, prev, rs[i]);
            out[i] = acc;
            prev = rs[i];
        }
        return out;
    };
    auto angular_profile = [&](double r) {
        std::vector<double> out(nt);
        double acc = 0.0, prev = 0.0;
        for (std::size_t j : order) {
            acc += angular_leg(r, prev, offset[j]);
            out[j] = acc;
            prev = offset[j];
        }
        return out;
    };

    std::vector<double> first(nr * nt), second(nr * nt);
    // Radial leg at th0, then angular legs on each grid circle.
    std::vector<double> rad0 = radial_profile(th0);
    parallel_for(nr, [&](std::size_t i) {
        std::vector<double> ang = angular_profile(rs[i]);
        for (std::size_t j = 0; j < nt; ++j) first[i * nt + j] = base_value + rad0[i] + ang[j];
    });
    // Angular leg on the base circle, then radial legs along each column.
    std::vector<double> ang0 = angular_profile(r0);
    parallel_for(nt, [&](std::size_t j) {
        std::vector<double> rad = radial_profile(grid.angles()[j]);
        for (std::size_t i = 0; i < nr; ++i) second[i * nt + j] = base_value + ang0[j] + rad[i];
    });
    double disc = 0.0;
    for (std::size_t k = 0; k < first.size(); ++k) disc = std::max(disc, std::abs(first[k] - second[k]));
    StreamGrid sg(grid, std::move(first), base, base_value);
    sg.set_path_discrepancy(disc);
    return sg;
}

/// max - min of the interpolated stream function over C_r.
inline double circle_oscillation(const StreamGrid& sg, double r) {
    if (!sg.in_band(r)) throw OutOfBandError("circle_oscillation: radius outside grid band", r);
    const std::size_t n = 4 * sg.grid().n_theta();
    double lo = kInf, hi = -kInf;
    for (const Vec2& x : circle_samples(r, n)) {
        double u = sg.value_at(x);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    return hi - lo;
}

// ---------------------------------------------------------------------------
// Stagnation sets

enum class StagnationClass { empty, proper_subset_inner, proper_subset_outer, both_boundaries, full_circle, interior_present };

inline const char* to_string(StagnationClass c) {
    switch (c) {
        case StagnationClass::empty: return "empty";
        case StagnationClass::proper_subset_inner: return "proper-subset-inner";
        case StagnationClass::proper_subset_outer: return "proper-subset-outer";
        case StagnationClass::both_boundaries: return "both-boundaries";
        case StagnationClass::full_circle: return "full-circle";
        case StagnationClass::interior_present: return "interior-present";
    }
    return "?";
}

enum class Location { interior, inner_boundary, outer_boundary };

inline const char* to_string(Location l) {
    switch (l) {
        case Location::interior: return "interior";
        case Location::inner_boundary: return "inner-boundary";
        case Location::outer_boundary: return "outer-boundary";
    }
    return "?";
}

struct StagnationCluster {
    Vec2 center;
    std::size_t size = 0;
    Location location = Location::interior;
    bool full_circle = false;
    double radius = 0.0;  // mean radius of the members
};

struct StagnationReport {
    std::vector<Vec2> interior_points;  // one representative per interior cluster
    std::vector<StagnationCluster> clusters;
    double boundary_inner_fraction = 0.0;
    double boundary_outer_fraction = 0.0;
    StagnationClass classification = StagnationClass::empty;
    double tol_speed = 0.0;
    bool degenerate = false;  // the field vanishes on the whole audit grid

    std::size_t count(Location l) const {
        return static_cast<std::size_t>(
            std::count_if(clusters.begin(), clusters.end(), [&](const auto& c) { return c.location == l; }));
    }
};

struct StagnationOptions {
    std::optional<double> tol_speed;  // default 1e-6 * median |v| on the audit grid
    std::size_t n_r = 97;
    std::size_t n_theta = 256;
};

namespace detail {

/// Single-linkage clustering with a uniform hash of cell size `link`.
inline std::vector<std::vector<std::size_t>> link_clusters(const std::vector<Vec2>& pts, double link) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    std::map<std::pair<long, long>, std::vector<std::size_t>> cells;
    auto cell_of = [&](Vec2 p) {
        return std::pair<long, long>{static_cast<long>(std::floor(p.x / link)), static_cast<long>(std::floor(p.y / link))};
    };
    for (std::size_t k = 0; k < n; ++k) cells[cell_of(pts[k])].push_back(k);
    for (std::size_t k = 0; k < n; ++k) {
        auto [cx, cy] = cell_of(pts[k]);
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy) {
                auto it = cells.find({cx + dx, cy + dy});
                if (it == cells.end()) continue;
                for (std::size_t m : it->second)
                    if (m > k && norm(pts[m] - pts[k]) <= link) parent[find(m)] = find(k);
            }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < n; ++k) groups[find(k)].push_back(k);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    return out;
}

/// Fraction of `bins` angular bins hit by the given points.
inline double angular_coverage(const std::vector<Vec2>& pts, std::size_t bins) {
    std::vector<char> hit(bins, 0);
    for (Vec2 p : pts) {
        double th = std::atan2(p.y, p.x);
        if (th < 0) th += kTwoPi;
        hit[std::min(bins - 1, static_cast<std::size_t>(th / kTwoPi * static_cast<double>(bins)))] = 1;
    }
    return static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / static_cast<double>(bins);
}

}  // namespace detail

/// Locates and classifies the stagnation set {|v| <= tol_speed} on the band.
/// Interior zeros are found from local minima of |v| on an audit grid refined
/// by damped Gauss-Newton; wall zeros from sign changes of v . e_theta.
inline StagnationReport classify_stagnation(const VectorField& field, const AnnularDomain& domain,
                                            StagnationOptions opts = {}) {
    PolarGrid grid = polar_grid(domain, opts.n_r, opts.n_theta);
    const std::size_t nr = grid.n_r(), nt = grid.n_theta();
    const auto& rs = grid.radii();
    std::vector<double> speed(nr * nt);
    parallel_for(nr, [&](std::size_t i) {
        for (std::size_t j = 0; j < nt; ++j) speed[i * nt + j] = norm(field.velocity(grid.node(i, j)));
    });
    std::vector<double> sorted = speed;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];

    StagnationReport rep;
    rep.tol_speed = opts.tol_speed.value_or(1e-6 * median);
    const double tol = rep.tol_speed;
    if (*std::max_element(speed.begin(), speed.end()) <= tol) {
        rep.degenerate = true;
        rep.classification = StagnationClass::interior_present;
        rep.boundary_inner_fraction = domain.has_inner_wall() ? 1.0 : 0.0;
        rep.boundary_outer_fraction = domain.has_outer_wall() ? 1.0 : 0.0;
        return rep;
    }

    double step = 0.0;
    for (std::size_t i = 1; i < nr; ++i) step = std::max(step, rs[i] - rs[i - 1]);
    step = std::max(step, rs.back() * grid.dtheta());
    const double link = 3.0 * step;
    const double lo = grid.r_min(), hi = grid.r_max();
    const bool inner_wall = domain.has_inner_wall() && lo == domain.inner_radius();
    const bool outer_wall = domain.has_outer_wall() && hi == domain.outer_radius();
    // Zeros closer to a wall than half the adjacent radial spacing belong to it.
    auto on_wall = [&](double r) {
        return (inner_wall && r - lo <= 0.5 * (rs[1] - rs[0])) || (outer_wall && hi - r <= 0.5 * (rs[nr - 1] - rs[nr - 2]));
    };

    // Interior candidates: non-strict local minima of |v| among 8 neighbours.
    std::vector<Vec2> interior;
    std::vector<std::size_t> seeds;
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            double s = speed[i * nt + j];
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di)
                for (int dj = -1; dj <= 1 && is_min; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    long ii = static_cast<long>(i) + di;
                    if (ii < 0 || ii >= static_cast<long>(nr)) continue;
                    std::size_t jj = (j + nt + static_cast<std::size_t>(dj + 1) - 1) % nt;
                    if (speed[static_cast<std::size_t>(ii) * nt + jj] < s) is_min = false;
                }
            if (is_min) seeds.push_back(i * nt + j);
        }
    std::vector<std::optional<Vec2>> refined(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t k) {
        Vec2 x = grid.node(seeds[k] / nt, seeds[k] % nt);
        for (int it = 0; it < 40; ++it) {
            if (domain.punctured() && norm(x) < 1e-9 * lo) {
                refined[k] = Vec2{0.0, 0.0};
                return;
            }
            Vec2 v = field.velocity(x);
            if (!std::isfinite(v.x) || !std::isfinite(v.y)) return;
            if (norm(v) <= tol) {
                refined[k] = norm(x) < lo ? Vec2{0.0, 0.0} : x;
                return;
            }
            Mat2 j = jacobian_at(field, x);
            // (J^T J + mu I) dx = -J^T v
            Mat2 jt = j.transpose();
            double n2 = j.a11 * j.a11 + j.a12 * j.a12 + j.a21 * j.a21 + j.a22 * j.a22;
            double mu = 1e-12 * n2 + 1e-300;
            Mat2 a{jt.a11 * j.a11 + jt.a12 * j.a21 + mu, jt.a11 * j.a12 + jt.a12 * j.a22,
                   jt.a21 * j.a11 + jt.a22 * j.a21, jt.a21 * j.a12 + jt.a22 * j.a22 + mu};
            Vec2 g = jt * v;
            double det = a.det();
            Vec2 dx{-(a.a22 * g.x - a.a12 * g.y) / det, -(-a.a21 * g.x + a.a11 * g.y) / det};
            if (norm(dx) > step) dx = dx * (step / norm(dx));
            x += dx;
            // Iterates may enter the puncture, where they converge to the origin.
            double r = norm(x);
            double floor_r = domain.punctured() ? 0.0 : lo;
            if (r < floor_r || r > hi) x = x * (std::clamp(r, floor_r, hi) / r);
        }
    });
    for (const auto& p : refined)
        if (p && (norm(*p) == 0.0 || !on_wall(norm(*p)))) interior.push_back(*p);
    // A zero whose whole circle is stagnant is a ring; sample it densely so
    // that it clusters as one full circle.
    std::vector<double> ring_radii;
    for (std::size_t k = 0, n0 = interior.size(); k < n0; ++k) {
        double r = norm(interior[k]);
        if (r == 0.0) continue;
        if (std::any_of(ring_radii.begin(), ring_radii.end(), [&](double q) { return std::abs(q - r) < 0.5 * step; }))
            continue;
        std::vector<Vec2> ring;
        for (const Vec2& x : circle_samples(r, 4 * nt)) {
            if (norm(field.velocity(x)) > tol) {
                ring.clear();
                break;
            }
            ring.push_back(x);
        }
        if (ring.empty()) continue;
        ring_radii.push_back(r);
        interior.insert(interior.end(), ring.begin(), ring.end());
    }

    // Wall circles: dense sampling of v . e_theta.
    auto wall_points = [&](double r, double& fraction) {
        const std::size_t n = 4 * nt;
        std::vector<Vec2> pts;
        std::vector<double> vt(n), sp(n);
        std::size_t covered = 0;
        for (std::size_t k = 0; k < n; ++k) {
            Vec2 x = polar_point(r, kTwoPi * static_cast<double>(k) / static_cast<double>(n));
            Vec2 v = field.velocity(x);
            vt[k] = dot(v, unit_angular(x));
            sp[k] = norm(v);
            if (sp[k] <= tol) {
                pts.push_back(x);
                ++covered;
            }
        }
        std::size_t isolated = 0;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t k1 = (k + 1) % n;
            if (sp[k] <= tol || sp[k1] <= tol || (vt[k] > 0) == (vt[k1] > 0)) continue;
            double ta = kTwoPi * static_cast<double>(k) / static_cast<double>(n), tb = ta + kTwoPi / static_cast<double>(n);
            double fa = vt[k];
            for (int it = 0; it < 60; ++it) {
                double tm = 0.5 * (ta + tb);
                Vec2 x = polar_point(r, tm);
                double fm = dot(field.velocity(x), unit_angular(x));
                if ((fm > 0) == (fa > 0)) ta = tm, fa = fm;
                else tb = tm;
            }
            pts.push_back(polar_point(r, 0.5 * (ta + tb)));
            ++isolated;
        }
        fraction = static_cast<double>(covered + isolated) / static_cast<double>(n);
        fraction = std::min(fraction, 1.0);
        return pts;
    };
    std::vector<Vec2> inner_pts, outer_pts;
    if (inner_wall) inner_pts = wall_points(lo, rep.boundary_inner_fraction);
    if (outer_wall) outer_pts = wall_points(hi, rep.boundary_outer_fraction);

    auto add_clusters = [&](const std::vector<Vec2>& pts, Location loc) {
        for (const auto& members : detail::link_clusters(pts, link)) {
            StagnationCluster c;
            c.location = loc;
            c.size = members.size();
            std::vector<Vec2> mp;
            Vec2 sum;
            double rsum = 0.0;
            for (std::size_t m : members) {
                mp.push_back(pts[m]);
                sum += pts[m];
                rsum += norm(pts[m]);
            }
            c.center = sum / static_cast<double>(members.size());
            c.radius = rsum / static_cast<double>(members.size());
            c.full_circle = detail::angular_coverage(mp, 256) > 0.99;
            // A ring on the puncture's truncation circle is the origin itself.
            if (loc == Location::interior && domain.punctured() && c.full_circle &&
                c.radius <= lo * (1 + 1e-6) + 0.5 * step) {
                c.full_circle = false;
                c.center = {0.0, 0.0};
                c.radius = 0.0;
            }
            rep.clusters.push_back(c);
            if (loc == Location::interior) rep.interior_points.push_back(c.center);
        }
    };
    add_clusters(interior, Location::interior);
    add_clusters(inner_pts, Location::inner_boundary);
    add_clusters(outer_pts, Location::outer_boundary);

    bool any_full = std::any_of(rep.clusters.begin(), rep.clusters.end(), [](const auto& c) { return c.full_circle; });
    std::size_t n_in = rep.count(Location::interior), n_ci = rep.count(Location::inner_boundary),
                n_co = rep.count(Location::outer_boundary);
    if (rep.clusters.empty()) rep.classification = StagnationClass::empty;
    else if (any_full) rep.classification = StagnationClass::full_circle;
    else if (n_in > 0) rep.classification = StagnationClass::interior_present;
    else if (n_ci > 0 && n_co > 0) rep.classification = StagnationClass::both_boundaries;
    else if (n_ci > 0) rep.classification = StagnationClass::proper_subset_inner;
    else rep.classification = StagnationClass::proper_subset_outer;
    return rep;
}

// ---------------------------------------------------------------------------
// Radial decay

enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

struct DecayRow {
    double radius = 0.0;
    double sup_r_vr = 0.0;  // sup over C_r of |x| |v . e_r|
    double flux_abs = 0.0;  // integral over C_r of |v . e_r|
};

struct DecayReport {
    std::vector<DecayRow> rows;
    double slope_sup = 0.0;   // log-log least-squares slope of sup_r_vr against r
    double slope_flux = 0.0;  // same for flux_abs
    /// sup |x||v.e_r| -> 0 as r grows (pointwise decay towards infinity).
    Verdict decay_at_infinity = Verdict::inconclusive;
    /// flux_abs -> 0 as r shrinks (flux condition at the puncture).
    Verdict flux_at_puncture = Verdict::inconclusive;
};

namespace detail {
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        double lx = std::log(x[k]), ly = std::log(y[k]);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}
}  // namespace detail

/// Per-radius decay quantities with finite-radius trend verdicts. A quantity
/// that is zero to 1e-12 of the speed scale passes outright; otherwise the
/// log-log slope decides (|slope| >= 0.5 in the decaying direction passes,
/// a slope within 0.05 of flat or growing fails).
inline DecayReport radial_decay_report(const VectorField& field, std::vector<double> radii, std::size_t n = 512) {
    require(radii.size() >= 2, "radial_decay_report: need at least two radii");
    std::sort(radii.begin(), radii.end());
    DecayReport rep;
    rep.rows.resize(radii.size());
    double scale = 0.0;
    parallel_for(radii.size(), [&](std::size_t k) {
        double r = radii[k];
        field.domain.require_in_band(r, "radial_decay_report: radius");
        DecayRow row;
        row.radius = r;
        for (const Vec2& x : circle_samples(r, n)) row.sup_r_vr = std::max(row.sup_r_vr, r * std::abs(radial_velocity(field, x)));
        row.flux_abs = flux_abs_on_circle(field, r, n);
        rep.rows[k] = row;
    });
    for (double r : radii) scale = std::max(scale, speed_on_circle(field, r, 64));
    const double zero = 1e-12 * std::max(scale, 1e-300);

    std::vector<double> rx, sup, flux;
    bool sup_zero = true, flux_zero = true;
    for (const auto& row : rep.rows) {
        rx.push_back(row.radius);
        sup.push_back(std::max(row.sup_r_vr, 1e-300));
        flux.push_back(std::max(row.flux_abs, 1e-300));
        sup_zero = sup_zero && row.sup_r_vr <= zero * row.radius;
        flux_zero = flux_zero && row.flux_abs <= zero;
    }
    rep.slope_sup = sup_zero ? 0.0 : detail::loglog_slope(rx, sup);
    rep.slope_flux = flux_zero ? 0.0 : detail::loglog_slope(rx, flux);
    auto decide = [](bool is_zero, double slope_towards_limit) {
        if (is_zero) return Verdict::pass;
        if (slope_towards_limit <= -0.5) return Verdict::pass;
        if (slope_towards_limit >= -0.05) return Verdict::fail;
        return Verdict::inconclusive;
    };
    rep.decay_at_infinity = decide(sup_zero, rep.slope_sup);
    // Towards the puncture r decreases, so a decaying flux has positive slope.
    rep.flux_at_puncture = decide(flux_zero, -rep.slope_flux);
    return rep;
}

}  // namespace annulus_lab
