#pragma once

// Discrete moving planes: reflections, cap regions and the comparison
// phi(x) <= phi(x_{e,lambda}); circularity scores, critical points and the
// overdetermined boundary audit.

#include <optional>
#include <string>
#include <vector>

#include "annulus_lab/geometry.hpp"
#include "annulus_lab/stream.hpp"

namespace annulus_lab {

struct ReflectionSpec {
    Vec2 e{1.0, 0.0};
    double lambda = 0.0;

    ReflectionSpec() = default;
    ReflectionSpec(Vec2 dir, double lam) : lambda(lam) {
        double n = norm(dir);
        require(n > 0.0 && std::isfinite(n), "ReflectionSpec: direction must be non-zero");
        e = dir / n;
    }
    static ReflectionSpec from_angle(double angle, double lam) { return {{std::cos(angle), std::sin(angle)}, lam}; }
};

/// x_{e,lambda} = x - 2 (x . e - lambda) e.
inline Vec2 reflect_point(const ReflectionSpec& s, Vec2 x) { return x - (2.0 * (dot(x, s.e) - s.lambda)) * s.e; }

inline double signed_inside_distance(const JordanPolygon& poly, Vec2 x) {
    double d = poly.boundary_distance(x);
    return poly.raw_winding(x) != 0 ? d : -d;
}

struct InclusionResult {
    bool included = true;
    double margin = kInf;  // min signed distance of reflected cap points to the boundary
    std::size_t tested = 0;
};

/// Cap boundary samples: vertices and edge midpoints strictly beyond the line.
inline std::vector<Vec2> cap_boundary_points(const JordanPolygon& poly, const ReflectionSpec& s) {
    std::vector<Vec2> out;
    for (std::size_t k = 0; k < poly.size(); ++k) {
        Vec2 a = poly.vertex(k), b = poly.vertex(k + 1), m = 0.5 * (a + b);
        if (dot(a, s.e) > s.lambda) out.push_back(a);
        if (dot(m, s.e) > s.lambda) out.push_back(m);
    }
    return out;
}

/// Checks that the reflection of the cap of `outer` beyond the line lies
/// strictly inside `outer`.
inline InclusionResult reflection_inclusion(const JordanPolygon& outer, const ReflectionSpec& s) {
    if (!outer.is_simple()) throw PreconditionError("reflection_inclusion: polygon is not simple");
    InclusionResult res;
    for (Vec2 p : cap_boundary_points(outer, s)) {
        double m = signed_inside_distance(outer, reflect_point(s, p));
        res.margin = std::min(res.margin, m);
        ++res.tested;
    }
    res.included = res.margin > 0.0;
    return res;
}

class HypothesisError : public Error {
  public:
    HypothesisError(std::string which, const std::string& what) : Error(what), which_(std::move(which)) {}
    /// "outer-reflection" or "inner-reflection".
    const std::string& which() const { return which_; }

  private:
    std::string which_;
};

/// The cap {x . e > lambda} of the region between Xi (outer) and Xi' (inner),
/// with the reflection of the closed inner region removed.
class CapRegion {
  public:
    CapRegion(ReflectionSpec spec, JordanPolygon outer, JordanPolygon inner, double outer_margin, double inner_margin)
        : spec_(spec), outer_(std::move(outer)), inner_(std::move(inner)), outer_margin_(outer_margin),
          inner_margin_(inner_margin) {
        lambda_bar_ = -kInf;
        for (Vec2 v : outer_.vertices()) lambda_bar_ = std::max(lambda_bar_, dot(v, spec_.e));
    }

    const ReflectionSpec& spec() const { return spec_; }
    const JordanPolygon& outer() const { return outer_; }
    const JordanPolygon& inner() const { return inner_; }
    double outer_margin() const { return outer_margin_; }
    double inner_margin() const { return inner_margin_; }
    /// max over Xi of x . e; the cap is empty for lambda >= lambda_bar.
    double lambda_bar() const { return lambda_bar_; }
    bool empty() const { return spec_.lambda >= lambda_bar_; }

    bool contains(Vec2 x) const {
        if (!(dot(x, spec_.e) > spec_.lambda)) return false;
        if (locate(outer_, x) != PointLocation::inside) return false;
        if (locate(inner_, x) != PointLocation::outside) return false;
        return locate(inner_, reflect_point(spec_, x)) == PointLocation::outside;
    }

  private:
    ReflectionSpec spec_;
    JordanPolygon outer_, inner_;
    double outer_margin_, inner_margin_;
    double lambda_bar_;
};

/// Validates both reflection hypotheses and builds the cap.
inline CapRegion build_cap(const JordanPolygon& outer, const JordanPolygon& inner, const ReflectionSpec& s) {
    for (Vec2 v : inner.vertices())
        if (locate(outer, v) != PointLocation::inside)
            throw PreconditionError("build_cap: inner curve is not strictly inside the outer curve");
    InclusionResult out = reflection_inclusion(outer, s);
    if (!out.included)
        throw HypothesisError("outer-reflection", "build_cap: reflected cap of the outer curve leaves the outer region (margin " +
                                                      std::to_string(out.margin) + ")");
    if (!inner.is_simple()) throw PreconditionError("build_cap: inner polygon is not simple");
    double inner_margin = kInf;
    for (Vec2 p : cap_boundary_points(inner, s)) inner_margin = std::min(inner_margin, signed_inside_distance(inner, reflect_point(s, p)));
    if (!(inner_margin > 0.0))
        throw HypothesisError("inner-reflection", "build_cap: reflected cap of the inner curve leaves the inner region (margin " +
                                                      std::to_string(inner_margin) + ")");
    return CapRegion(s, outer, inner, out.margin, inner_margin);
}

struct DeficitResult {
    double deficit = 0.0;      // max (phi(x) - phi(x_{e,lambda}))_+
    Vec2 worst;                // where the maximum is attained
    std::size_t audited = 0;   // cap points evaluated
    std::size_t attempts = 0;  // quasi-random candidates drawn
};

/// max over quasi-random cap points of (phi(x) - phi(x_{e,lambda}))_+, with
/// phi sampled on `sg` (phi = c1 on the outer curve, c2 > c1 on the inner).
inline DeficitResult moving_plane_deficit(const StreamGrid& sg, const CapRegion& cap, std::size_t n_audit = 4096) {
    DeficitResult res;
    if (cap.empty()) return res;
    Vec2 lo = cap.outer().bbox_min(), hi = cap.outer().bbox_max();
    const std::size_t max_attempts = 64 * n_audit;
    std::size_t k = 0;
    while (res.audited < n_audit && k < max_attempts) {
        Vec2 q = halton2(k++);
        Vec2 x{lo.x + q.x * (hi.x - lo.x), lo.y + q.y * (hi.y - lo.y)};
        if (!cap.contains(x)) continue;
        double d = sg.value_at(x) - sg.value_at(reflect_point(cap.spec(), x));
        if (d > res.deficit) {
            res.deficit = d;
            res.worst = x;
        }
        ++res.audited;
    }
    res.attempts = k;
    return res;
}

struct SweepRow {
    double e_angle = 0.0;
    double lambda = 0.0;
    double deficit = 0.0;
    std::size_t audited = 0;
    std::string status;  // ok | empty | outer-reflection | inner-reflection
};

/// Deficits over `directions` equally spaced e and the given lambdas, in
/// row-major (direction, lambda) order.
inline std::vector<SweepRow> deficit_sweep(const StreamGrid& sg, const JordanPolygon& outer, const JordanPolygon& inner,
                                           std::size_t directions, const std::vector<double>& lambdas,
                                           std::size_t n_audit = 2048) {
    std::vector<SweepRow> rows(directions * lambdas.size());
    parallel_for(rows.size(), [&](std::size_t k) {
        SweepRow row;
        row.e_angle = kTwoPi * static_cast<double>(k / lambdas.size()) / static_cast<double>(directions);
        row.lambda = lambdas[k % lambdas.size()];
        try {
            CapRegion cap = build_cap(outer, inner, ReflectionSpec::from_angle(row.e_angle, row.lambda));
            if (cap.empty()) {
                row.status = "empty";
            } else {
                DeficitResult d = moving_plane_deficit(sg, cap, n_audit);
                row.deficit = d.deficit;
                row.audited = d.audited;
                row.status = "ok";
            }
        } catch (const HypothesisError& e) {
            row.status = e.which();
            row.deficit = std::numeric_limits<double>::quiet_NaN();
        }
        rows[k] = row;
    });
    return rows;
}

// ---------------------------------------------------------------------------
// Circularity and critical points

/// max over grid radii of the circle oscillation divided by the range of u.
inline double radial_deviation(const StreamGrid& sg) {
    double range = sg.max_value() - sg.min_value();
    if (range == 0.0) return 0.0;
    const auto& rs = sg.grid().radii();
    std::vector<double> osc(rs.size());
    parallel_for(rs.size(), [&](std::size_t i) { osc[i] = circle_oscillation(sg, rs[i]); });
    return std::min(1.0, *std::max_element(osc.begin(), osc.end()) / range);
}

struct CriticalCluster {
    Vec2 center;
    Location location = Location::interior;
    std::size_t nodes = 0;
    double min_gradient = 0.0;
    bool ring = false;  // covers > 99% of the angles
};

inline double max_node_gradient(const StreamGrid& sg) {
    double m = 0.0;
    for (std::size_t i = 0; i < sg.grid().n_r(); ++i)
        for (std::size_t j = 0; j < sg.grid().n_theta(); ++j) {
            auto [a, b] = sg.node_polar_gradient(i, j);
            m = std::max(m, std::hypot(a, b));
        }
    return m;
}

/// Clusters of nodes where the difference gradient is at most tol. A cluster
/// touching the first or last row is a boundary cluster when that row is a
/// wall; one touching the truncation circle of a puncture is the origin.
inline std::vector<CriticalCluster> critical_points(const StreamGrid& sg, double tol) {
    const PolarGrid& g = sg.grid();
    const AnnularDomain& d = g.domain();
    const std::size_t nr = g.n_r(), nt = g.n_theta();
    const auto& rs = g.radii();
    std::vector<Vec2> pts;
    std::vector<std::size_t> rows;
    std::vector<double> grads;
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            auto [a, b] = sg.node_polar_gradient(i, j);
            double gm = std::hypot(a, b);
            if (gm <= tol) {
                pts.push_back(g.node(i, j));
                rows.push_back(i);
                grads.push_back(gm);
            }
        }
    double step = rs.back() * g.dtheta();
    for (std::size_t i = 1; i < nr; ++i) step = std::max(step, rs[i] - rs[i - 1]);
    const bool inner_wall = d.has_inner_wall() && g.r_min() == d.inner_radius();
    const bool outer_wall = d.has_outer_wall() && g.r_max() == d.outer_radius();

    std::vector<CriticalCluster> out;
    for (const auto& members : detail::link_clusters(pts, 3.0 * step)) {
        CriticalCluster c;
        c.nodes = members.size();
        c.min_gradient = kInf;
        bool first = false, last = false;
        std::vector<Vec2> mp;
        std::size_t best = members.front();
        for (std::size_t m : members) {
            first = first || rows[m] == 0;
            last = last || rows[m] == nr - 1;
            mp.push_back(pts[m]);
            if (grads[m] < c.min_gradient) c.min_gradient = grads[m], best = m;
        }
        c.center = pts[best];
        c.ring = detail::angular_coverage(mp, std::max<std::size_t>(8, nt / 2)) > 0.99;
        if (first && inner_wall) c.location = Location::inner_boundary;
        else if (last && outer_wall) c.location = Location::outer_boundary;
        else if (first && d.punctured() && c.ring) {
            c.center = {0.0, 0.0};
            c.ring = false;
        }
        out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const auto& p, const auto& q) {
        return std::atan2(p.center.y, p.center.x) < std::atan2(q.center.y, q.center.x);
    });
    return out;
}

/// Default threshold: 2% of the largest node gradient.
inline double default_critical_tol(const StreamGrid& sg) { return 0.02 * max_node_gradient(sg); }

// ---------------------------------------------------------------------------
// Overdetermined boundary audit

struct OverdeterminedAudit {
    double osc_u = 0.0;
    double osc_normal_derivative = 0.0;
    double mean_normal_derivative = 0.0;
    std::size_t samples = 0;
};

/// Oscillation of u and of the outward normal derivative over the polygon
/// vertices. The derivative uses a one-sided three-point stencil on whichever
/// side of the curve the grid band covers.
inline OverdeterminedAudit overdetermined_audit(const StreamGrid& sg, const JordanPolygon& boundary) {
    const auto& rs = sg.grid().radii();
    const std::size_t n = boundary.size();
    const double orient = boundary.orientation();
    OverdeterminedAudit a;
    double ulo = kInf, uhi = -kInf, dlo = kInf, dhi = -kInf, dsum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        Vec2 p = boundary.vertex(k), prev = boundary.vertex(k + n - 1), next = boundary.vertex(k + 1);
        auto edge_normal = [&](Vec2 a0, Vec2 b0) {
            Vec2 t = b0 - a0;
            return orient * Vec2{t.y, -t.x} / norm(t);
        };
        Vec2 nrm = edge_normal(prev, p) + edge_normal(p, next);
        nrm = nrm / norm(nrm);
        double r = norm(p);
        std::size_t i = bracket(rs, r);
        double h = rs[i + 1] - rs[i];
        double side = 0.0;
        for (double s : {-1.0, 1.0})
            if (sg.in_band(norm(p + (2 * h * s) * nrm)) && sg.in_band(norm(p + (h * s) * nrm))) {
                side = s;
                break;
            }
        if (side == 0.0) throw OutOfBandError("overdetermined_audit: one-sided stencil leaves the grid band", r);
        double u0 = sg.value_at(p);
        double deriv = (-3 * u0 + 4 * sg.value_at(p + (h * side) * nrm) - sg.value_at(p + (2 * h * side) * nrm)) / (2 * h);
        double dn = side * deriv;
        ulo = std::min(ulo, u0), uhi = std::max(uhi, u0);
        dlo = std::min(dlo, dn), dhi = std::max(dhi, dn);
        dsum += dn;
    }
    a.samples = n;
    a.osc_u = uhi - ulo;
    a.osc_normal_derivative = dhi - dlo;
    a.mean_normal_derivative = dsum / static_cast<double>(n);
    return a;
}

}  // namespace annulus_lab
