#pragma once

// Annular domains, polar grids, circle samples and polygonal Jordan curves.

#include <optional>
#include <string>
#include <vector>

#include "annulus_lab/core.hpp"

namespace annulus_lab {

/// Optional truncation radii for punctured or unbounded domains.
struct Truncation {
    std::optional<double> inner;
    std::optional<double> outer;
};

/// The open annulus a < |x| < b, with 0 <= a < b <= inf. Grids and integrals
/// act on the truncated band [trunc_inner, trunc_outer].
class AnnularDomain {
  public:
    AnnularDomain(double inner, double outer, double trunc_inner, double trunc_outer)
        : inner_(inner), outer_(outer), trunc_inner_(trunc_inner), trunc_outer_(trunc_outer) {
        if (!(inner >= 0.0) || !(outer > inner))
            throw DomainError("annulus requires 0 <= a < b");
        if (!(trunc_inner > 0.0) || !(trunc_inner < trunc_outer) || trunc_inner < inner ||
            trunc_outer > outer || !std::isfinite(trunc_outer))
            throw DomainError("truncation radii must satisfy a <= trunc_inner < trunc_outer <= b, trunc_inner > 0");
    }

    double inner_radius() const { return inner_; }
    double outer_radius() const { return outer_; }
    double trunc_inner() const { return trunc_inner_; }
    double trunc_outer() const { return trunc_outer_; }

    bool punctured() const { return inner_ == 0.0; }
    bool unbounded() const { return std::isinf(outer_); }
    /// True when the inner circle C_a is a real wall (a > 0).
    bool has_inner_wall() const { return inner_ > 0.0; }
    bool has_outer_wall() const { return !unbounded(); }

    bool contains(Vec2 x) const {
        double r = norm(x);
        return inner_ < r && r < outer_;
    }

    /// Closed truncated band membership with a relative slack.
    bool in_band(double r, double rel_slack = 1e-12) const {
        return r >= trunc_inner_ * (1.0 - rel_slack) && r <= trunc_outer_ * (1.0 + rel_slack);
    }
    bool in_band(Vec2 x, double rel_slack = 1e-12) const { return in_band(norm(x), rel_slack); }

    void require_in_band(double r, const std::string& what) const {
        if (!in_band(r)) throw OutOfBandError(what + " outside truncated band", r);
    }

  private:
    double inner_, outer_, trunc_inner_, trunc_outer_;
};

/// Builds Omega_{a,b}. b may be kInf. Default truncations are
/// trunc_outer = min(b, 100 max(a,1)) and trunc_inner = max(a, trunc_outer/1000).
inline AnnularDomain make_annulus(double a, double b, Truncation trunc = {}) {
    if (!(a >= 0.0) || !(b > a)) throw DomainError("make_annulus: need 0 <= a < b (b may be infinite)");
    double t_out = trunc.outer.value_or(std::min(b, 100.0 * std::max(a, 1.0)));
    if (!(t_out > a) || t_out > b || !std::isfinite(t_out))
        throw DomainError("make_annulus: trunc_outer must lie in (a, b]");
    double t_in = trunc.inner.value_or(std::max(a, t_out / 1000.0));
    if (!(t_in >= a) || !(t_in > 0.0) || !(t_in < t_out))
        throw DomainError("make_annulus: trunc_inner must lie in [a, trunc_outer) and be positive");
    return AnnularDomain(a, b, t_in, t_out);
}

/// Tensor grid of radii x angles over the truncated band. Node (i, j) is
/// radii[i] * (cos angles[j], sin angles[j]); angles are periodic.
class PolarGrid {
  public:
    PolarGrid(AnnularDomain domain, std::vector<double> radii, std::size_t n_theta)
        : domain_(domain), radii_(std::move(radii)) {
        if (radii_.size() < 2) throw DomainError("polar grid needs at least two radii");
        for (std::size_t i = 1; i < radii_.size(); ++i)
            if (!(radii_[i] > radii_[i - 1])) throw DomainError("polar grid radii must be strictly increasing");
        if (n_theta < 8) throw DomainError("polar grid needs n_theta >= 8");
        angles_.resize(n_theta);
        for (std::size_t j = 0; j < n_theta; ++j) angles_[j] = kTwoPi * static_cast<double>(j) / n_theta;
    }

    const AnnularDomain& domain() const { return domain_; }
    const std::vector<double>& radii() const { return radii_; }
    const std::vector<double>& angles() const { return angles_; }
    std::size_t n_r() const { return radii_.size(); }
    std::size_t n_theta() const { return angles_.size(); }
    double dtheta() const { return kTwoPi / static_cast<double>(angles_.size()); }
    double r_min() const { return radii_.front(); }
    double r_max() const { return radii_.back(); }
    Vec2 node(std::size_t i, std::size_t j) const { return polar_point(radii_[i], angles_[j]); }

    /// True when radial spacing is geometric (constant ratio).
    bool geometric() const {
        double q0 = radii_[1] / radii_[0];
        double d0 = radii_[1] - radii_[0];
        bool uniform = std::abs((radii_.back() - radii_[radii_.size() - 2]) - d0) <= 1e-9 * d0;
        return !uniform && std::abs(radii_.back() / radii_[radii_.size() - 2] - q0) <= 1e-9 * q0;
    }

  private:
    AnnularDomain domain_;
    std::vector<double> radii_;
    std::vector<double> angles_;
};

/// Grid over [trunc_inner, trunc_outer] x [0, 2pi). Radii are geometric when
/// trunc_outer / trunc_inner > 10, uniform otherwise.
inline PolarGrid polar_grid(const AnnularDomain& domain, std::size_t n_r, std::size_t n_theta) {
    if (n_r < 4) throw DomainError("polar_grid: n_r must be >= 4");
    if (n_theta < 8) throw DomainError("polar_grid: n_theta must be >= 8");
    double lo = domain.trunc_inner(), hi = domain.trunc_outer();
    if (!(hi > lo)) throw DomainError("polar_grid: degenerate band");
    std::vector<double> radii(n_r);
    double steps = static_cast<double>(n_r - 1);
    if (hi / lo > 10.0) {
        double q = std::pow(hi / lo, 1.0 / steps);
        for (std::size_t i = 0; i < n_r; ++i) radii[i] = lo * std::pow(q, static_cast<double>(i));
    } else {
        for (std::size_t i = 0; i < n_r; ++i) radii[i] = lo + (hi - lo) * static_cast<double>(i) / steps;
    }
    radii.front() = lo;
    radii.back() = hi;
    return PolarGrid(domain, std::move(radii), n_theta);
}

/// n points r (cos 2 pi k/n, sin 2 pi k/n).
inline std::vector<Vec2> circle_samples(double r, std::size_t n) {
    if (!(r > 0.0)) throw PreconditionError("circle_samples: radius must be positive");
    if (n < 3) throw PreconditionError("circle_samples: need n >= 3");
    std::vector<Vec2> pts(n);
    for (std::size_t k = 0; k < n; ++k) pts[k] = polar_point(r, kTwoPi * static_cast<double>(k) / n);
    return pts;
}

// ---------------------------------------------------------------------------
// Polygonal Jordan curves

class BoundaryAmbiguityError : public Error {
  public:
    explicit BoundaryAmbiguityError(double distance)
        : Error("point lies on the polygon boundary (distance " + std::to_string(distance) + ")"),
          distance_(distance) {}
    double distance() const { return distance_; }

  private:
    double distance_;
};

inline double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    return norm(p - (a + t * ab));
}

/// Closed polygon; the closing edge from the last vertex back to the first is
/// implicit. orientation() is +1 for counter-clockwise vertex order.
class JordanPolygon {
  public:
    explicit JordanPolygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
        if (vertices_.size() >= 2 && norm(vertices_.front() - vertices_.back()) == 0.0) vertices_.pop_back();
        if (vertices_.size() < 3) throw DomainError("polygon needs at least three distinct vertices");
        double twice_area = 0.0;
        for (std::size_t k = 0; k < vertices_.size(); ++k) twice_area += cross(vertex(k), vertex(k + 1));
        area_ = 0.5 * twice_area;
        for (auto v : vertices_) {
            lo_.x = std::min(lo_.x, v.x), lo_.y = std::min(lo_.y, v.y);
            hi_.x = std::max(hi_.x, v.x), hi_.y = std::max(hi_.y, v.y);
        }
        if (!(std::abs(area_) > 1e-14 * dot(hi_ - lo_, hi_ - lo_))) throw DomainError("degenerate polygon (zero area)");
    }

    const std::vector<Vec2>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    /// Vertex with cyclic indexing.
    Vec2 vertex(std::size_t k) const { return vertices_[k % vertices_.size()]; }
    int orientation() const { return area_ > 0.0 ? 1 : -1; }
    double signed_area() const { return area_; }
    Vec2 bbox_min() const { return lo_; }
    Vec2 bbox_max() const { return hi_; }
    double scale() const { return norm(hi_ - lo_); }

    double boundary_distance(Vec2 p) const {
        double d = kInf;
        for (std::size_t k = 0; k < vertices_.size(); ++k) d = std::min(d, segment_distance(p, vertex(k), vertex(k + 1)));
        return d;
    }

    /// Winding number by signed upward/downward crossings; assumes p is off the boundary.
    int raw_winding(Vec2 p) const {
        int w = 0;
        for (std::size_t k = 0; k < vertices_.size(); ++k) {
            Vec2 a = vertex(k), b = vertex(k + 1);
            if (a.y <= p.y) {
                if (b.y > p.y && cross(b - a, p - a) > 0.0) ++w;
            } else if (b.y <= p.y && cross(b - a, p - a) < 0.0) {
                --w;
            }
        }
        return w;
    }

    JordanPolygon reversed() const {
        std::vector<Vec2> rev(vertices_.rbegin(), vertices_.rend());
        return JordanPolygon(std::move(rev));
    }

    /// O(n^2) check that no two non-adjacent edges intersect.
    bool is_simple() const {
        const std::size_t n = vertices_.size();
        auto orient = [](Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); };
        for (std::size_t i = 0; i < n; ++i) {
            Vec2 a = vertex(i), b = vertex(i + 1);
            for (std::size_t j = i + 2; j < n; ++j) {
                if (i == 0 && j == n - 1) continue;
                Vec2 c = vertex(j), d = vertex(j + 1);
                double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
                if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0)
                    return false;
            }
        }
        return true;
    }

  private:
    std::vector<Vec2> vertices_;
    double area_ = 0.0;
    Vec2 lo_{kInf, kInf}, hi_{-kInf, -kInf};
};

/// Default boundary tolerance: a relative 1e-12 of the polygon scale.
inline double default_boundary_tol(const JordanPolygon& poly) { return 1e-12 * std::max(1.0, poly.scale()); }

/// Signed winding number of poly about x. Throws BoundaryAmbiguityError when x
/// is within tol of an edge.
inline int winding_number(const JordanPolygon& poly, Vec2 x, std::optional<double> tol = std::nullopt) {
    double d = poly.boundary_distance(x);
    if (d <= tol.value_or(default_boundary_tol(poly))) throw BoundaryAmbiguityError(d);
    return poly.raw_winding(x);
}

enum class PointLocation { inside, outside, boundary };

/// Non-throwing membership: boundary when within tol of an edge.
inline PointLocation locate(const JordanPolygon& poly, Vec2 x, std::optional<double> tol = std::nullopt) {
    if (poly.boundary_distance(x) <= tol.value_or(default_boundary_tol(poly))) return PointLocation::boundary;
    return poly.raw_winding(x) != 0 ? PointLocation::inside : PointLocation::outside;
}

/// True when the bounded component of the complement contains the origin.
inline bool surrounds_origin(const JordanPolygon& poly) {
    return locate(poly, {0.0, 0.0}) == PointLocation::inside;
}

/// Regular n-gon inscribed in the circle of radius r about center (CCW).
inline JordanPolygon circle_polygon(double r, std::size_t n, Vec2 center = {}) {
    auto pts = circle_samples(r, n);
    for (auto& p : pts) p += center;
    return JordanPolygon(std::move(pts));
}

}  // namespace annulus_lab
