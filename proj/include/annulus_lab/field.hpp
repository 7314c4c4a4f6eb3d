#pragma once

// Planar velocity fields and pointwise differential operators.

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "annulus_lab/core.hpp"
#include "annulus_lab/expr.hpp"
#include "annulus_lab/geometry.hpp"
#include "annulus_lab/interp.hpp"

namespace annulus_lab {

enum class FieldKind { catalog, expression, grid_sampled };

inline const char* to_string(FieldKind k) {
    switch (k) {
        case FieldKind::catalog: return "catalog";
        case FieldKind::expression: return "expression";
        case FieldKind::grid_sampled: return "grid-sampled";
    }
    return "?";
}

/// Value, Cartesian gradient and Hessian of a stream function at a point.
struct StreamJet {
    double u = 0.0;
    Vec2 grad;
    Mat2 hess;
};

/// Derivatives of u(r, theta) in polar coordinates.
struct PolarJet {
    double u = 0.0, ur = 0.0, ut = 0.0, urr = 0.0, urt = 0.0, utt = 0.0;
};

/// Converts polar derivatives at x to the Cartesian jet.
inline StreamJet to_cartesian(const PolarJet& p, Vec2 x) {
    double r = norm(x);
    Vec2 er = x / r, et = perp(er);
    double hrr = p.urr;
    double hrt = p.urt / r - p.ut / (r * r);
    double htt = p.ur / r + p.utt / (r * r);
    // H = Q diag-block Q^T with Q = [e_r e_theta].
    Mat2 h{hrr * er.x * er.x + 2 * hrt * er.x * et.x + htt * et.x * et.x,
           hrr * er.x * er.y + hrt * (er.x * et.y + et.x * er.y) + htt * et.x * et.y, 0.0,
           hrr * er.y * er.y + 2 * hrt * er.y * et.y + htt * et.y * et.y};
    h.a21 = h.a12;
    return {p.u, p.ur * er + (p.ut / r) * et, h};
}

/// Evaluatable planar velocity field with optional analytic extras.
struct VectorField {
    FieldKind kind = FieldKind::catalog;
    std::string name;
    AnnularDomain domain = make_annulus(1.0, 2.0);
    std::function<Vec2(Vec2)> velocity;
    std::optional<std::function<Mat2(Vec2)>> jacobian;
    std::optional<std::function<double(Vec2)>> pressure;
    std::optional<std::function<Vec2(Vec2)>> pressure_gradient;
    /// Closed-form stream function (grad-perp u = v) when one is known.
    std::optional<std::function<StreamJet(Vec2)>> stream;

    Vec2 operator()(Vec2 x) const { return velocity(x); }
};

/// Step used by all finite-difference fallbacks.
inline double fd_step(Vec2 x) { return std::max(1e-5, 1e-4 * norm(x)); }

template <class F>
auto central_diff4_dir(const F& f, Vec2 x, Vec2 dir, double h) {
    return (-f(x + 2 * h * dir) + 8.0 * f(x + h * dir) - 8.0 * f(x - h * dir) + f(x - 2 * h * dir)) * (1.0 / (12 * h));
}

/// Analytic Jacobian when attached, otherwise 4th-order central differences.
inline Mat2 jacobian_at(const VectorField& field, Vec2 x) {
    if (field.jacobian) return (*field.jacobian)(x);
    double h = fd_step(x);
    Vec2 dx = central_diff4_dir(field.velocity, x, {1, 0}, h);
    Vec2 dy = central_diff4_dir(field.velocity, x, {0, 1}, h);
    return {dx.x, dy.x, dx.y, dy.y};
}

/// Field whose velocity is grad-perp of the given stream jet:
/// v = (-du/dx2, du/dx1), with the Jacobian read off the Hessian.
inline VectorField field_from_stream(std::string name, AnnularDomain domain, std::function<StreamJet(Vec2)> jet) {
    VectorField f;
    f.kind = FieldKind::catalog;
    f.name = std::move(name);
    f.domain = domain;
    f.velocity = [jet](Vec2 x) {
        StreamJet s = jet(x);
        return Vec2{-s.grad.y, s.grad.x};
    };
    f.jacobian = [jet](Vec2 x) {
        StreamJet s = jet(x);
        return Mat2{-s.hess.a21, -s.hess.a22, s.hess.a11, s.hess.a12};
    };
    f.stream = std::move(jet);
    return f;
}

inline double vorticity_at(const VectorField& field, Vec2 x) {
    field.domain.require_in_band(norm(x), "vorticity_at: point");
    Mat2 j = jacobian_at(field, x);
    return j.a21 - j.a12;
}

inline double divergence_at(const VectorField& field, Vec2 x) {
    field.domain.require_in_band(norm(x), "divergence_at: point");
    return jacobian_at(field, x).trace();
}

/// v . grad(omega) by 4th-order differences of the vorticity.
inline double vorticity_transport_at(const VectorField& field, Vec2 x) {
    field.domain.require_in_band(norm(x), "vorticity_transport_at: point");
    auto omega = [&](Vec2 p) {
        Mat2 j = jacobian_at(field, p);
        return j.a21 - j.a12;
    };
    double h = fd_step(x);
    double gx = central_diff4_dir(omega, x, {1, 0}, h);
    double gy = central_diff4_dir(omega, x, {0, 1}, h);
    return dot(field.velocity(x), {gx, gy});
}

class MissingPressureError : public Error {
  public:
    MissingPressureError()
        : Error("euler_residual: field has no pressure; build one with bernoulli_pressure from a vorticity profile") {}
};

inline Vec2 pressure_gradient_at(const VectorField& field, Vec2 x) {
    if (field.pressure_gradient) return (*field.pressure_gradient)(x);
    if (!field.pressure) throw MissingPressureError();
    double h = fd_step(x);
    return {central_diff4_dir(*field.pressure, x, {1, 0}, h), central_diff4_dir(*field.pressure, x, {0, 1}, h)};
}

/// (v . grad) v + grad p at x; vanishes for steady Euler solutions.
inline Vec2 euler_residual(const VectorField& field, Vec2 x) {
    field.domain.require_in_band(norm(x), "euler_residual: point");
    if (!field.pressure && !field.pressure_gradient) throw MissingPressureError();
    Vec2 v = field.velocity(x);
    return jacobian_at(field, x) * v + pressure_gradient_at(field, x);
}

/// Radial component v . e_r.
inline double radial_velocity(const VectorField& field, Vec2 x) { return dot(field.velocity(x), unit_radial(x)); }
/// Angular component v . e_theta.
inline double angular_velocity(const VectorField& field, Vec2 x) { return dot(field.velocity(x), unit_angular(x)); }

inline double polar_angle(Vec2 x) { return std::atan2(x.y, x.x); }

/// Field v = v_r(r, theta) e_r + v_theta(r, theta) e_theta from expressions
/// over the variables (r, theta). Derivatives fall back to differences.
inline VectorField expression_field(const std::string& v_r_text, const std::string& v_theta_text, AnnularDomain domain) {
    auto vr = std::make_shared<Expression>(Expression::parse(v_r_text, {"r", "theta"}));
    auto vt = std::make_shared<Expression>(Expression::parse(v_theta_text, {"r", "theta"}));
    VectorField f;
    f.kind = FieldKind::expression;
    f.name = "expression(v_r=" + vr->print() + ", v_theta=" + vt->print() + ")";
    f.domain = domain;
    f.velocity = [vr, vt](Vec2 x) {
        double r = norm(x), th = polar_angle(x);
        double a = (*vr)({r, th}), b = (*vt)({r, th});
        Vec2 er = x / r;
        return a * er + b * perp(er);
    };
    return f;
}

/// Copy of a field sampled on a polar grid; bilinear in (r, theta) on the
/// polar components with periodic wrap in theta.
inline VectorField grid_sampled_field(const VectorField& source, const PolarGrid& grid) {
    struct Samples {
        PolarGrid grid;
        std::vector<double> vr, vt;  // row-major (i, j)
    };
    auto s = std::make_shared<Samples>(Samples{grid, {}, {}});
    const std::size_t nr = grid.n_r(), nt = grid.n_theta();
    s->vr.resize(nr * nt);
    s->vt.resize(nr * nt);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            Vec2 x = grid.node(i, j);
            Vec2 v = source.velocity(x);
            s->vr[i * nt + j] = dot(v, unit_radial(x));
            s->vt[i * nt + j] = dot(v, unit_angular(x));
        }
    VectorField f;
    f.kind = FieldKind::grid_sampled;
    f.name = "grid(" + source.name + ")";
    f.domain = source.domain;
    f.velocity = [s](Vec2 x) {
        const auto& g = s->grid;
        double r = norm(x);
        if (r < g.r_min() * (1 - 1e-12) || r > g.r_max() * (1 + 1e-12))
            throw OutOfBandError("grid-sampled field evaluated off its grid", r);
        std::size_t i = bracket(g.radii(), r);
        double tr = std::clamp((r - g.radii()[i]) / (g.radii()[i + 1] - g.radii()[i]), 0.0, 1.0);
        double th = polar_angle(x);
        if (th < 0) th += kTwoPi;
        double pos = th / g.dtheta();
        std::size_t nt = g.n_theta();
        std::size_t j = static_cast<std::size_t>(std::floor(pos)) % nt;
        double tt = pos - std::floor(pos);
        std::size_t j1 = (j + 1) % nt;
        auto lerp2 = [&](const std::vector<double>& a) {
            double lo = (1 - tt) * a[i * nt + j] + tt * a[i * nt + j1];
            double hi = (1 - tt) * a[(i + 1) * nt + j] + tt * a[(i + 1) * nt + j1];
            return (1 - tr) * lo + tr * hi;
        };
        Vec2 er = x / r;
        return lerp2(s->vr) * er + lerp2(s->vt) * perp(er);
    };
    return f;
}

}  // namespace annulus_lab
