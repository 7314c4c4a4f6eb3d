#pragma once

// Orbits of v (streamlines) and of grad u (gradient curves), monotone charts
// along gradient curves, vorticity-function extraction and the semilinear
// residual on stream grids.

#include <optional>
#include <string>
#include <vector>

#include "annulus_lab/field.hpp"
#include "annulus_lab/interp.hpp"
#include "annulus_lab/ode.hpp"
#include "annulus_lab/profile.hpp"
#include "annulus_lab/stream.hpp"

namespace annulus_lab {

class StagnationError : public Error {
  public:
    StagnationError(const std::string& what, Vec2 where)
        : Error(what + " at (" + std::to_string(where.x) + ", " + std::to_string(where.y) + ")"), where_(where) {}
    Vec2 where() const { return where_; }

  private:
    Vec2 where_;
};

struct TracerOptions {
    StepControl control{};            // rtol 1e-9, atol 1e-12
    double max_step_fraction = 0.05;  // spatial step <= fraction * |x|
    double closure_rel = 1e-7;        // closure tolerance relative to orbit length
    std::size_t max_steps = 200000;
    double stagnation_tol = 1e-12;    // |v(x0)| below this is a stagnant seed
};

struct Streamline {
    Vec2 seed;
    std::vector<Vec2> polyline;
    std::vector<double> times;
    bool closed = false;
    std::optional<double> period;
    int winding = 0;
    double winding_residual = 0.0;
    bool suspect = false;  // winding residual >= 1e-3
    double r_min = 0.0, r_max = 0.0;
    double length = 0.0;
    double closure_gap = 0.0;
    double u_drift = 0.0;      // max |u - u(seed)|, when a stream function is attached
    double omega_drift = 0.0;  // max |omega - omega(seed)| along the vertices
    std::string termination;   // closed | closure-miss | step-limit
};

/// Traces dx/dt = v(x) from x0 until the orbit returns through the section
/// through x0 normal to v(x0).
inline Streamline trace_streamline(const VectorField& field, Vec2 x0, const TracerOptions& opts = {}) {
    field.domain.require_in_band(norm(x0), "trace_streamline: seed");
    const Vec2 v0 = field.velocity(x0);
    if (!(norm(v0) > opts.stagnation_tol)) throw StagnationError("trace_streamline: stagnant seed", x0);
    const Vec2 n0 = v0 / norm(v0);

    auto rhs = [&field](double, const State<2>& y) -> State<2> {
        Vec2 v = field.velocity({y[0], y[1]});
        return {v.x, v.y};
    };
    auto cap = [&](const State<2>& y) {
        Vec2 x{y[0], y[1]};
        return opts.max_step_fraction * norm(x) / std::max(norm(field.velocity(x)), 1e-300);
    };
    AdaptiveIntegrator<2, decltype(rhs)> integ(rhs, {x0.x, x0.y}, opts.control, cap, 1e-3 * cap({x0.x, x0.y}));
    auto section = [&](const State<2>& y) { return dot(Vec2{y[0], y[1]} - x0, n0); };

    Streamline s;
    s.seed = x0;
    s.polyline.push_back(x0);
    s.times.push_back(0.0);
    s.termination = "step-limit";
    double swept = 0.0;
    auto add_vertex = [&](Vec2 p, double t) {
        Vec2 prev = s.polyline.back();
        swept += std::atan2(cross(prev, p), dot(prev, p));
        s.length += norm(p - prev);
        s.polyline.push_back(p);
        s.times.push_back(t);
    };
    for (std::size_t k = 0; k < opts.max_steps; ++k) {
        if (!integ.step()) throw StagnationError("trace_streamline: step size collapsed", {integ.y()[0], integ.y()[1]});
        Vec2 x{integ.y()[0], integ.y()[1]};
        field.domain.require_in_band(norm(x), "trace_streamline: orbit left the band; position radius");
        double g_prev = section(integ.y_prev()), g_now = section(integ.y());
        if (k > 0 && g_prev < 0.0 && g_now >= 0.0) {
            double dt = integ.locate(section, 1e-15 * std::max(1.0, integ.t()));
            State<2> yc = integ.from_previous(dt);
            Vec2 xc{yc[0], yc[1]};
            double gap = norm(xc - x0);
            double length = s.length + norm(xc - s.polyline.back());
            double tol = opts.closure_rel * length;
            if (gap <= std::max(tol, 1e-4 * length)) {
                add_vertex(xc, integ.t_prev() + dt);
                s.closure_gap = gap;
                s.closed = gap <= tol;
                s.termination = s.closed ? "closed" : "closure-miss";
                if (s.closed) s.period = integ.t_prev() + dt;
                break;
            }
        }
        add_vertex(x, integ.t());
    }
    double turns = swept / kTwoPi;
    s.winding = static_cast<int>(std::lround(turns));
    s.winding_residual = std::abs(turns - s.winding);
    s.suspect = s.winding_residual >= 1e-3;

    s.r_min = kInf;
    s.r_max = 0.0;
    const double w0 = vorticity_at(field, x0);
    const double u0 = field.stream ? (*field.stream)(x0).u : 0.0;
    for (Vec2 p : s.polyline) {
        double r = norm(p);
        s.r_min = std::min(s.r_min, r);
        s.r_max = std::max(s.r_max, r);
        if (field.stream) s.u_drift = std::max(s.u_drift, std::abs((*field.stream)(p).u - u0));
        s.omega_drift = std::max(s.omega_drift, std::abs(vorticity_at(field, p) - w0));
    }
    return s;
}

/// Streamline as a closed polygon (drops the duplicated closing vertex).
inline JordanPolygon streamline_polygon(const Streamline& s) {
    require(s.closed, "streamline_polygon: streamline is not closed");
    std::vector<Vec2> pts(s.polyline.begin(), s.polyline.end() - 1);
    return JordanPolygon(std::move(pts));
}

// ---------------------------------------------------------------------------
// Gradient curves

enum class Termination { hit_inner, hit_outer, hit_truncation, step_limit, reached_level };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::hit_inner: return "hit-inner";
        case Termination::hit_outer: return "hit-outer";
        case Termination::hit_truncation: return "hit-truncation";
        case Termination::step_limit: return "step-limit";
        case Termination::reached_level: return "reached-level";
    }
    return "?";
}

struct GradientOptions {
    TracerOptions tracer{};
    std::optional<double> stop_at_u;  // stop when u reaches this level
    std::optional<double> max_du;     // cap on the u increment per step
    std::optional<double> u0;         // u at the seed; defaults to the closed form or 0
};

struct GradientCurve {
    Vec2 seed;
    int direction = 1;
    std::vector<Vec2> polyline;
    std::vector<double> times;
    std::vector<double> u_values;
    Termination termination = Termination::step_limit;
};

/// grad u = (v2, -v1) for v = grad-perp u.
inline Vec2 stream_gradient(const VectorField& field, Vec2 x) {
    Vec2 v = field.velocity(x);
    return {v.y, -v.x};
}

/// Traces dx/dt = direction * grad u, accumulating u by the increments
/// direction * |grad u|^2 dt. Stops on the band edge, at an optional u level,
/// or after the step limit.
inline GradientCurve trace_gradient_curve(const VectorField& field, Vec2 x0, int direction, const GradientOptions& opts = {}) {
    require(direction == 1 || direction == -1, "trace_gradient_curve: direction must be +1 or -1");
    const auto& dom = field.domain;
    dom.require_in_band(norm(x0), "trace_gradient_curve: seed");
    if (!(norm(field.velocity(x0)) > opts.tracer.stagnation_tol))
        throw StagnationError("trace_gradient_curve: stagnant seed", x0);
    const double d = direction;
    const double u_start = opts.u0.value_or(field.stream ? (*field.stream)(x0).u : 0.0);

    auto rhs = [&field, d](double, const State<3>& y) -> State<3> {
        Vec2 g = stream_gradient(field, {y[0], y[1]});
        return {d * g.x, d * g.y, d * dot(g, g)};
    };
    auto cap = [&](const State<3>& y) {
        Vec2 x{y[0], y[1]};
        double g = std::max(norm(stream_gradient(field, x)), 1e-300);
        double h = opts.tracer.max_step_fraction * norm(x) / g;
        if (opts.max_du) h = std::min(h, *opts.max_du / (g * g));
        return h;
    };
    State<3> y0{x0.x, x0.y, u_start};
    AdaptiveIntegrator<3, decltype(rhs)> integ(rhs, y0, opts.tracer.control, cap, 1e-3 * cap(y0));

    const double lo = dom.trunc_inner(), hi = dom.trunc_outer();
    const bool inner_wall = dom.has_inner_wall() && lo == dom.inner_radius();
    const bool outer_wall = dom.has_outer_wall() && hi == dom.outer_radius();
    auto g_inner = [&](const State<3>& y) { return std::hypot(y[0], y[1]) - lo; };
    auto g_outer = [&](const State<3>& y) { return hi - std::hypot(y[0], y[1]); };
    auto g_level = [&](const State<3>& y) { return d * (*opts.stop_at_u - y[2]); };

    GradientCurve c;
    c.seed = x0;
    c.direction = direction;
    c.polyline.push_back(x0);
    c.times.push_back(0.0);
    c.u_values.push_back(u_start);
    auto push = [&](const State<3>& y, double t) {
        c.polyline.push_back({y[0], y[1]});
        c.times.push_back(t);
        c.u_values.push_back(y[2]);
    };
    if (opts.stop_at_u && g_level(y0) <= 0.0) {
        c.termination = Termination::reached_level;
        return c;
    }
    for (std::size_t k = 0; k < opts.tracer.max_steps; ++k) {
        if (!integ.step()) {
            throw StagnationError("trace_gradient_curve: premature stagnation", {integ.y()[0], integ.y()[1]});
        }
        const State<3>& y = integ.y();
        // Earliest event inside the step wins.
        struct Hit {
            double dt;
            Termination why;
        };
        std::optional<Hit> hit;
        auto consider = [&](auto g, Termination why) {
            if (g(y) > 0.0) return;
            double dt = g(integ.y_prev()) > 0.0 ? integ.locate(g, 1e-15 * std::max(1.0, integ.t())) : 0.0;
            if (!hit || dt < hit->dt) hit = Hit{dt, why};
        };
        consider(g_inner, inner_wall ? Termination::hit_inner : Termination::hit_truncation);
        consider(g_outer, outer_wall ? Termination::hit_outer : Termination::hit_truncation);
        if (opts.stop_at_u) consider(g_level, Termination::reached_level);
        if (hit) {
            if (hit->dt > 0.0) push(integ.from_previous(hit->dt), integ.t_prev() + hit->dt);
            c.termination = hit->why;
            return c;
        }
        if (!std::isfinite(y[2]) || norm(stream_gradient(field, {y[0], y[1]})) <= opts.tracer.stagnation_tol)
            throw StagnationError("trace_gradient_curve: premature stagnation", {y[0], y[1]});
        push(y, integ.t());
    }
    c.termination = Termination::step_limit;
    return c;
}

// ---------------------------------------------------------------------------
// Charts

class ChartError : public Error {
  public:
    ChartError(std::size_t index, const std::string& what)
        : Error("chart: " + what + " at sample index " + std::to_string(index)), index_(index) {}
    std::size_t index() const { return index_; }

  private:
    std::size_t index_;
};

/// Monotone maps g: t -> u and g^{-1}: u -> t along a curve.
struct Chart {
    MonotoneCubic g;
    MonotoneCubic g_inv;
    bool increasing = true;

    double u_of_t(double t) const { return g(t); }
    double t_of_u(double u) const { return g_inv(u); }
};

inline Chart build_chart(const std::vector<double>& t, const std::vector<double>& u) {
    require(t.size() == u.size() && t.size() >= 2, "build_chart: need >= 2 matching samples");
    const bool inc = u[1] > u[0];
    for (std::size_t k = 1; k < u.size(); ++k) {
        if (!(t[k] > t[k - 1])) throw ChartError(k, "times not strictly increasing");
        if (inc ? !(u[k] > u[k - 1]) : !(u[k] < u[k - 1])) throw ChartError(k, "u values not strictly monotone");
    }
    Chart c;
    c.increasing = inc;
    c.g = MonotoneCubic(t, u);
    std::vector<double> us = u, ts = t;
    if (!inc) {
        std::reverse(us.begin(), us.end());
        std::reverse(ts.begin(), ts.end());
    }
    c.g_inv = MonotoneCubic(us, ts);
    return c;
}

inline Chart build_chart(const GradientCurve& curve) { return build_chart(curve.times, curve.u_values); }

struct ExtractedProfile {
    VorticityProfile profile;
    LipschitzEstimate lipschitz;
    Chart chart;
};

/// f(tau) = -omega at the curve vertices, indexed by their u values.
inline ExtractedProfile extract_vorticity_profile(const VectorField& field, const GradientCurve& curve) {
    Chart chart = build_chart(curve);
    std::vector<double> f(curve.polyline.size());
    parallel_for(f.size(), [&](std::size_t k) {
        Vec2 x = curve.polyline[k];
        // Vertices may sit on the band edge up to rounding.
        double r = norm(x);
        double r_in = std::clamp(r, field.domain.trunc_inner(), field.domain.trunc_outer());
        f[k] = -vorticity_at(field, x * (r_in / r));
    });
    VorticityProfile prof(curve.u_values, std::move(f));
    LipschitzEstimate lip = prof.lipschitz();
    return {std::move(prof), lip, std::move(chart)};
}

// ---------------------------------------------------------------------------
// Semilinear residual

struct ResidualReport {
    double max = 0.0;
    double p99 = 0.0;
    std::size_t nodes = 0;
    std::size_t clamped = 0;  // nodes whose u was clamped into the profile range
};

class RangeMismatchError : public Error {
  public:
    using Error::Error;
};

struct ResidualOptions {
    std::optional<std::pair<double, double>> range;  // valid u range of f
    double clamp_margin = 0.0;                       // tolerated excursion outside the range
    /// Weight multiplying f, e.g. |x|^-4 for Kelvin-transformed problems.
    std::function<double(Vec2)> weight;
};

/// max and 99th percentile over interior rows of |Lap_h u + w(x) f(u)|.
inline ResidualReport semilinear_residual(const StreamGrid& sg, const ScalarFn& f, const ResidualOptions& opts = {}) {
    const auto& g = sg.grid();
    const std::size_t nr = g.n_r(), nt = g.n_theta();
    require(nr >= 3, "semilinear_residual: need at least three radii");
    std::vector<double> res((nr - 2) * nt);
    std::vector<char> clamped(res.size(), 0);
    parallel_for(nr - 2, [&](std::size_t row) {
        std::size_t i = row + 1;
        for (std::size_t j = 0; j < nt; ++j) {
            double u = sg.value(i, j);
            if (opts.range) {
                auto [lo, hi] = *opts.range;
                if (u < lo - opts.clamp_margin || u > hi + opts.clamp_margin)
                    throw RangeMismatchError("semilinear_residual: grid value " + std::to_string(u) +
                                             " outside profile range beyond margin");
                if (u < lo || u > hi) {
                    u = std::clamp(u, lo, hi);
                    clamped[row * nt + j] = 1;
                }
            }
            double w = opts.weight ? opts.weight(g.node(i, j)) : 1.0;
            res[row * nt + j] = std::abs(sg.node_laplacian(i, j) + w * f(u));
        }
    });
    ResidualReport rep;
    rep.nodes = res.size();
    rep.clamped = static_cast<std::size_t>(std::count(clamped.begin(), clamped.end(), 1));
    rep.max = *std::max_element(res.begin(), res.end());
    std::size_t k = static_cast<std::size_t>(0.99 * static_cast<double>(res.size() - 1));
    std::nth_element(res.begin(), res.begin() + static_cast<long>(k), res.end());
    rep.p99 = res[k];
    return rep;
}

inline ResidualReport semilinear_residual(const StreamGrid& sg, const VorticityProfile& profile, double clamp_margin = 0.0) {
    ResidualOptions opts;
    opts.range = std::pair{profile.lo(), profile.hi()};
    opts.clamp_margin = clamp_margin;
    return semilinear_residual(sg, [&](double s) { return profile.f(s); }, opts);
}

}  // namespace annulus_lab
