#pragma once

// Named explicit flows with closed-form stream functions and pressures.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "annulus_lab/field.hpp"
#include "annulus_lab/radial.hpp"

namespace annulus_lab {

using Params = std::map<std::string, double>;

class CatalogError : public Error {
  public:
    using Error::Error;
};

inline const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names{"circular",  "ext_counterexample", "punct_counterexample",
                                                "inverse_square", "rigid",         "log",
                                                "quartic",   "shifted",            "eigenflow_m1",
                                                "eigenflow_m0"};
    return names;
}

namespace detail {

class ParamReader {
  public:
    ParamReader(std::string flow, const Params& params) : flow_(std::move(flow)), params_(params) {}

    double required(const std::string& key) {
        used_.insert(key);
        auto it = params_.find(key);
        if (it == params_.end()) throw CatalogError(flow_ + ": missing parameter '" + key + "'");
        return it->second;
    }
    double optional(const std::string& key, double fallback) {
        used_.insert(key);
        auto it = params_.find(key);
        return it == params_.end() ? fallback : it->second;
    }
    double positive(const std::string& key) {
        double v = required(key);
        if (!(v > 0.0)) throw CatalogError(flow_ + ": parameter '" + key + "' must be positive");
        return v;
    }
    Truncation truncation() {
        Truncation t;
        used_.insert("trunc_inner");
        used_.insert("trunc_outer");
        if (auto it = params_.find("trunc_inner"); it != params_.end()) t.inner = it->second;
        if (auto it = params_.find("trunc_outer"); it != params_.end()) t.outer = it->second;
        return t;
    }
    void finish() const {
        for (const auto& [k, v] : params_)
            if (!used_.count(k)) throw CatalogError(flow_ + ": unknown parameter '" + k + "'");
    }

  private:
    std::string flow_;
    const Params& params_;
    std::set<std::string> used_;
};

// -|v|^2/2 gradient is -J^T v for v = grad-perp u.
inline Vec2 minus_half_speed_sq_grad(const VectorField& f, Vec2 x) {
    return -1.0 * ((*f.jacobian)(x).transpose() * f.velocity(x));
}

/// v = s r^k e_theta with u = s r^{k+1}/(k+1) (s ln r for k = -1) and
/// p = s^2 r^{2k}/(2k) (s^2 ln r for k = 0).
inline VectorField power_circular(std::string name, AnnularDomain domain, double k, double s) {
    auto jet = [k, s](Vec2 x) {
        double r = norm(x);
        PolarJet p;
        p.u = s * std::pow(r, k + 1) / (k + 1);
        p.ur = s * std::pow(r, k);
        p.urr = s * k * std::pow(r, k - 1);
        return to_cartesian(p, x);
    };
    if (k == -1.0) {
        // s ln r is harmonic: a Cartesian Hessian with u_yy = -u_xx keeps the
        // Jacobian exactly symmetric, and p = -|v|^2/2 then balances v.grad v
        // to rounding even next to the puncture.
        VectorField f = field_from_stream(std::move(name), domain, [s](Vec2 x) {
            double r2 = dot(x, x), r4 = r2 * r2;
            StreamJet j;
            j.u = 0.5 * s * std::log(r2);
            j.grad = (s / r2) * x;
            double hxx = s * (x.y * x.y - x.x * x.x) / r4, hxy = -2 * s * x.x * x.y / r4;
            j.hess = {hxx, hxy, hxy, -hxx};
            return j;
        });
        f.pressure = [s](Vec2 x) { return -0.5 * s * s / dot(x, x); };
        f.pressure_gradient = [g = f](Vec2 x) { return minus_half_speed_sq_grad(g, x); };
        return f;
    }
    VectorField f = field_from_stream(std::move(name), domain, jet);
    f.pressure = [k, s](Vec2 x) {
        double r = norm(x);
        return k == 0.0 ? s * s * std::log(r) : s * s * std::pow(r, 2 * k) / (2 * k);
    };
    f.pressure_gradient = [k, s](Vec2 x) {
        double r = norm(x);
        return (s * s * std::pow(r, 2 * k - 2)) * x;
    };
    return f;
}

inline PolarJet mode1_jet(double phi, double dphi, double d2phi, Vec2 x) {
    double r = norm(x), c = x.x / r, sn = x.y / r;
    PolarJet p;
    p.u = phi * c;
    p.ur = dphi * c;
    p.ut = -phi * sn;
    p.urr = d2phi * c;
    p.urt = -dphi * sn;
    p.utt = -phi * c;
    return p;
}

/// Jet of (r/c - c/r) cos(theta) = x1/c - c x1/|x|^2 in Cartesian form. The
/// harmonic part has u_yy = -u_xx exactly, which keeps the vorticity at zero
/// to rounding even near the origin.
inline StreamJet dipole_jet(double c, Vec2 x) {
    double r2 = dot(x, x), r4 = r2 * r2, r6 = r4 * r2;
    double gxx = 2 * x.x * (x.x * x.x - 3 * x.y * x.y) / r6;
    double gxy = 2 * x.y * (3 * x.x * x.x - x.y * x.y) / r6;
    StreamJet j;
    j.u = x.x / c - c * x.x / r2;
    j.grad = {1 / c - c * (x.y * x.y - x.x * x.x) / r4, 2 * c * x.x * x.y / r4};
    j.hess = {-c * gxx, -c * gxy, -c * gxy, c * gxx};
    return j;
}

}  // namespace detail

/// Builds a catalog flow. Domain radii default per flow; "trunc_inner" and
/// "trunc_outer" are accepted everywhere. Unknown parameters are rejected.
inline VectorField catalog(const std::string& name, const Params& params = {}) {
    detail::ParamReader in(name, params);
    VectorField f;
    if (name == "circular") {
        double k = in.optional("power", 1.0), s = in.optional("scale", 1.0);
        auto dom = make_annulus(in.optional("a", 1.0), in.optional("b", 2.0), in.truncation());
        f = detail::power_circular(name, dom, k, s);
    } else if (name == "rigid") {
        f = detail::power_circular(name, make_annulus(in.optional("a", 1.0), in.optional("b", 2.0), in.truncation()), 1.0,
                                   1.0);
    } else if (name == "log") {
        f = detail::power_circular(name, make_annulus(in.optional("a", 0.0), in.optional("b", 1.0), in.truncation()),
                                   -1.0, 1.0);
    } else if (name == "inverse_square") {
        f = detail::power_circular(name, make_annulus(in.optional("a", 1.0), in.optional("b", kInf), in.truncation()),
                                   -2.0, 1.0);
    } else if (name == "quartic") {
        double R = in.positive("R");
        auto dom = make_annulus(0.0, R, in.truncation());
        double R4 = R * R * R * R;
        f = field_from_stream(name, dom, [R4](Vec2 x) {
            double r = norm(x);
            PolarJet p;
            p.u = R4 - r * r * r * r;
            p.ur = -4 * r * r * r;
            p.urr = -12 * r * r;
            return to_cartesian(p, x);
        });
        f.pressure = [](Vec2 x) { return 8.0 / 3.0 * std::pow(dot(x, x), 3); };
        f.pressure_gradient = [](Vec2 x) {
            double r2 = dot(x, x);
            return (16 * r2 * r2) * x;
        };
    } else if (name == "shifted") {
        double a = in.positive("a");
        auto dom = make_annulus(a, in.optional("b", 2 * a), in.truncation());
        f = field_from_stream(name, dom, [a](Vec2 x) {
            double r = norm(x);
            PolarJet p;
            p.u = 0.5 * (r - a) * (r - a);
            p.ur = r - a;
            p.urr = 1.0;
            return to_cartesian(p, x);
        });
        f.pressure = [a](Vec2 x) {
            double r = norm(x);
            return 0.5 * r * r - 2 * a * r + a * a * std::log(r);
        };
        f.pressure_gradient = [a](Vec2 x) {
            double r = norm(x);
            return ((r - a) * (r - a) / (r * r)) * x;
        };
    } else if (name == "ext_counterexample") {
        double a = in.positive("a");
        auto dom = make_annulus(a, in.optional("b", kInf), in.truncation());
        auto jet = [a](Vec2 x) {
            StreamJet j = detail::dipole_jet(a, x);
            double k = 4 / (a * a);
            j.u += 2 * (dot(x, x) / (a * a) - 1);
            j.grad = j.grad + k * x;
            j.hess.a11 += k;
            j.hess.a22 += k;
            return j;
        };
        f = field_from_stream(name, dom, jet);
        f.pressure = [jet, a](Vec2 x) {
            StreamJet s = jet(x);
            return -0.5 * dot(s.grad, s.grad) + 8 * s.u / (a * a);
        };
        f.pressure_gradient = [g = f, jet, a](Vec2 x) {
            return detail::minus_half_speed_sq_grad(g, x) + (8 / (a * a)) * jet(x).grad;
        };
    } else if (name == "punct_counterexample") {
        double b = in.positive("b");
        auto dom = make_annulus(0.0, b, in.truncation());
        auto jet = [b](Vec2 x) { return detail::dipole_jet(b, x); };
        f = field_from_stream(name, dom, jet);
        f.pressure = [jet](Vec2 x) {
            StreamJet s = jet(x);
            return -0.5 * dot(s.grad, s.grad);
        };
        f.pressure_gradient = [g = f](Vec2 x) { return detail::minus_half_speed_sq_grad(g, x); };
    } else if (name == "eigenflow_m1" || name == "eigenflow_m0") {
        double a = in.positive("a"), b = in.positive("b");
        if (!(b > a)) throw CatalogError(name + ": need a < b");
        auto n = static_cast<std::size_t>(in.optional("n", 512));
        auto dom = make_annulus(a, b, in.truncation());
        const int mode = name == "eigenflow_m1" ? 1 : 0;
        auto pair = std::make_shared<const EigenPair>(principal_eigenpair(mode, a, b, n));
        const double lam = pair->eigenvalue;
        auto jet = [pair, mode](Vec2 x) {
            double r = norm(x);
            double phi = pair->phi_at(r), dphi = pair->dphi_at(r), d2 = pair->d2phi_from(r, phi, dphi);
            if (mode == 1) return to_cartesian(detail::mode1_jet(phi, dphi, d2, x), x);
            PolarJet p;
            p.u = phi;
            p.ur = dphi;
            p.urr = d2;
            return to_cartesian(p, x);
        };
        f = field_from_stream(name, dom, jet);
        f.pressure = [jet, lam](Vec2 x) {
            StreamJet s = jet(x);
            return -0.5 * dot(s.grad, s.grad) - 0.5 * lam * s.u * s.u;
        };
        f.pressure_gradient = [g = f, jet, lam](Vec2 x) {
            StreamJet s = jet(x);
            return detail::minus_half_speed_sq_grad(g, x) - (lam * s.u) * s.grad;
        };
    } else {
        std::string known;
        for (const auto& n : catalog_names()) known += (known.empty() ? "" : ", ") + n;
        throw CatalogError("unknown catalog flow '" + name + "' (known: " + known + ")");
    }
    in.finish();
    f.kind = FieldKind::catalog;
    return f;
}

/// Eigenpair behind an eigenflow catalog entry, rebuilt with the same inputs.
inline EigenPair catalog_eigenpair(const std::string& name, const Params& params) {
    int mode = name == "eigenflow_m1" ? 1 : 0;
    auto n = params.count("n") ? static_cast<std::size_t>(params.at("n")) : 512;
    return principal_eigenpair(mode, params.at("a"), params.at("b"), n);
}

}  // namespace annulus_lab
