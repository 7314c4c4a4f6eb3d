#pragma once

// Radial ODE machinery: principal Dirichlet eigenpairs of
//   -phi'' - phi'/r + m^2 phi / r^2 = lambda phi   on [a, b], m in {0, 1},
// radial semilinear profiles U'' + U'/r + f(U) = 0, and circular fields.

#include <string>
#include <vector>

#include "annulus_lab/core.hpp"
#include "annulus_lab/field.hpp"
#include "annulus_lab/interp.hpp"
#include "annulus_lab/ode.hpp"
#include "annulus_lab/profile.hpp"
#include "annulus_lab/quadrature.hpp"

namespace annulus_lab {

class EigenError : public Error {
  public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Finite-difference reference solver

struct FdEigenResult {
    double eigenvalue = 0.0;
    std::vector<double> radii;  // a, a+h, ..., b
    std::vector<double> phi;    // normalised to max 1, zero at both ends
    double residual = 0.0;      // ||A x - lambda B x|| / ||B x||
    int iterations = 0;
};

/// Principal eigenpair of the symmetrised discretisation
///   -(r phi')' + m^2 phi / r = lambda r phi
/// on a uniform grid with `intervals` cells, by shifted inverse iteration.
inline FdEigenResult fd_principal_eigen(int mode, double a, double b, std::size_t intervals = 4096,
                                        double tol = 1e-12) {
    require(a > 0.0 && b > a, "fd_principal_eigen: need 0 < a < b");
    require(intervals >= 8, "fd_principal_eigen: need at least 8 intervals");
    const std::size_t n = intervals - 1;  // interior unknowns
    const double h = (b - a) / static_cast<double>(intervals);
    const double m2 = static_cast<double>(mode * mode);
    std::vector<double> r(n), diag(n), off(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = a + h * static_cast<double>(i + 1);
        double rp = r[i] + 0.5 * h, rm = r[i] - 0.5 * h;
        diag[i] = (rp + rm) / (h * h) + m2 / r[i];
        if (i + 1 < n) off[i] = -rp / (h * h);
    }
    auto apply_a = [&](const std::vector<double>& x) {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = diag[i] * x[i];
            if (i > 0) y[i] += off[i - 1] * x[i - 1];
            if (i + 1 < n) y[i] += off[i] * x[i + 1];
        }
        return y;
    };
    // Thomas solve of (A - sigma B) x = rhs.
    auto solve_shifted = [&](double sigma, const std::vector<double>& rhs) {
        std::vector<double> c(n), d(n), x(n);
        double beta = diag[0] - sigma * r[0];
        c[0] = n > 1 ? off[0] / beta : 0.0;
        d[0] = rhs[0] / beta;
        for (std::size_t i = 1; i < n; ++i) {
            beta = diag[i] - sigma * r[i] - off[i - 1] * c[i - 1];
            if (i + 1 < n) c[i] = off[i] / beta;
            d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / beta;
        }
        x[n - 1] = d[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
        return x;
    };

    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(kPi * (r[i] - a) / (b - a));
    FdEigenResult out;
    double lambda = 0.0, sigma = 0.0;
    for (int it = 1; it <= 500; ++it) {
        std::vector<double> bx(n);
        for (std::size_t i = 0; i < n; ++i) bx[i] = r[i] * x[i];
        x = solve_shifted(sigma, bx);
        double scale = 0.0;
        for (double v : x) scale = std::max(scale, std::abs(v));
        for (double& v : x) v /= scale;
        std::vector<double> ax = apply_a(x);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) num += x[i] * ax[i], den += x[i] * r[i] * x[i];
        lambda = num / den;
        double res = 0.0, bnorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double bxi = r[i] * x[i];
            res += (ax[i] - lambda * bxi) * (ax[i] - lambda * bxi);
            bnorm += bxi * bxi;
        }
        out.residual = std::sqrt(res / bnorm) / lambda;
        out.iterations = it;
        if (out.residual <= tol) break;
        // Shift towards the estimate once it has settled; stays below lambda_1.
        if (it >= 3) sigma = 0.9 * lambda;
    }
    out.eigenvalue = lambda;
    out.radii.resize(intervals + 1);
    out.phi.assign(intervals + 1, 0.0);
    for (std::size_t i = 0; i <= intervals; ++i) out.radii[i] = a + h * static_cast<double>(i);
    double mx = 0.0;
    for (double v : x) mx = std::abs(v) > std::abs(mx) ? v : mx;
    for (std::size_t i = 0; i < n; ++i) out.phi[i + 1] = x[i] / mx;
    return out;
}

// ---------------------------------------------------------------------------
// Shooting

struct EigenPair {
    int mode = 1;
    double a = 0.0, b = 0.0;
    double eigenvalue = 0.0;
    std::vector<double> radii;  // n uniform samples on [a, b]
    std::vector<double> phi;    // normalised: max phi = 1
    std::vector<double> dphi;
    double r_star = 0.0;             // location of the maximum of phi
    double fd_eigenvalue = 0.0;      // reference value from the dense FD solve
    double cross_check_rel = 0.0;    // |lambda - lambda_fd| / lambda_fd
    double boundary_residual = 0.0;  // |phi(b)| after normalisation

    /// Dense table for evaluation between samples.
    std::vector<double> fine_r, fine_phi, fine_dphi;

    double d2phi_from(double r, double p, double dp) const {
        return -dp / r + (mode * mode / (r * r) - eigenvalue) * p;
    }
    double phi_at(double r) const {
        std::size_t k = bracket(fine_r, r);
        return hermite(fine_r[k], fine_r[k + 1], fine_phi[k], fine_phi[k + 1], fine_dphi[k], fine_dphi[k + 1], r);
    }
    double dphi_at(double r) const {
        std::size_t k = bracket(fine_r, r);
        double s0 = d2phi_from(fine_r[k], fine_phi[k], fine_dphi[k]);
        double s1 = d2phi_from(fine_r[k + 1], fine_phi[k + 1], fine_dphi[k + 1]);
        return hermite(fine_r[k], fine_r[k + 1], fine_dphi[k], fine_dphi[k + 1], s0, s1, r);
    }
    /// Second derivative from the ODE itself.
    double d2phi_at(double r) const { return d2phi_from(r, phi_at(r), dphi_at(r)); }
};

namespace detail {

struct ShotTable {
    std::vector<double> r, phi, dphi;
};

inline ShotTable shoot(int mode, double a, double b, double lambda, std::size_t steps, bool keep) {
    const double m2 = static_cast<double>(mode * mode);
    auto rhs = [&](double r, const State<2>& y) -> State<2> { return {y[1], -y[1] / r + (m2 / (r * r) - lambda) * y[0]}; };
    ShotTable t;
    const double h = (b - a) / static_cast<double>(steps);
    State<2> y{0.0, 1.0};
    if (keep) {
        t.r.reserve(steps + 1), t.phi.reserve(steps + 1), t.dphi.reserve(steps + 1);
        t.r.push_back(a), t.phi.push_back(y[0]), t.dphi.push_back(y[1]);
    }
    for (std::size_t k = 0; k < steps; ++k) {
        double r = a + h * static_cast<double>(k);
        y = rk4_step<2>(rhs, r, y, h);
        if (keep) {
            t.r.push_back(k + 1 == steps ? b : a + h * static_cast<double>(k + 1));
            t.phi.push_back(y[0]);
            t.dphi.push_back(y[1]);
        }
    }
    if (!keep) t.phi.push_back(y[0]);
    return t;
}

inline double shoot_end(int mode, double a, double b, double lambda, std::size_t steps) {
    return shoot(mode, a, b, lambda, steps, false).phi.back();
}

}  // namespace detail

/// Principal Dirichlet eigenpair by shooting from a with phi(a)=0, phi'(a)=1.
/// The lambda window (0, 10 * 4 pi^2/(b-a)^2] is scanned for the first sign
/// change of phi(b; lambda), then refined by Illinois regula falsi. The result
/// is cross-checked against fd_principal_eigen with 4096 intervals.
inline EigenPair principal_eigenpair(int mode, double a, double b, std::size_t n = 512) {
    require(mode == 0 || mode == 1, "eigenpair: mode must be 0 or 1");
    require(a > 0.0 && b > a, "eigenpair: need 0 < a < b");
    require(n >= 64, "eigenpair: need n >= 64 samples");

    // Fine RK4 steps: a multiple of (n - 1) with at least 8192 steps.
    const std::size_t per_sample = std::max<std::size_t>(1, (8192 + n - 2) / (n - 1));
    const std::size_t steps = per_sample * (n - 1);

    const double lambda_max = 10.0 * 4.0 * kPi * kPi / ((b - a) * (b - a));
    const std::size_t scan = 400;
    std::vector<double> ends(scan + 1);
    parallel_for(scan + 1, [&](std::size_t k) {
        double lam = lambda_max * static_cast<double>(k) / scan;
        ends[k] = detail::shoot_end(mode, a, b, lam, std::min<std::size_t>(steps, 2048));
    });
    std::size_t hit = 0;
    for (std::size_t k = 1; k <= scan; ++k)
        if ((ends[k] > 0) != (ends[k - 1] > 0) || ends[k] == 0.0) {
            hit = k;
            break;
        }
    if (hit == 0) throw EigenError("eigenpair: no sign change of phi(b) in the scanned lambda window");

    double lo = lambda_max * static_cast<double>(hit - 1) / scan, hi = lambda_max * static_cast<double>(hit) / scan;
    double flo = detail::shoot_end(mode, a, b, lo, steps), fhi = detail::shoot_end(mode, a, b, hi, steps);
    int side = 0;
    for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
        double c = hi - fhi * (hi - lo) / (fhi - flo);
        if (!(c > lo && c < hi)) c = 0.5 * (lo + hi);
        double fc = detail::shoot_end(mode, a, b, c, steps);
        if (fc == 0.0) {
            lo = hi = c;
            break;
        }
        if ((fc > 0) == (fhi > 0)) {
            hi = c, fhi = fc;
            if (side == -1) flo *= 0.5;
            side = -1;
        } else {
            lo = c, flo = fc;
            if (side == 1) fhi *= 0.5;
            side = 1;
        }
    }
    EigenPair out;
    out.mode = mode;
    out.a = a;
    out.b = b;
    out.eigenvalue = std::abs(flo) < std::abs(fhi) ? lo : hi;

    detail::ShotTable t = detail::shoot(mode, a, b, out.eigenvalue, steps, true);
    // Normalise by the interior maximum, located where phi' changes sign.
    std::size_t kmax = static_cast<std::size_t>(std::max_element(t.phi.begin(), t.phi.end()) - t.phi.begin());
    double peak = t.phi[kmax];
    out.r_star = t.r[kmax];
    std::size_t k0 = kmax > 0 ? kmax - 1 : 0;
    for (std::size_t k = k0; k < std::min(kmax + 1, t.r.size() - 1); ++k) {
        if ((t.dphi[k] > 0) != (t.dphi[k + 1] > 0)) {
            double d2a = out.d2phi_from(t.r[k], t.phi[k], t.dphi[k]);
            double d2b = out.d2phi_from(t.r[k + 1], t.phi[k + 1], t.dphi[k + 1]);
            double ra = t.r[k], rb = t.r[k + 1];
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (ra + rb);
                double dm = hermite(t.r[k], t.r[k + 1], t.dphi[k], t.dphi[k + 1], d2a, d2b, mid);
                if ((dm > 0) == (t.dphi[k] > 0)) ra = mid;
                else rb = mid;
            }
            out.r_star = 0.5 * (ra + rb);
            peak = std::max(peak, hermite(t.r[k], t.r[k + 1], t.phi[k], t.phi[k + 1], t.dphi[k], t.dphi[k + 1], out.r_star));
        }
    }
    for (double& v : t.phi) v /= peak;
    for (double& v : t.dphi) v /= peak;
    out.boundary_residual = std::abs(t.phi.back());
    out.radii.resize(n), out.phi.resize(n), out.dphi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.radii[i] = t.r[i * per_sample];
        out.phi[i] = t.phi[i * per_sample];
        out.dphi[i] = t.dphi[i * per_sample];
    }
    out.fine_r = std::move(t.r);
    out.fine_phi = std::move(t.phi);
    out.fine_dphi = std::move(t.dphi);

    out.fd_eigenvalue = fd_principal_eigen(mode, a, b, 4096).eigenvalue;
    out.cross_check_rel = std::abs(out.eigenvalue - out.fd_eigenvalue) / out.fd_eigenvalue;
    return out;
}

inline EigenPair eigenpair_mode1(double a, double b, std::size_t n = 512) { return principal_eigenpair(1, a, b, n); }
inline EigenPair eigenpair_mode0(double a, double b, std::size_t n = 512) { return principal_eigenpair(0, a, b, n); }

// ---------------------------------------------------------------------------
// Radial semilinear profiles

class ProfileRangeError : public Error {
  public:
    ProfileRangeError(double radius, const std::string& why)
        : Error("radial profile: f not evaluatable at radius " + std::to_string(radius) + ": " + why), radius_(radius) {}
    double radius() const { return radius_; }

  private:
    double radius_;
};

struct RadialSolution {
    std::vector<double> radii, U, Uprime;
    double start_radius = 0.0;
    bool start_offset = false;  // a = 0 was moved to 1e-2
};

/// Integrates U'' + U'/r + f(U) = 0 from (a, U_a, U'_a) to b with n samples.
/// A zero start radius is replaced by 1e-2 (reported in the result).
inline RadialSolution solve_radial_profile(const ScalarFn& f, double a, double U_a, double Uprime_a, double b,
                                           std::size_t n = 1025) {
    require(b > a && a >= 0.0, "solve_radial_profile: need 0 <= a < b");
    require(n >= 2, "solve_radial_profile: need n >= 2");
    RadialSolution sol;
    sol.start_offset = a == 0.0;
    sol.start_radius = sol.start_offset ? 1e-2 : a;
    const double r0 = sol.start_radius;
    double current_r = r0;
    auto rhs = [&](double r, const State<2>& y) -> State<2> {
        double fv;
        try {
            fv = f(y[0]);
        } catch (const Error& e) {
            throw ProfileRangeError(current_r, e.what());
        }
        if (!std::isfinite(fv)) throw ProfileRangeError(current_r, "non-finite value");
        return {y[1], -y[1] / r - fv};
    };
    const std::size_t sub = std::max<std::size_t>(1, 8192 / (n - 1) + 1);
    const double h = (b - r0) / static_cast<double>((n - 1) * sub);
    State<2> y{U_a, Uprime_a};
    sol.radii.push_back(r0), sol.U.push_back(y[0]), sol.Uprime.push_back(y[1]);
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t s = 0; s < sub; ++s) {
            current_r = r0 + h * static_cast<double>((i - 1) * sub + s);
            y = rk4_step<2>(rhs, current_r, y, h);
        }
        sol.radii.push_back(i + 1 == n ? b : r0 + h * static_cast<double>(i * sub));
        sol.U.push_back(y[0]);
        sol.Uprime.push_back(y[1]);
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Circular fields v = V(|x|) e_theta

struct CircularFlow {
    VectorField field;
    SignReport sign;
};

/// Circular field from a radial profile, with analytic Jacobian from V, V',
/// pressure gradient (V^2/r) e_r and a tabulated stream function U' = V.
inline CircularFlow circular_field(const RadialProfile& V, const AnnularDomain& domain, std::string name = "circular") {
    const double lo = domain.trunc_inner(), hi = domain.trunc_outer();
    constexpr std::size_t kTable = 4097;
    auto table = std::make_shared<std::array<std::vector<double>, 3>>();
    auto& [rs, us, vs] = *table;
    rs.resize(kTable), us.resize(kTable), vs.resize(kTable);
    for (std::size_t k = 0; k < kTable; ++k) {
        rs[k] = lo + (hi - lo) * static_cast<double>(k) / (kTable - 1);
        vs[k] = V(rs[k]);
        us[k] = k == 0 ? 0.0 : us[k - 1] + adaptive_simpson([&](double r) { return V(r); }, rs[k - 1], rs[k], 1e-13);
    }
    auto jet = [V, table](Vec2 x) {
        const auto& [r_, u_, v_] = *table;
        double r = norm(x);
        std::size_t k = bracket(r_, r);
        PolarJet p;
        p.u = hermite(r_[k], r_[k + 1], u_[k], u_[k + 1], v_[k], v_[k + 1], r);
        p.ur = V(r);
        p.urr = V.derivative(r);
        return to_cartesian(p, x);
    };
    CircularFlow out{field_from_stream(std::move(name), domain, jet), V.sign_report(lo, hi)};
    out.field.pressure_gradient = [V](Vec2 x) {
        double r = norm(x), v = V(r);
        return (v * v / (r * r)) * x;
    };
    return out;
}

}  // namespace annulus_lab
