#pragma once

// Radial profiles V(r) and tabulated vorticity functions f(tau).

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "annulus_lab/core.hpp"
#include "annulus_lab/expr.hpp"
#include "annulus_lab/interp.hpp"

namespace annulus_lab {

using ScalarFn = std::function<double(double)>;

/// Fourth-order central difference of f at x with step h.
inline double central_diff4(const ScalarFn& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

struct SignReport {
    int sign = 0;          // +1 / -1 when the sign is constant and strict, else 0
    double min_abs = 0.0;  // min |V| over the samples
    bool constant_strict_sign() const { return sign != 0; }
};

/// Scalar function of the radius, closed form or parsed.
class RadialProfile {
  public:
    RadialProfile(ScalarFn value, std::optional<ScalarFn> derivative = std::nullopt, std::string text = {})
        : value_(std::move(value)), derivative_(std::move(derivative)), text_(std::move(text)) {}

    double operator()(double r) const { return value_(r); }
    double derivative(double r) const {
        if (derivative_) return (*derivative_)(r);
        return central_diff4(value_, r, std::max(1e-5, 1e-4 * std::abs(r)));
    }
    bool has_analytic_derivative() const { return derivative_.has_value(); }
    const std::string& text() const { return text_; }

    /// Samples n radii uniformly in [lo, hi] and reports the sign pattern.
    SignReport sign_report(double lo, double hi, std::size_t n = 1024) const {
        SignReport rep;
        rep.min_abs = kInf;
        bool pos = false, neg = false;
        for (std::size_t k = 0; k < n; ++k) {
            double r = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
            double v = value_(r);
            rep.min_abs = std::min(rep.min_abs, std::abs(v));
            pos = pos || v > 0.0;
            neg = neg || v < 0.0;
        }
        rep.sign = rep.min_abs > 0.0 && !(pos && neg) ? (pos ? 1 : -1) : 0;
        return rep;
    }

  private:
    ScalarFn value_;
    std::optional<ScalarFn> derivative_;
    std::string text_;
};

/// Parses an expression in r, e.g. "1/r^2".
inline RadialProfile parse_profile(std::string_view text) {
    auto expr = std::make_shared<Expression>(Expression::parse(text, {"r"}));
    return RadialProfile([expr](double r) { return (*expr)(r); }, std::nullopt, expr->print());
}

class ExtrapolationError : public Error {
  public:
    ExtrapolationError(double value, double lo, double hi)
        : Error("value " + std::to_string(value) + " outside tabulated range [" + std::to_string(lo) + ", " +
                std::to_string(hi) + "]"),
          value_(value) {}
    double value() const { return value_; }

  private:
    double value_;
};

struct LipschitzEstimate {
    double start = 0.0;  // max |df/dtau| over the first decile of the range
    double mid = 0.0;    // over the central decile
    double end = 0.0;    // over the last decile
};

/// Tabulated f(tau) with antiderivative F, F(tau_min) = 0.
class VorticityProfile {
  public:
    VorticityProfile(std::vector<double> tau, std::vector<double> f) {
        if (tau.size() < 2 || f.size() != tau.size()) throw PreconditionError("VorticityProfile: need >= 2 samples");
        if (tau.front() > tau.back()) {
            std::reverse(tau.begin(), tau.end());
            std::reverse(f.begin(), f.end());
        }
        interp_ = MonotoneCubic(tau, f);
        antideriv_.assign(tau.size(), 0.0);
        for (std::size_t k = 1; k < tau.size(); ++k)
            antideriv_[k] = antideriv_[k - 1] + 0.5 * (f[k] + f[k - 1]) * (tau[k] - tau[k - 1]);
    }

    /// Tabulates fn on n uniform points of [lo, hi].
    static VorticityProfile from_function(const ScalarFn& fn, double lo, double hi, std::size_t n = 2049) {
        std::vector<double> tau(n), f(n);
        for (std::size_t k = 0; k < n; ++k) {
            tau[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
            f[k] = fn(tau[k]);
        }
        return VorticityProfile(std::move(tau), std::move(f));
    }

    const std::vector<double>& tau() const { return interp_.knots(); }
    const std::vector<double>& f_samples() const { return interp_.values(); }
    const std::vector<double>& antiderivative_samples() const { return antideriv_; }
    double lo() const { return interp_.lo(); }
    double hi() const { return interp_.hi(); }
    bool in_range(double tau, double margin = 0.0) const { return tau >= lo() - margin && tau <= hi() + margin; }

    double f(double tau) const {
        check(tau);
        return interp_(tau);
    }
    double operator()(double tau) const { return f(tau); }

    /// Trapezoid-consistent antiderivative.
    double F(double tau) const {
        check(tau);
        const auto& t = tau_knots();
        const auto& fv = interp_.values();
        std::size_t k = bracket(t, tau);
        double slope = (fv[k + 1] - fv[k]) / (t[k + 1] - t[k]);
        double dt = tau - t[k];
        return antideriv_[k] + fv[k] * dt + 0.5 * slope * dt * dt;
    }

    LipschitzEstimate lipschitz() const {
        const auto& t = tau_knots();
        const auto& fv = interp_.values();
        double span = hi() - lo();
        LipschitzEstimate est;
        for (std::size_t k = 0; k + 1 < t.size(); ++k) {
            double q = std::abs((fv[k + 1] - fv[k]) / (t[k + 1] - t[k]));
            double a = (t[k] - lo()) / span, b = (t[k + 1] - lo()) / span;
            if (a < 0.1) est.start = std::max(est.start, q);
            if (b > 0.9) est.end = std::max(est.end, q);
            if (b > 0.45 && a < 0.55) est.mid = std::max(est.mid, q);
        }
        return est;
    }

  private:
    const std::vector<double>& tau_knots() const { return interp_.knots(); }
    void check(double tau) const {
        if (!(tau >= lo() && tau <= hi())) throw ExtrapolationError(tau, lo(), hi());
    }

    MonotoneCubic interp_;
    std::vector<double> antideriv_;
};

/// Pressure -|v|^2/2 - F(u) of a flow whose stream function solves
/// Laplace(u) + f(u) = 0; defined up to an additive constant.
inline double bernoulli_pressure(double u_value, double speed, const VorticityProfile& profile) {
    return -0.5 * speed * speed - profile.F(u_value);
}

}  // namespace annulus_lab
