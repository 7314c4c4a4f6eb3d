#pragma once

// Embedded Runge-Kutta 5(4) (Dormand-Prince) with step-size control and
// event location by re-stepping from the start of the bracketing step.

#include <array>
#include <functional>
#include <initializer_list>
#include <utility>

#include "annulus_lab/core.hpp"

namespace annulus_lab {

template <std::size_t N>
using State = std::array<double, N>;

struct StepControl {
    double rtol = 1e-9;
    double atol = 1e-12;
};

template <std::size_t N>
struct TrialStep {
    State<N> y;
    double error = 0.0;  // scaled max-norm, accept when <= 1
};

namespace detail {
template <std::size_t N>
State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
    State<N> out = y;
    for (auto [c, k] : terms)
        for (std::size_t i = 0; i < N; ++i) out[i] += h * c * (*k)[i];
    return out;
}
}  // namespace detail

/// One Dormand-Prince step of size h from (t, y). rhs(t, y) -> State<N>.
template <std::size_t N, class Rhs>
TrialStep<N> dopri_step(const Rhs& rhs, double t, const State<N>& y, double h, const StepControl& ctl) {
    using detail::axpy;
    const State<N> k1 = rhs(t, y);
    const State<N> k2 = rhs(t + h / 5, axpy<N>(y, h, {{1.0 / 5, &k1}}));
    const State<N> k3 = rhs(t + 3 * h / 10, axpy<N>(y, h, {{3.0 / 40, &k1}, {9.0 / 40, &k2}}));
    const State<N> k4 = rhs(t + 4 * h / 5, axpy<N>(y, h, {{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}));
    const State<N> k5 = rhs(t + 8 * h / 9, axpy<N>(y, h, {{19372.0 / 6561, &k1}, {-25360.0 / 2187, &k2},
                                                          {64448.0 / 6561, &k3}, {-212.0 / 729, &k4}}));
    const State<N> k6 = rhs(t + h, axpy<N>(y, h, {{9017.0 / 3168, &k1}, {-355.0 / 33, &k2}, {46732.0 / 5247, &k3},
                                                    {49.0 / 176, &k4}, {-5103.0 / 18656, &k5}}));
    State<N> y5 = axpy<N>(y, h, {{35.0 / 384, &k1}, {500.0 / 1113, &k3}, {125.0 / 192, &k4},
                                 {-2187.0 / 6784, &k5}, {11.0 / 84, &k6}});
    const State<N> k7 = rhs(t + h, y5);
    // Difference between the 5th and embedded 4th order solutions.
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        double sc = ctl.atol + ctl.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(e) / sc);
    }
    return {y5, err};
}

/// Adaptive driver for an autonomous or time-dependent system. max_step(y)
/// bounds the next step size (e.g. to keep spatial steps a fraction of |x|).
template <std::size_t N, class Rhs>
class AdaptiveIntegrator {
  public:
    AdaptiveIntegrator(Rhs rhs, State<N> y0, StepControl ctl, std::function<double(const State<N>&)> max_step,
                       double h0)
        : rhs_(std::move(rhs)), ctl_(ctl), max_step_(std::move(max_step)), y_(y0), y_prev_(y0), h_(h0) {}

    /// Advances by one accepted step. Returns false when the step size collapses.
    bool step() {
        for (int attempt = 0; attempt < 60; ++attempt) {
            double cap = max_step_ ? max_step_(y_) : kInf;
            double h = std::min(h_, cap);
            if (!(h > 1e-15 * std::max(1.0, std::abs(t_)))) return false;
            TrialStep<N> trial = dopri_step<N>(rhs_, t_, y_, h, ctl_);
            bool finite = true;
            for (double v : trial.y) finite = finite && std::isfinite(v);
            if (!finite || !std::isfinite(trial.error)) {
                h_ = 0.25 * h;
                continue;
            }
            double factor = trial.error == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(trial.error, -0.2), 0.2, 5.0);
            if (trial.error <= 1.0) {
                y_prev_ = y_;
                t_prev_ = t_;
                y_ = trial.y;
                t_ += h;
                h_ = h * factor;
                last_h_ = h;
                return true;
            }
            h_ = h * std::min(factor, 0.9);
        }
        return false;
    }

    /// State reached by a fresh step of length dt from the previous accepted point.
    State<N> from_previous(double dt) const {
        if (dt == 0.0) return y_prev_;
        return dopri_step<N>(rhs_, t_prev_, y_prev_, dt, ctl_).y;
    }

    /// Locates a sign change of g inside the last accepted step by
    /// Illinois-modified regula falsi on fresh sub-steps. Returns the offset
    /// dt from the previous point.
    template <class G>
    double locate(const G& g, double tol_dt) const {
        double a = 0.0, b = last_h_;
        double ga = g(y_prev_), gb = g(y_);
        int side = 0;
        for (int it = 0; it < 100 && b - a > tol_dt; ++it) {
            double c = (ga - gb) != 0.0 ? b - gb * (b - a) / (gb - ga) : 0.5 * (a + b);
            if (!(c > a && c < b)) c = 0.5 * (a + b);
            double gc = g(from_previous(c));
            if (gc == 0.0) return c;
            if ((gc > 0) == (gb > 0)) {
                b = c, gb = gc;
                if (side == -1) ga *= 0.5;
                side = -1;
            } else {
                a = c, ga = gc;
                if (side == 1) gb *= 0.5;
                side = 1;
            }
        }
        return std::abs(ga) < std::abs(gb) ? a : b;
    }

    const State<N>& y() const { return y_; }
    const State<N>& y_prev() const { return y_prev_; }
    double t() const { return t_; }
    double t_prev() const { return t_prev_; }
    double last_step() const { return last_h_; }
    const Rhs& rhs() const { return rhs_; }
    const StepControl& control() const { return ctl_; }

  private:
    Rhs rhs_;
    StepControl ctl_;
    std::function<double(const State<N>&)> max_step_;
    State<N> y_, y_prev_;
    double t_ = 0.0, t_prev_ = 0.0;
    double h_;
    double last_h_ = 0.0;
};

/// Classical fixed-step RK4 step for rhs(t, y).
template <std::size_t N, class Rhs>
State<N> rk4_step(const Rhs& rhs, double t, const State<N>& y, double h) {
    using detail::axpy;
    State<N> k1 = rhs(t, y);
    State<N> k2 = rhs(t + h / 2, axpy<N>(y, h, {{0.5, &k1}}));
    State<N> k3 = rhs(t + h / 2, axpy<N>(y, h, {{0.5, &k2}}));
    State<N> k4 = rhs(t + h, axpy<N>(y, h, {{1.0, &k3}}));
    return axpy<N>(y, h, {{1.0 / 6, &k1}, {1.0 / 3, &k2}, {1.0 / 3, &k3}, {1.0 / 6, &k4}});
}

}  // namespace annulus_lab
