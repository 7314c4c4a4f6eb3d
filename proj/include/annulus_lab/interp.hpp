#pragma once

// One-dimensional interpolation kernels.

#include <span>
#include <vector>

#include "annulus_lab/core.hpp"

namespace annulus_lab {

/// Index k with xs[k] <= x < xs[k+1], clamped to [0, n-2]. xs ascending.
inline std::size_t bracket(std::span<const double> xs, double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t k = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
    return std::min(k, xs.size() - 2);
}

/// Cubic Hermite on [x0, x1] with values y and slopes d.
inline double hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
    double h = x1 - x0, t = (x - x0) / h;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
}

inline double hermite_slope(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
    double h = x1 - x0, t = (x - x0) / h;
    double t2 = t * t;
    return ((6 * t2 - 6 * t) * y0 + (-6 * t2 + 6 * t) * y1) / h + (3 * t2 - 4 * t + 1) * d0 + (3 * t2 - 2 * t) * d1;
}

/// Shape-preserving piecewise cubic (Fritsch-Butland slopes). Monotone data
/// gives a monotone interpolant, so the map stays invertible.
class MonotoneCubic {
  public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
        const std::size_t n = xs_.size();
        if (n < 2 || ys_.size() != n) throw PreconditionError("MonotoneCubic: need >= 2 matching knots");
        for (std::size_t k = 1; k < n; ++k)
            if (!(xs_[k] > xs_[k - 1])) throw PreconditionError("MonotoneCubic: abscissae must increase strictly");
        std::vector<double> h(n - 1), delta(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            h[k] = xs_[k + 1] - xs_[k];
            delta[k] = (ys_[k + 1] - ys_[k]) / h[k];
        }
        d_.assign(n, 0.0);
        if (n == 2) {
            d_[0] = d_[1] = delta[0];
            return;
        }
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (delta[k - 1] * delta[k] <= 0.0) continue;
            double w1 = 2 * h[k] + h[k - 1], w2 = h[k] + 2 * h[k - 1];
            d_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
        d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }

    double operator()(double x) const {
        std::size_t k = bracket(xs_, x);
        return hermite(xs_[k], xs_[k + 1], ys_[k], ys_[k + 1], d_[k], d_[k + 1], x);
    }
    double derivative(double x) const {
        std::size_t k = bracket(xs_, x);
        return hermite_slope(xs_[k], xs_[k + 1], ys_[k], ys_[k + 1], d_[k], d_[k + 1], x);
    }

    const std::vector<double>& knots() const { return xs_; }
    const std::vector<double>& values() const { return ys_; }
    double lo() const { return xs_.front(); }
    double hi() const { return xs_.back(); }

  private:
    // Three-point end formula, limited to keep the end piece monotone.
    static double end_slope(double h0, double h1, double del0, double del1) {
        double d = ((2 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (d * del0 <= 0.0) return 0.0;
        if (del0 * del1 <= 0.0 && std::abs(d) > std::abs(3 * del0)) return 3 * del0;
        return d;
    }

    std::vector<double> xs_, ys_, d_;
};

/// Four-point Lagrange weights for x given nodes x0..x3.
inline std::array<double, 4> lagrange4(const std::array<double, 4>& nodes, double x) {
    std::array<double, 4> w{};
    for (int i = 0; i < 4; ++i) {
        double num = 1.0, den = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            num *= x - nodes[j];
            den *= nodes[i] - nodes[j];
        }
        w[i] = num / den;
    }
    return w;
}

}  // namespace annulus_lab
