#pragma once

// Shared primitives: planar vectors, 2x2 matrices, the error hierarchy,
// low-discrepancy sequences and a small deterministic parallel_for.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace annulus_lab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
/// Counter-clockwise quarter turn: perp(x) = (-x2, x1).
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 polar_point(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }
inline Vec2 unit_radial(Vec2 x) { return x / norm(x); }
inline Vec2 unit_angular(Vec2 x) { return perp(x) / norm(x); }

/// Row-major 2x2 matrix; for a velocity Jacobian, m[i][j] = d v_i / d x_j.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    constexpr Vec2 operator*(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
    constexpr Mat2 transpose() const { return {a11, a21, a12, a22}; }
    constexpr double trace() const { return a11 + a22; }
    constexpr double det() const { return a11 * a22 - a12 * a21; }
};

// ---------------------------------------------------------------------------
// Errors. Every failure the library reports derives from annulus_lab::Error.

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
  public:
    using Error::Error;
};

/// A point or circle lies outside the (truncated) band an operation works on.
class OutOfBandError : public Error {
  public:
    OutOfBandError(const std::string& what, double radius)
        : Error(what + " (radius " + std::to_string(radius) + ")"), radius_(radius) {}
    double radius() const { return radius_; }

  private:
    double radius_;
};

class PreconditionError : public Error {
  public:
    using Error::Error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw PreconditionError(message);
}

// ---------------------------------------------------------------------------

/// Radical-inverse (van der Corput) value of index in the given base.
inline double radical_inverse(std::size_t index, unsigned base) {
    double inv = 1.0 / base, f = inv, result = 0.0;
    while (index > 0) {
        result += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return result;
}

/// Point k of the 2-D Halton sequence in [0,1)^2 (bases 2 and 3).
inline Vec2 halton2(std::size_t k) { return {radical_inverse(k + 1, 2), radical_inverse(k + 1, 3)}; }

/// Worker count, capped by ANNULUS_LAB_THREADS when set.
inline unsigned thread_budget() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ANNULUS_LAB_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

/// Runs body(i) for i in [0, count). Each index is handled by exactly one
/// worker and results must be written per index, so output does not depend
/// on the thread count. The first exception thrown is rethrown.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
    unsigned workers = std::min<std::size_t>(thread_budget(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace annulus_lab
