#pragma once

#include <cmath>

namespace hypac {

/// Second-order forward-mode number in two flat variables carrying the value,
/// the flat gradient and the flat Laplacian.
///
/// The Laplacian of any expression built from arithmetic and smooth unary
/// functions only needs these three quantities of its inputs:
///   Lap(a b) = a Lap b + b Lap a + 2 grad a . grad b
///   Lap(phi(a)) = phi'(a) Lap a + phi''(a) |grad a|^2
struct Jet {
    double v = 0.0;
    double gx = 0.0;
    double gy = 0.0;
    double lap = 0.0;

    constexpr Jet() = default;
    constexpr Jet(double value) : v(value) {}  // NOLINT: constants promote implicitly
    constexpr Jet(double value, double dx, double dy, double laplacian)
        : v(value), gx(dx), gy(dy), lap(laplacian) {}

    static constexpr Jet x(double value) { return {value, 1.0, 0.0, 0.0}; }
    static constexpr Jet y(double value) { return {value, 0.0, 1.0, 0.0}; }

    double grad_sq() const { return gx * gx + gy * gy; }
};

inline double value_of(double s) { return s; }
inline double value_of(const Jet& s) { return s.v; }

inline double dot_grad(const Jet& a, const Jet& b) { return a.gx * b.gx + a.gy * b.gy; }

/// Applies a scalar function with known first and second derivative.
inline Jet chain(const Jet& a, double phi, double dphi, double d2phi) {
    return {phi, dphi * a.gx, dphi * a.gy, dphi * a.lap + d2phi * a.grad_sq()};
}

inline Jet operator-(const Jet& a) { return {-a.v, -a.gx, -a.gy, -a.lap}; }
inline Jet operator+(const Jet& a, const Jet& b) {
    return {a.v + b.v, a.gx + b.gx, a.gy + b.gy, a.lap + b.lap};
}
inline Jet operator-(const Jet& a, const Jet& b) {
    return {a.v - b.v, a.gx - b.gx, a.gy - b.gy, a.lap - b.lap};
}
inline Jet operator*(const Jet& a, const Jet& b) {
    return {a.v * b.v, a.v * b.gx + b.v * a.gx, a.v * b.gy + b.v * a.gy,
            a.v * b.lap + b.v * a.lap + 2.0 * dot_grad(a, b)};
}
inline Jet operator*(double s, const Jet& a) { return {s * a.v, s * a.gx, s * a.gy, s * a.lap}; }
inline Jet operator*(const Jet& a, double s) { return s * a; }
inline Jet operator+(const Jet& a, double s) { return {a.v + s, a.gx, a.gy, a.lap}; }
inline Jet operator+(double s, const Jet& a) { return a + s; }
inline Jet operator-(const Jet& a, double s) { return {a.v - s, a.gx, a.gy, a.lap}; }
inline Jet operator-(double s, const Jet& a) { return {s - a.v, -a.gx, -a.gy, -a.lap}; }

inline Jet reciprocal(const Jet& a) {
    const double r = 1.0 / a.v;
    return chain(a, r, -r * r, 2.0 * r * r * r);
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
inline Jet operator/(const Jet& a, double s) { return (1.0 / s) * a; }
inline Jet operator/(double s, const Jet& a) { return s * reciprocal(a); }

inline Jet sqrt(const Jet& a) {
    const double r = std::sqrt(a.v);
    return chain(a, r, 0.5 / r, -0.25 / (r * a.v));
}
inline Jet asinh(const Jet& a) {
    const double q = 1.0 + a.v * a.v;
    const double s = std::sqrt(q);
    return chain(a, std::asinh(a.v), 1.0 / s, -a.v / (q * s));
}
inline Jet tanh(const Jet& a) {
    const double t = std::tanh(a.v);
    const double d = 1.0 - t * t;
    return chain(a, t, d, -2.0 * t * d);
}
inline Jet exp(const Jet& a) {
    const double e = std::exp(a.v);
    return chain(a, e, e, e);
}
inline Jet log(const Jet& a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline Jet cosh(const Jet& a) {
    return chain(a, std::cosh(a.v), std::sinh(a.v), std::cosh(a.v));
}
inline Jet abs(const Jet& a) { return a.v < 0.0 ? -a : a; }

}  // namespace hypac
