#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "hypac/jet.hpp"

namespace hypac {

using Complex = std::complex<double>;

/// Point of the open unit disk (Poincare model of H^2).
struct DiskPoint {
    double x = 0.0;
    double y = 0.0;

    double norm_sq() const { return x * x + y * y; }
    friend bool operator==(const DiskPoint&, const DiskPoint&) = default;
};

/// Throws DomainError unless |p| < 1.
void require_in_disk(const DiskPoint& p);

/// Conformal factor lambda = 2 / (1 - |x|^2) of the disk metric.
inline double conformal_factor(const DiskPoint& p) { return 2.0 / (1.0 - p.norm_sq()); }

double hyperbolic_distance(const DiskPoint& p, const DiskPoint& q);

/// Disk isometry z -> (a w + b) / (conj(b) w + conj(a)), where w = z or
/// w = conj(z) for the orientation-reversing variant. Normalized so that
/// |a|^2 - |b|^2 = 1.
class MobiusIsometry {
public:
    MobiusIsometry() = default;
    MobiusIsometry(Complex a, Complex b, bool conjugate);

    static MobiusIsometry identity() { return {}; }
    static MobiusIsometry rotation(double angle);
    /// Hyperbolic translation of length s along the real diameter.
    static MobiusIsometry translation(double s);
    /// z -> conj(z), i.e. y -> -y.
    static MobiusIsometry reflection();
    /// z -> (z - p) / (1 - conj(p) z), carrying p to the origin.
    static MobiusIsometry recentering(Complex p);

    Complex a() const { return a_; }
    Complex b() const { return b_; }
    bool conjugate() const { return conj_; }
    bool orientation_preserving() const { return !conj_; }

    MobiusIsometry inverse() const;
    /// (*this) o other
    MobiusIsometry compose(const MobiusIsometry& other) const;

    /// Works on the closed disk, so ideal points map to ideal points.
    Complex apply(Complex z) const;

    /// Image of (x, y); also returns 1 - |image|^2 computed without
    /// cancellation as (1 - |z|^2) / |denominator|^2.
    template <class S>
    void apply(const S& x, const S& y, S& ox, S& oy, S& one_minus_r2) const;

private:
    Complex a_{1.0, 0.0};
    Complex b_{0.0, 0.0};
    bool conj_ = false;
};

DiskPoint apply_isometry(const MobiusIsometry& m, const DiskPoint& p);

/// Complete geodesic of the disk given by its two ideal endpoint angles.
///
/// The positive side is the one adjacent to the boundary arc running
/// counter-clockwise from theta1 to theta2; `flip` swaps it.
class Geodesic {
public:
    Geodesic(double theta1, double theta2, bool flip = false);
    static Geodesic from_degrees(double theta1_deg, double theta2_deg, bool flip = false);

    double theta1() const { return theta1_; }
    double theta2() const { return theta2_; }
    bool flipped() const { return flip_; }
    Complex endpoint1() const { return std::polar(1.0, theta1_); }
    Complex endpoint2() const { return std::polar(1.0, theta2_); }

    /// Carries this geodesic onto the real diameter, positive side up.
    const MobiusIsometry& standardizing() const { return standard_; }
    const MobiusIsometry& unstandardizing() const { return inverse_; }

    /// Point of the geodesic closest to the origin.
    DiskPoint apex() const { return apex_; }
    double distance_from_origin() const;

    /// Unit-speed parametrization: s = 0 at the apex.
    DiskPoint point_at(double s) const;

    /// Whether the boundary angle lies on the positive side's boundary arc.
    bool positive_side_contains_angle(double angle) const;

    Geodesic flipped_copy() const { return Geodesic(theta1_, theta2_, !flip_); }

private:
    double theta1_, theta2_;
    bool flip_;
    DiskPoint apex_;
    MobiusIsometry standard_, inverse_;
};

/// Image of a geodesic under an isometry, with its positive side transported.
Geodesic transform(const Geodesic& g, const MobiusIsometry& m);

MobiusIsometry standardizing_isometry(const Geodesic& g);

/// Signed hyperbolic distance from p to g; positive on g's positive side.
double signed_distance(const DiskPoint& p, const Geodesic& g);

/// Same closed form, templated so that Jet arguments produce derivatives.
template <class S>
S signed_distance_t(const S& x, const S& y, const Geodesic& g);

/// True iff the endpoint pairs do not interleave. Throws
/// DegenerateConfiguration when an ideal endpoint is shared.
bool geodesics_disjoint(const Geodesic& g1, const Geodesic& g2);

/// Length of the common perpendicular of two disjoint geodesics.
double geodesic_gap(const Geodesic& g1, const Geodesic& g2);

/// Angle normalized to [0, 2 pi).
double normalize_angle(double a);
/// Counter-clockwise angular distance from `from` to `to`, in [0, 2 pi).
double ccw_angle(double from, double to);

// ---------------------------------------------------------------------------

template <class S>
void MobiusIsometry::apply(const S& x, const S& y, S& ox, S& oy, S& one_minus_r2) const {
    const S wy = conj_ ? -y : y;
    const double ar = a_.real(), ai = a_.imag(), br = b_.real(), bi = b_.imag();
    // numerator a w + b, denominator conj(b) w + conj(a)
    const S nr = ar * x - ai * wy + br;
    const S ni = ar * wy + ai * x + bi;
    const S dr = br * x + bi * wy + ar;
    const S di = br * wy - bi * x - ai;
    const S den = dr * dr + di * di;
    ox = (nr * dr + ni * di) / den;
    oy = (ni * dr - nr * di) / den;
    one_minus_r2 = (1.0 - (x * x + y * y)) / den;
}

template <class S>
S signed_distance_t(const S& x, const S& y, const Geodesic& g) {
    using std::asinh;
    S wx, wy, q;
    g.standardizing().apply(x, y, wx, wy, q);
    return asinh(2.0 * wy / q);
}

}  // namespace hypac
