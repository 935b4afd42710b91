#include "hypac/geometry.hpp"

#include <sstream>

#include "hypac/error.hpp"

namespace hypac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEndpointTol = 1e-12;

bool same_angle(double a, double b) {
    const double d = normalize_angle(a - b);
    return d < kEndpointTol || kTwoPi - d < kEndpointTol;
}

// Strictly inside the ccw arc from `from` to `to`.
bool in_open_arc(double angle, double from, double to) {
    const double span = ccw_angle(from, to);
    const double d = ccw_angle(from, angle);
    return d > 0.0 && d < span;
}

}  // namespace

double normalize_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double ccw_angle(double from, double to) { return normalize_angle(to - from); }

void require_in_disk(const DiskPoint& p) {
    if (!(p.norm_sq() < 1.0) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
        std::ostringstream os;
        os << "point (" << p.x << ", " << p.y << ") is not inside the open unit disk";
        throw DomainError(os.str());
    }
}

double hyperbolic_distance(const DiskPoint& p, const DiskPoint& q) {
    require_in_disk(p);
    require_in_disk(q);
    const double dx = p.x - q.x, dy = p.y - q.y;
    const double e = std::sqrt(dx * dx + dy * dy);
    // 2 asinh(|p-q| / sqrt((1-|p|^2)(1-|q|^2))) is exact and stable for small e
    return 2.0 * std::asinh(e / std::sqrt((1.0 - p.norm_sq()) * (1.0 - q.norm_sq())));
}

// ---------------------------------------------------------------------------
// MobiusIsometry

MobiusIsometry::MobiusIsometry(Complex a, Complex b, bool conjugate) : conj_(conjugate) {
    const double det = std::norm(a) - std::norm(b);
    if (!(det > 0.0)) throw DomainError("Mobius parameters must satisfy |a| > |b|");
    const double s = 1.0 / std::sqrt(det);
    a_ = a * s;
    b_ = b * s;
}

MobiusIsometry MobiusIsometry::rotation(double angle) {
    return {std::polar(1.0, 0.5 * angle), Complex(0.0, 0.0), false};
}

MobiusIsometry MobiusIsometry::translation(double s) {
    return {Complex(std::cosh(0.5 * s), 0.0), Complex(std::sinh(0.5 * s), 0.0), false};
}

MobiusIsometry MobiusIsometry::reflection() { return {Complex(1.0, 0.0), Complex(0.0, 0.0), true}; }

MobiusIsometry MobiusIsometry::recentering(Complex p) {
    if (!(std::norm(p) < 1.0)) throw DomainError("recentering point must lie in the open disk");
    return {Complex(1.0, 0.0), -p, false};
}

MobiusIsometry MobiusIsometry::inverse() const {
    if (!conj_) return {std::conj(a_), -b_, false};
    return {a_, -std::conj(b_), true};
}

MobiusIsometry MobiusIsometry::compose(const MobiusIsometry& other) const {
    // conj o M = conj(M) o conj, where conj(M) has conjugated entries
    const Complex a2 = conj_ ? std::conj(other.a_) : other.a_;
    const Complex b2 = conj_ ? std::conj(other.b_) : other.b_;
    const Complex a = a_ * a2 + b_ * std::conj(b2);
    const Complex b = a_ * b2 + b_ * std::conj(a2);
    return {a, b, conj_ != other.conj_};
}

Complex MobiusIsometry::apply(Complex z) const {
    const Complex w = conj_ ? std::conj(z) : z;
    return (a_ * w + b_) / (std::conj(b_) * w + std::conj(a_));
}

DiskPoint apply_isometry(const MobiusIsometry& m, const DiskPoint& p) {
    require_in_disk(p);
    double x, y, q;
    m.apply(p.x, p.y, x, y, q);
    return {x, y};
}

// ---------------------------------------------------------------------------
// Geodesic

Geodesic::Geodesic(double theta1, double theta2, bool flip)
    : theta1_(normalize_angle(theta1)), theta2_(normalize_angle(theta2)), flip_(flip) {
    if (!std::isfinite(theta1) || !std::isfinite(theta2))
        throw DegenerateConfiguration("geodesic endpoint angles must be finite");
    if (same_angle(theta1_, theta2_))
        throw DegenerateConfiguration("geodesic endpoints must be distinct");

    const Complex e1 = endpoint1(), e2 = endpoint2();
    // apex = ((e1 + e2)/2) / (1 + sin w), w the half opening angle; stable for diameters
    const double sin_w = 0.5 * std::abs(e1 - e2);
    const Complex p0 = 0.5 * (e1 + e2) / (1.0 + sin_w);
    apex_ = {p0.real(), p0.imag()};

    const MobiusIsometry center = MobiusIsometry::recentering(p0);
    const Complex c1 = center.apply(e1);
    MobiusIsometry m = MobiusIsometry::rotation(-std::arg(c1)).compose(center);
    if (flip_) m = MobiusIsometry::reflection().compose(m);
    standard_ = m;
    inverse_ = m.inverse();
}

Geodesic Geodesic::from_degrees(double theta1_deg, double theta2_deg, bool flip) {
    constexpr double k = std::numbers::pi / 180.0;
    return {theta1_deg * k, theta2_deg * k, flip};
}

double Geodesic::distance_from_origin() const {
    return 2.0 * std::atanh(std::sqrt(apex_.norm_sq()));
}

DiskPoint Geodesic::point_at(double s) const {
    const Complex z = inverse_.apply(Complex(std::tanh(0.5 * s), 0.0));
    return {z.real(), z.imag()};
}

bool Geodesic::positive_side_contains_angle(double angle) const {
    return in_open_arc(normalize_angle(angle), theta1_, theta2_) != flip_;
}

Geodesic transform(const Geodesic& g, const MobiusIsometry& m) {
    const double t1 = std::arg(m.apply(g.endpoint1()));
    const double t2 = std::arg(m.apply(g.endpoint2()));
    // reflections reverse the cyclic order, so the positive arc becomes the
    // clockwise one from t1 to t2
    return {t1, t2, g.flipped() != m.conjugate()};
}

MobiusIsometry standardizing_isometry(const Geodesic& g) { return g.standardizing(); }

double signed_distance(const DiskPoint& p, const Geodesic& g) {
    require_in_disk(p);
    return signed_distance_t(p.x, p.y, g);
}

bool geodesics_disjoint(const Geodesic& g1, const Geodesic& g2) {
    const double a = g1.theta1(), b = g1.theta2();
    const double c = g2.theta1(), d = g2.theta2();
    if (same_angle(a, c) || same_angle(a, d) || same_angle(b, c) || same_angle(b, d))
        throw DegenerateConfiguration("geodesics share an ideal endpoint");
    return in_open_arc(c, a, b) == in_open_arc(d, a, b);
}

double geodesic_gap(const Geodesic& g1, const Geodesic& g2) {
    if (!geodesics_disjoint(g1, g2)) throw IntersectingGeodesics("geodesics intersect");
    const Complex a = g1.endpoint1(), b = g1.endpoint2();
    const Complex c = g2.endpoint1(), d = g2.endpoint2();
    // cross ratio k in (0,1) for the ordering a, c, d, b; tanh^2(gap/2) = k
    double k = std::abs(((c - a) * (d - b)) / ((c - b) * (d - a)));
    if (k > 1.0) k = 1.0 / k;
    return 2.0 * std::atanh(std::sqrt(k));
}

}  // namespace hypac
