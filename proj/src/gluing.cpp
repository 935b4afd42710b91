#include "hypac/gluing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hypac/error.hpp"

namespace hypac {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinSeparation = 3.0;

// Quintic smoothstep: 0 below 0, 1 above 1, C^2.
double smoothstep(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

Jet smoothstep(const Jet& a) {
    const double x = a.v;
    if (x <= 0.0) return Jet(0.0);
    if (x >= 1.0) return Jet(1.0);
    const double om = 1.0 - x;
    return chain(a, smoothstep(x), 30.0 * x * x * om * om, 60.0 * x * om * (1.0 - 2.0 * x));
}

// Quadratic soft minimum with blending scale k; exact when |a - b| >= k.
template <class S>
S soft_min(const S& a, const S& b, double k) {
    const double d = value_of(a) - value_of(b);
    if (d <= -k) return a;
    if (d >= k) return b;
    const S diff = a - b;
    return 0.5 * (a + b) - 0.25 * k - diff * diff / (4.0 * k);
}

double abs_of(double v) { return std::abs(v); }
Jet abs_of(const Jet& v) { return abs(v); }

int side_of(const Geodesic& g, const DiskPoint& p) { return signed_distance(p, g) >= 0.0 ? 1 : -1; }

int side_of_angle(const Geodesic& g, double angle) {
    return g.positive_side_contains_angle(angle) ? 1 : -1;
}

double default_base_angle(const std::vector<Geodesic>& geodesics) {
    std::vector<double> ends;
    for (const auto& g : geodesics) {
        ends.push_back(g.theta1());
        ends.push_back(g.theta2());
    }
    std::sort(ends.begin(), ends.end());
    const bool zero_is_endpoint = std::any_of(ends.begin(), ends.end(), [](double a) {
        return a < 1e-12 || 2.0 * kPi - a < 1e-12;
    });
    if (!zero_is_endpoint) return 0.0;
    // first endpoint strictly after 0
    for (double a : ends)
        if (a >= 1e-12 && 2.0 * kPi - a >= 1e-12) return 0.5 * a;
    return kPi;  // unreachable for distinct endpoints
}

}  // namespace

// ---------------------------------------------------------------------------

LabeledConfiguration::LabeledConfiguration(std::vector<Geodesic> geodesics, std::vector<Region> regions,
                                           std::vector<std::pair<int, int>> adjacency,
                                           std::vector<int> orientation, std::vector<int> base_sides,
                                           double base_angle, double min_separation)
    : geodesics_(std::move(geodesics)),
      regions_(std::move(regions)),
      adjacency_(std::move(adjacency)),
      orientation_(std::move(orientation)),
      base_sides_(std::move(base_sides)),
      base_angle_(base_angle),
      min_separation_(min_separation) {}

int LabeledConfiguration::label_at(const DiskPoint& p) const {
    require_in_disk(p);
    int label = 1;
    for (int j = 0; j < size(); ++j) label *= side_of(geodesics_[j], p) * base_sides_[j];
    return label;
}

int LabeledConfiguration::region_index(const DiskPoint& p) const {
    require_in_disk(p);
    std::vector<int> sides(size());
    for (int j = 0; j < size(); ++j) sides[j] = side_of(geodesics_[j], p);
    for (std::size_t r = 0; r < regions_.size(); ++r)
        if (regions_[r].sides == sides) return static_cast<int>(r);
    throw DegenerateConfiguration("point lies in no region");
}

LabeledConfiguration label_regions(const std::vector<Geodesic>& geodesics,
                                   std::optional<double> base_angle) {
    const int N = static_cast<int>(geodesics.size());
    if (N < 1) throw InvalidArgument("a configuration needs at least one geodesic");

    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            if (!geodesics_disjoint(geodesics[i], geodesics[j])) {
                std::ostringstream os;
                os << "geodesics " << i << " and " << j << " intersect";
                throw IntersectingGeodesics(os.str());
            }
            dmin = std::min(dmin, geodesic_gap(geodesics[i], geodesics[j]));
        }

    const double base = normalize_angle(base_angle ? *base_angle : default_base_angle(geodesics));
    std::vector<int> base_sides(N);
    for (int j = 0; j < N; ++j) {
        const Geodesic& g = geodesics[j];
        if (std::abs(ccw_angle(g.theta1(), base)) < 1e-12 || std::abs(ccw_angle(g.theta2(), base)) < 1e-12)
            throw DegenerateConfiguration("base angle lies on an ideal endpoint");
        base_sides[j] = side_of_angle(g, base);
    }

    // The 2N endpoints cut the circle into arcs, each inside exactly one region.
    std::vector<double> ends;
    for (const auto& g : geodesics) {
        ends.push_back(g.theta1());
        ends.push_back(g.theta2());
    }
    std::sort(ends.begin(), ends.end());
    std::vector<Region> regions;
    for (std::size_t k = 0; k < ends.size(); ++k) {
        const double from = ends[k];
        const double to = ends[(k + 1) % ends.size()];
        const double mid = normalize_angle(from + 0.5 * ccw_angle(from, to));
        std::vector<int> sides(N);
        int label = 1;
        for (int j = 0; j < N; ++j) {
            sides[j] = side_of_angle(geodesics[j], mid);
            label *= sides[j] * base_sides[j];
        }
        auto it = std::find_if(regions.begin(), regions.end(),
                               [&](const Region& r) { return r.sides == sides; });
        if (it == regions.end()) {
            regions.push_back(Region{sides, label, {}, {}});
            it = regions.end() - 1;
        }
        it->arcs.emplace_back(from, to);
    }
    if (static_cast<int>(regions.size()) != N + 1)
        throw DegenerateConfiguration("complement does not split into N + 1 regions");

    // Geodesic j separates the two regions whose side vectors differ only at j.
    std::vector<std::pair<int, int>> adjacency(N, {-1, -1});
    std::vector<int> orientation(N, 0);
    for (int j = 0; j < N; ++j) {
        for (int a = 0; a <= N; ++a)
            for (int b = a + 1; b <= N; ++b) {
                int differing = 0, where = -1;
                for (int k = 0; k < N; ++k)
                    if (regions[a].sides[k] != regions[b].sides[k]) {
                        ++differing;
                        where = k;
                    }
                if (differing == 1 && where == j) adjacency[j] = {a, b};
            }
        auto [a, b] = adjacency[j];
        if (a < 0) throw DegenerateConfiguration("a geodesic borders no pair of regions");
        regions[a].boundary_geodesics.push_back(j);
        regions[b].boundary_geodesics.push_back(j);
        orientation[j] = regions[a].sides[j] > 0 ? regions[a].label : regions[b].label;
    }
    return LabeledConfiguration(geodesics, std::move(regions), std::move(adjacency), std::move(orientation),
                                std::move(base_sides), base, dmin);
}

VoronoiIndex voronoi_index(const LabeledConfiguration& cfg, const DiskPoint& p) {
    require_in_disk(p);
    double best = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    int index = 0;
    for (int j = 0; j < cfg.size(); ++j) {
        const double d = std::abs(signed_distance(p, cfg.geodesics()[j]));
        if (d < best) {
            second = best;
            best = d;
            index = j;
        } else if (d < second) {
            second = d;
        }
    }
    VoronoiIndex v;
    v.index = index;
    v.margin = second - best;
    v.on_equidistant_set = v.margin == 0.0;
    return v;
}

Geodesic bisector(const Geodesic& g1, const Geodesic& g2) {
    const double gap = geodesic_gap(g1, g2);
    const MobiusIsometry& S = g1.standardizing();
    // Cayley coordinates of g2's endpoints once g1 is the real diameter; the
    // common perpendicular meets the diameter at the geometric mean.
    const double c1 = std::arg(S.apply(g2.endpoint1()));
    const double c2 = std::arg(S.apply(g2.endpoint2()));
    const double p = -1.0 / std::tan(0.5 * c1), q = -1.0 / std::tan(0.5 * c2);
    const double root = std::sqrt(p * q);
    const double foot = (root - 1.0) / (root + 1.0);
    const MobiusIsometry N = MobiusIsometry::translation(-2.0 * std::atanh(foot)).compose(S);
    // g2 now crosses the imaginary axis perpendicularly at distance `gap`
    const double up = N.apply(g2.endpoint1()).imag() > 0.0 ? 1.0 : -1.0;
    const double alpha = up * 2.0 * std::atan(std::tanh(0.25 * gap));
    const Geodesic normal(alpha, kPi - alpha);
    Geodesic b = transform(normal, N.inverse());
    if (signed_distance(g2.apex(), b) < 0.0) b = b.flipped_copy();
    return b;
}

// ---------------------------------------------------------------------------

Partition::Partition(const LabeledConfiguration& cfg, PartitionSpec spec) : n_(cfg.size()), spec_(spec) {
    if (!(spec.width > 0.0) || !(spec.core_radius > 0.0))
        throw InvalidArgument("partition width and core radius must be positive");
    if (n_ > 1 && cfg.min_separation() < kMinSeparation) {
        std::ostringstream os;
        os << "minimal separation " << cfg.min_separation() << " is below " << kMinSeparation;
        throw SeparationTooSmall(os.str());
    }
    const auto& g = cfg.geodesics();
    bisectors_.reserve(static_cast<std::size_t>(n_) * n_);
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i)
            bisectors_.push_back(i == j ? g[j] : bisector(g[i], g[j]));
}

const Geodesic& Partition::bisector_towards(int j, int i) const {
    if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_) throw InvalidArgument("bad bisector index");
    return bisectors_[static_cast<std::size_t>(j) * n_ + i];
}

template <class S>
std::vector<S> Partition::weights_t(const S& x, const S& y) const {
    std::vector<S> b(n_, S(1.0));
    if (n_ == 1) return b;
    const double c = spec_.core_radius, span = spec_.core_radius + spec_.width;
    S total(0.0);
    for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < n_ && value_of(b[j]) != 0.0; ++i) {
            if (i == j) continue;
            const S s = signed_distance_t(x, y, bisectors_[static_cast<std::size_t>(j) * n_ + i]);
            const double sv = value_of(s);
            if (sv >= spec_.width) continue;  // factor is exactly 1
            if (sv <= -c) {
                b[j] = S(0.0);
                break;
            }
            b[j] = b[j] * smoothstep((s + c) / span);
        }
        total = total + b[j];
    }
    for (auto& w : b) w = w / total;
    return b;
}

template std::vector<double> Partition::weights_t(const double&, const double&) const;
template std::vector<Jet> Partition::weights_t(const Jet&, const Jet&) const;

std::vector<double> Partition::weights(const DiskPoint& p) const {
    require_in_disk(p);
    return weights_t(p.x, p.y);
}

std::vector<double> partition_weights(const LabeledConfiguration& cfg, const PartitionSpec& spec,
                                      const DiskPoint& p) {
    return Partition(cfg, spec).weights(p);
}

template <class S>
S weight_tau_t(const LabeledConfiguration& cfg, const S& x, const S& y, double smoothing) {
    const int N = cfg.size();
    std::vector<S> d(N);
    for (int j = 0; j < N; ++j) d[j] = abs_of(signed_distance_t(x, y, cfg.geodesics()[j]));
    std::sort(d.begin(), d.end(), [](const S& a, const S& b) { return value_of(a) < value_of(b); });
    S m = d[0];
    for (int j = 1; j < N; ++j) m = soft_min(m, d[j], smoothing);
    return static_cast<double>(cfg.label_at({value_of(x), value_of(y)})) * m;
}

template double weight_tau_t(const LabeledConfiguration&, const double&, const double&, double);
template Jet weight_tau_t(const LabeledConfiguration&, const Jet&, const Jet&, double);

double weight_tau(const LabeledConfiguration& cfg, const DiskPoint& p, double smoothing) {
    require_in_disk(p);
    return weight_tau_t(cfg, p.x, p.y, smoothing);
}

double weight_rho(const LabeledConfiguration&, const DiskPoint& p) {
    require_in_disk(p);
    return 1.0;
}

// ---------------------------------------------------------------------------

ApproximateSolution::ApproximateSolution(LabeledConfiguration cfg, PartitionSpec spec, Profile profile)
    : cfg_(std::move(cfg)), partition_(cfg_, spec), profile_(std::move(profile)) {
    if (profile_.dimension() != 2)
        throw InvalidArgument("the disk solution needs the two-dimensional profile");
}

template <class S>
S ApproximateSolution::evaluate(const S& x, const S& y) const {
    const std::vector<S> chi = partition_.weights_t(x, y);
    S u(0.0);
    for (int j = 0; j < cfg_.size(); ++j) {
        if (value_of(chi[j]) == 0.0) continue;
        const S t = signed_distance_t(x, y, cfg_.geodesics()[j]);
        u = u + chi[j] * profile_.value(static_cast<double>(cfg_.orientation()[j]) * t);
    }
    return u;
}

double ApproximateSolution::value(const DiskPoint& p) const {
    require_in_disk(p);
    return evaluate(p.x, p.y);
}

Jet ApproximateSolution::value_jet(double x, double y) const {
    require_in_disk({x, y});
    return evaluate(Jet::x(x), Jet::y(y));
}

double ApproximateSolution::residual(const DiskPoint& p) const {
    const Jet u = value_jet(p.x, p.y);
    const double q = 1.0 - p.norm_sq();
    return 0.25 * q * q * u.lap - profile_.potential().f(u.v);
}

ApproximateSolution approximate_solution(const LabeledConfiguration& cfg, const PartitionSpec& spec,
                                         const Profile& prof) {
    return ApproximateSolution(cfg, spec, prof);
}

}  // namespace hypac
