#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "hypac/error.hpp"
#include "hypac/gluing.hpp"
#include "support.hpp"

using namespace hypac;
using std::numbers::pi;

namespace {

const Profile& profile2() {
    static const Profile p = solve_profile(DoubleWellPotential::quartic(), 2, 12.0, 0.005, 1e-10);
    return p;
}

std::vector<Geodesic> pair_at(double D) {
    const double th = std::acos(std::tanh(D / 2));
    return {Geodesic(-th, th), Geodesic(pi - th, pi + th)};
}

// random configurations with D_H >= 3, so that the partition exists
std::vector<Geodesic> separated_configuration(std::mt19937_64& rng, int max_n) {
    for (;;) {
        auto gs = testsupport::random_configuration(rng, max_n);
        if (label_regions(gs).min_separation() >= 3.0) return gs;
    }
}

}  // namespace

TEST_CASE("labels agree with a brute-force 2-colouring") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 60; ++k) {
        const auto gs = testsupport::random_configuration(rng, 8);
        const LabeledConfiguration cfg = label_regions(gs);
        REQUIRE(cfg.regions().size() == gs.size() + 1);
        const auto brute = testsupport::brute_colouring(gs, cfg.base_angle());
        CHECK(brute.bipartite);
        CHECK(brute.colour.size() == gs.size() + 1);
        for (int s = 0; s < 300; ++s) {
            const DiskPoint p = testsupport::random_disk_point(rng, 8);
            const auto it = brute.colour.find(testsupport::side_vector(gs, p));
            REQUIRE(it != brute.colour.end());
            CHECK(cfg.label_at(p) == it->second);
        }
        for (std::size_t j = 0; j < gs.size(); ++j) {
            const auto [a, b] = cfg.adjacency()[j];
            CHECK(cfg.regions()[a].label == -cfg.regions()[b].label);
            // orientation is the label just off the positive side
            const DiskPoint above = apply_isometry(gs[j].unstandardizing(), {0.0, 1e-4});
            CHECK(signed_distance(above, gs[j]) > 0.0);
            CHECK(cfg.label_at(above) == cfg.orientation()[j]);
        }
    }
}

TEST_CASE("labeling basics") {
    const auto one = label_regions({Geodesic(0.0, pi)});
    CHECK(one.regions().size() == 2);
    CHECK(std::isinf(one.min_separation()));
    CHECK(one.label_at({0.5, 0.0 + 1e-3}) == -one.label_at({0.5, -1e-3}));

    // the base region is labelled +1
    const auto two = label_regions(pair_at(4.0));
    CHECK(two.label_at({0.99, 0.0}) == 1);
    CHECK(two.label_at({0.0, 0.0}) == -1);
    CHECK(two.label_at({-0.99, 0.0}) == 1);
    CHECK(two.min_separation() == doctest::Approx(4.0));
    const auto moved = label_regions(pair_at(4.0), pi / 2);
    CHECK(moved.label_at({0.0, 0.0}) == 1);

    CHECK_THROWS_AS(label_regions({Geodesic(0.0, pi), Geodesic(pi / 2, 3 * pi / 2)}), IntersectingGeodesics);
    CHECK_THROWS_AS(label_regions({}), InvalidArgument);
}

TEST_CASE("voronoi index picks the nearest geodesic") {
    std::mt19937_64 rng(12);
    const auto gs = separated_configuration(rng, 5);
    const auto cfg = label_regions(gs);
    for (int s = 0; s < 500; ++s) {
        const DiskPoint p = testsupport::random_disk_point(rng, 6);
        std::vector<double> d;
        for (const auto& g : gs) d.push_back(std::abs(signed_distance(p, g)));
        const auto vi = voronoi_index(cfg, p);
        CHECK(d[vi.index] == doctest::Approx(*std::min_element(d.begin(), d.end())));
        CHECK(vi.margin >= 0.0);
    }
}

TEST_CASE("bisector is equidistant from both geodesics") {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 40; ++k) {
        auto gs = testsupport::random_configuration(rng, 8);
        if (gs.size() < 2) continue;
        const Geodesic b = bisector(gs[0], gs[1]);
        for (double s : {-3.0, -1.0, 0.0, 0.7, 2.5}) {
            const DiskPoint p = b.point_at(s);
            CHECK(std::abs(signed_distance(p, gs[0])) ==
                  doctest::Approx(std::abs(signed_distance(p, gs[1]))).epsilon(1e-8));
        }
        // g2 lies on the positive side
        CHECK(signed_distance(gs[1].apex(), b) > 0.0);
        CHECK(signed_distance(gs[0].apex(), b) < 0.0);
    }
}

TEST_CASE("partition of unity") {
    std::mt19937_64 rng(14);
    for (int k = 0; k < 20; ++k) {
        const auto gs = separated_configuration(rng, 8);
        const auto cfg = label_regions(gs);
        const Partition part(cfg);
        for (int s = 0; s < 500; ++s) {
            const DiskPoint p = testsupport::random_disk_point(rng, 8);
            const auto chi = part.weights(p);
            double sum = 0.0;
            for (double c : chi) {
                CHECK(c >= 0.0);
                CHECK(c <= 1.0);
                sum += c;
            }
            CHECK(std::abs(sum - 1.0) <= 1e-12);
            // chi_j = 1 well inside the cell, 0 well outside
            const auto vi = voronoi_index(cfg, p);
            if (vi.margin > 2.0 * (part.spec().width + 0.5)) CHECK(chi[vi.index] == 1.0);
        }
    }
    // N = 2: chi = 1/2 on the bisector
    const auto cfg = label_regions(pair_at(6.0));
    const auto chi = partition_weights(cfg, {}, {0.0, 0.3});
    CHECK(chi[0] == doctest::Approx(0.5));
    CHECK(chi[1] == doctest::Approx(0.5));
    CHECK_THROWS_AS(partition_weights(label_regions(pair_at(2.0)), {}, {0.0, 0.0}), SeparationTooSmall);
    CHECK(partition_weights(label_regions({Geodesic(0, pi)}), {}, {0.1, 0.2}) == std::vector<double>{1.0});
}

TEST_CASE("partition jets match finite differences") {
    const auto cfg = label_regions(pair_at(5.0));
    const Partition part(cfg);
    for (const DiskPoint p : {DiskPoint{0.05, 0.3}, DiskPoint{-0.1, -0.2}, DiskPoint{0.2, 0.5}}) {
        const auto jets = part.weights_t(Jet::x(p.x), Jet::y(p.y));
        const double e = 1e-5;
        for (int j = 0; j < 2; ++j) {
            auto c = [&](double x, double y) { return part.weights({x, y})[j]; };
            CHECK(jets[j].v == doctest::Approx(c(p.x, p.y)));
            CHECK(jets[j].gx == doctest::Approx((c(p.x + e, p.y) - c(p.x - e, p.y)) / (2 * e)).epsilon(1e-6));
            const double e2 = 1e-3;
            const double lap =
                (c(p.x + e2, p.y) + c(p.x - e2, p.y) + c(p.x, p.y + e2) + c(p.x, p.y - e2) - 4 * c(p.x, p.y)) / (e2 * e2);
            CHECK(jets[j].lap == doctest::Approx(lap).epsilon(1e-4).scale(1.0));
        }
    }
}

TEST_CASE("smoothed signed distance") {
    std::mt19937_64 rng(15);
    for (int k = 0; k < 10; ++k) {
        const auto gs = separated_configuration(rng, 6);
        const auto cfg = label_regions(gs);
        for (int s = 0; s < 300; ++s) {
            const DiskPoint p = testsupport::random_disk_point(rng, 6);
            const double lam = conformal_factor(p), e = 1e-6 / lam;
            const double gx = (weight_tau(cfg, {p.x + e, p.y}) - weight_tau(cfg, {p.x - e, p.y})) / (2 * e);
            const double gy = (weight_tau(cfg, {p.x, p.y + e}) - weight_tau(cfg, {p.x, p.y - e})) / (2 * e);
            CHECK(std::hypot(gx, gy) / lam <= 1.05);
            const auto vi = voronoi_index(cfg, p);
            if (vi.margin > 0.5) {
                const double d = std::abs(signed_distance(p, gs[vi.index]));
                CHECK(weight_tau(cfg, p) == doctest::Approx(cfg.label_at(p) * d).epsilon(1e-12));
            }
        }
    }
    CHECK(weight_rho(label_regions(pair_at(4.0)), {0.3, 0.1}) == 1.0);
}

TEST_CASE("approximate solution") {
    const Profile& prof = profile2();
    {
        // one diameter: u_H is the profile of the oriented signed distance
        const auto cfg = label_regions({Geodesic(0.0, pi)});
        const auto ap = approximate_solution(cfg, {}, prof);
        const int s = cfg.orientation()[0];
        for (const DiskPoint p : {DiskPoint{0.2, 0.3}, DiskPoint{-0.5, -0.6}}) {
            CHECK(ap.value(p) == doctest::Approx(prof.value(s * signed_distance(p, Geodesic(0.0, pi)))));
            CHECK(std::abs(ap.residual(p)) < 1e-8);
        }
    }
    const auto cfg = label_regions(pair_at(6.0));
    const auto ap = approximate_solution(cfg, {}, prof);
    // sign of u_H follows the labels away from the geodesics
    CHECK(ap.value({0.995, 0.0}) > 0.99);
    CHECK(ap.value({0.0, 0.0}) < -0.9);
    // residual vanishes where a single chi_j is active, and matches finite differences elsewhere
    CHECK(std::abs(ap.residual({std::tanh(1.5), 0.0})) < 1e-8);
    // finite differences see the interpolant, so use a finely sampled profile
    const Profile fine = solve_profile(DoubleWellPotential::quartic(), 2, 12.0, 0.001, 1e-8);
    const auto apf = approximate_solution(cfg, {}, fine);
    for (const DiskPoint p : {DiskPoint{0.3, 0.2}, DiskPoint{-0.25, 0.4}, DiskPoint{0.0, 0.1}}) {
        const auto& ap = apf;
        const double h = 1e-3, lam = conformal_factor(p);
        const double lap = (ap.value({p.x + h, p.y}) + ap.value({p.x - h, p.y}) + ap.value({p.x, p.y + h}) +
                            ap.value({p.x, p.y - h}) - 4 * ap.value(p)) / (h * h);
        const double fd = lap / (lam * lam) - prof.potential().f(ap.value(p));
        CHECK(std::abs(ap.residual(p) - fd) < 2e-6);  // O(h^2) stencil error
    }
    const Jet j = ap.value_jet(0.3, 0.2);
    CHECK(j.v == doctest::Approx(ap.value({0.3, 0.2})));

    const Profile p3 = solve_profile(DoubleWellPotential::quartic(), 3, 12.0, 0.01, 1e-10);
    CHECK_THROWS_AS(approximate_solution(cfg, {}, p3), InvalidArgument);
}
