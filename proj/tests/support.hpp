#pragma once
// Shared generators and independent oracles for the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <random>
#include <vector>

#include "hypac/geometry.hpp"
#include "hypac/gluing.hpp"
#include "hypac/potential.hpp"

namespace testsupport {

using namespace hypac;

// F = (1 - u^2)^2 (a + c u + b u^2): positive away from the wells, monotone
// outside them on the validated range for the sampled coefficient box.
inline DoubleWellPotential random_potential(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> A(0.5, 2.0), B(0.1, 1.0), C(-0.1, 0.1);
    const double a = A(rng), b = B(rng), c = C(rng);
    return DoubleWellPotential::polynomial({a, c, b - 2 * a, -2 * c, a - 2 * b, c, b});
}

// Random non-crossing family: arcs placed in disjoint angular slots, some of
// them with smaller arcs nested inside.
inline std::vector<Geodesic> random_configuration(std::mt19937_64& rng, int max_n) {
    std::uniform_int_distribution<int> count(1, max_n);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const int N = count(rng);
    std::vector<Geodesic> out;
    // slots = outer arcs; each may host nested arcs
    std::vector<int> nest(N, 0);
    int outer = 0;
    for (int k = 0; k < N; ++k) {
        if (outer > 0 && uni(rng) < 0.3) ++nest[std::uniform_int_distribution<int>(0, outer - 1)(rng)];
        else ++outer;
    }
    const double two_pi = 2.0 * std::numbers::pi;
    const double offset = two_pi * uni(rng);
    const double slot = two_pi / outer;
    for (int s = 0; s < outer; ++s) {
        const double center = offset + (s + 0.5) * slot;
        double half = slot * (0.1 + 0.3 * uni(rng));
        const bool flip = uni(rng) < 0.5;
        out.emplace_back(center - half, center + half, flip);
        for (int k = 0; k < nest[s]; ++k) {
            // concentric inner arc, well inside the previous one
            half *= 0.05 + 0.25 * uni(rng);
            out.emplace_back(center - half, center + half, uni(rng) < 0.5);
        }
    }
    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

inline DiskPoint random_disk_point(std::mt19937_64& rng, double max_distance) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double r = std::tanh(0.5 * max_distance * std::sqrt(uni(rng)));
    const double a = 2.0 * std::numbers::pi * uni(rng);
    return {r * std::cos(a), r * std::sin(a)};
}

// Independent 2-colouring: regions are identified by side vectors, edges come
// from stepping across each geodesic at its apex, colours from BFS.
struct BruteColouring {
    std::map<std::vector<int>, int> colour;
    bool bipartite = true;
};

inline std::vector<int> side_vector(const std::vector<Geodesic>& gs, const DiskPoint& p) {
    std::vector<int> s;
    for (const auto& g : gs) s.push_back(signed_distance(p, g) >= 0.0 ? 1 : -1);
    return s;
}

inline BruteColouring brute_colouring(const std::vector<Geodesic>& gs, double base_angle) {
    std::map<std::vector<int>, std::vector<std::vector<int>>> adj;
    for (const auto& g : gs) {
        // the normal through the apex is radial, or perpendicular to a diameter
        const DiskPoint c = g.apex();
        const double r = std::sqrt(c.norm_sq());
        const double ux = r > 0 ? c.x / r : -std::sin(g.theta1());
        const double uy = r > 0 ? c.y / r : std::cos(g.theta1());
        const double d = std::atanh(r), step = 1e-3;
        const DiskPoint pa{std::tanh(d - step) * ux, std::tanh(d - step) * uy};
        const DiskPoint pb{std::tanh(d + step) * ux, std::tanh(d + step) * uy};
        const auto sa = side_vector(gs, pa), sb = side_vector(gs, pb);
        adj[sa].push_back(sb);
        adj[sb].push_back(sa);
    }
    BruteColouring out;
    const double rb = 1.0 - 1e-9;
    const auto base = side_vector(gs, {rb * std::cos(base_angle), rb * std::sin(base_angle)});
    out.colour[base] = 1;
    std::queue<std::vector<int>> q;
    q.push(base);
    while (!q.empty()) {
        auto v = q.front();
        q.pop();
        for (const auto& w : adj[v]) {
            auto it = out.colour.find(w);
            if (it == out.colour.end()) {
                out.colour[w] = -out.colour[v];
                q.push(w);
            } else if (it->second == out.colour[v]) {
                out.bipartite = false;
            }
        }
    }
    return out;
}

}  // namespace testsupport
