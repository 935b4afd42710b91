#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hypac/geometry.hpp"
#include "hypac/jet.hpp"
#include "hypac/profile.hpp"

namespace hypac {

/// Connected component of the disk minus all geodesics.
struct Region {
    std::vector<int> sides;  // +1 / -1 per geodesic: which side the region lies on
    int label = 1;
    std::vector<std::pair<double, double>> arcs;  // boundary arcs [from, to], ccw
    std::vector<int> boundary_geodesics;
};

/// Pairwise disjoint geodesics with a +-1 labeling of the complementary regions
/// such that neighbouring regions carry opposite labels.
class LabeledConfiguration {
public:
    LabeledConfiguration(std::vector<Geodesic> geodesics, std::vector<Region> regions,
                         std::vector<std::pair<int, int>> adjacency, std::vector<int> orientation,
                         std::vector<int> base_sides, double base_angle, double min_separation);

    int size() const { return static_cast<int>(geodesics_.size()); }
    const std::vector<Geodesic>& geodesics() const { return geodesics_; }
    const std::vector<Region>& regions() const { return regions_; }
    /// Entry j holds the two regions separated by geodesic j.
    const std::vector<std::pair<int, int>>& adjacency() const { return adjacency_; }
    /// sigma_j: the label on the positive side of geodesic j.
    const std::vector<int>& orientation() const { return orientation_; }
    double base_angle() const { return base_angle_; }
    /// D_H; infinite for a single geodesic.
    double min_separation() const { return min_separation_; }

    /// Label of the region containing p (points on a geodesic count as its positive side).
    int label_at(const DiskPoint& p) const;
    int region_index(const DiskPoint& p) const;

private:
    std::vector<Geodesic> geodesics_;
    std::vector<Region> regions_;
    std::vector<std::pair<int, int>> adjacency_;
    std::vector<int> orientation_;
    std::vector<int> base_sides_;
    double base_angle_;
    double min_separation_;
};

/// The region touching `base_angle` gets +1. Without an explicit angle, 0 is
/// used, or the middle of the first arc after 0 when 0 is an endpoint.
LabeledConfiguration label_regions(const std::vector<Geodesic>& geodesics,
                                   std::optional<double> base_angle = std::nullopt);

struct VoronoiIndex {
    int index = 0;
    double margin = 0.0;  // second-closest minus closest unsigned distance
    bool on_equidistant_set = false;
};

VoronoiIndex voronoi_index(const LabeledConfiguration& cfg, const DiskPoint& p);

/// Geodesic equidistant from g1 and g2, with g2 on its positive side.
Geodesic bisector(const Geodesic& g1, const Geodesic& g2);

struct PartitionSpec {
    double core_radius = 1.0;  // support reaches this far past each bisector
    double width = 1.0;        // chi_j = 1 at distance > width from the cell complement
};

/// Smooth partition of unity subordinate to the enlarged Voronoi cells.
///
/// chi_j is proportional to prod_i B((s_ji + c) / (c + w)), where s_ji is the
/// signed distance to the bisector of H_j and H_i (positive towards H_j) and B
/// the quintic smoothstep.
class Partition {
public:
    Partition(const LabeledConfiguration& cfg, PartitionSpec spec = {});

    const PartitionSpec& spec() const { return spec_; }
    int size() const { return n_; }
    /// The bisector between H_i and H_j oriented towards H_j.
    const Geodesic& bisector_towards(int j, int i) const;

    std::vector<double> weights(const DiskPoint& p) const;
    template <class S>
    std::vector<S> weights_t(const S& x, const S& y) const;

private:
    int n_;
    PartitionSpec spec_;
    std::vector<Geodesic> bisectors_;  // row-major n x n, diagonal unused
};

/// Throws SeparationTooSmall when D_H < 3.
std::vector<double> partition_weights(const LabeledConfiguration& cfg, const PartitionSpec& spec,
                                      const DiskPoint& p);

/// Signed smoothed distance: label(p) times a soft minimum of the unsigned
/// distances, exact where the Voronoi margin exceeds the blending scale.
double weight_tau(const LabeledConfiguration& cfg, const DiskPoint& p, double smoothing = 0.2);
template <class S>
S weight_tau_t(const LabeledConfiguration& cfg, const S& x, const S& y, double smoothing = 0.2);

/// The two-dimensional weight is identically 1.
double weight_rho(const LabeledConfiguration& cfg, const DiskPoint& p);

/// u_H = sum_j chi_j U_0(sigma_j t_j) on the disk.
class ApproximateSolution {
public:
    ApproximateSolution(LabeledConfiguration cfg, PartitionSpec spec, Profile profile);

    const LabeledConfiguration& configuration() const { return cfg_; }
    const Partition& partition() const { return partition_; }
    const Profile& profile() const { return profile_; }

    double value(const DiskPoint& p) const;
    Jet value_jet(double x, double y) const;
    /// Delta_H u_H - f(u_H), evaluated with exact derivatives.
    double residual(const DiskPoint& p) const;
    double tau(const DiskPoint& p) const { return weight_tau(cfg_, p); }

private:
    template <class S>
    S evaluate(const S& x, const S& y) const;

    LabeledConfiguration cfg_;
    Partition partition_;
    Profile profile_;
};

/// Requires a two-dimensional profile and D_H >= 3.
ApproximateSolution approximate_solution(const LabeledConfiguration& cfg, const PartitionSpec& spec,
                                         const Profile& prof);

}  // namespace hypac
