#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypac/error.hpp"
#include "hypac/geometry.hpp"
#include "hypac/potential.hpp"

namespace hypac {

struct PotentialSpec {
    /// "quartic", "asymmetric" ((1-u^2)^2 (1 + eps u) / 4) or "polynomial".
    std::string kind = "quartic";
    double epsilon = 0.0;
    std::vector<double> coefficients;  // ascending powers of u, for "polynomial"

    DoubleWellPotential build() const;
    friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;
};

struct GeodesicSpec {
    double theta1_deg = 0.0;
    double theta2_deg = 180.0;
    bool flip = false;

    Geodesic build() const { return Geodesic::from_degrees(theta1_deg, theta2_deg, flip); }
    friend bool operator==(const GeodesicSpec&, const GeodesicSpec&) = default;
};

struct ProfileParams {
    double T = 12.0;
    double h = 0.005;
    double tol = 1e-10;
    friend bool operator==(const ProfileParams&, const ProfileParams&) = default;
};

struct GridParams {
    double h_g = 1.0 / 512.0;
    double r_max = 0.995;
    friend bool operator==(const GridParams&, const GridParams&) = default;
};

struct SolverParams {
    std::string method = "newton";  // newton | picard
    double tol = 1e-10;
    int max_iter = 50;
    double linear_tol = 1e-12;
    std::string formulation = "direct";  // direct | corrected
    bool eigenvalue = true;              // also compute the 2D stability eigenvalue
    friend bool operator==(const SolverParams&, const SolverParams&) = default;
};

struct WeightParams {
    double mu = 1.0;
    double delta = 0.25;
    friend bool operator==(const WeightParams&, const WeightParams&) = default;
};

struct PartitionParams {
    double width = 1.0;
    double core_radius = 1.0;
    friend bool operator==(const PartitionParams&, const PartitionParams&) = default;
};

struct SupersolutionParams {
    double epsilon = 0.02;
    double r_max = 20.0;
    double h_r = 0.05;
    friend bool operator==(const SupersolutionParams&, const SupersolutionParams&) = default;
};

struct SweepParams {
    std::vector<double> separations{6.0, 8.0, 10.0};
    bool cross_check = true;  // also run Picard and record its distance to Newton
    friend bool operator==(const SweepParams&, const SweepParams&) = default;
};

/// Everything a run needs; serializes to and from the JSON schema.
struct ExperimentConfig {
    PotentialSpec potential;
    int n = 2;
    ProfileParams profile;
    std::vector<GeodesicSpec> geodesics{GeodesicSpec{}};
    GridParams grid;
    SolverParams solver;
    WeightParams weights;
    PartitionParams partition;
    SupersolutionParams supersolution;
    SweepParams sweep;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
    int threads = 1;

    std::vector<Geodesic> build_geodesics() const;
    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
std::string serialize_config(const ExperimentConfig& cfg);

/// Parses JSON text, fills defaults and checks every constraint. Throws
/// ParseError on malformed text, ConstraintViolation listing every problem.
ExperimentConfig validate_config(const std::string& raw);

/// Range and consistency checks on an already built config.
std::vector<Violation> check_config(const ExperimentConfig& cfg);

}  // namespace hypac
