#include "doctest.h"

#include <cmath>

#include "hypac/config.hpp"

using namespace hypac;

namespace {

std::vector<Violation> violations_of(const std::string& raw) {
    try {
        validate_config(raw);
    } catch (const ConstraintViolation& e) {
        return e.violations();
    }
    return {};
}

bool has_path(const std::vector<Violation>& v, const std::string& path) {
    for (const auto& x : v)
        if (x.path == path) return true;
    return false;
}

}  // namespace

TEST_CASE("minimal config gets the defaults") {
    const ExperimentConfig c = validate_config("{}");
    CHECK(c == ExperimentConfig{});
    CHECK(c.profile.T == 12.0);
    CHECK(c.profile.h == 0.005);
    CHECK(c.grid.h_g == 1.0 / 512);
    CHECK(c.grid.r_max == 0.995);
    CHECK(c.solver.tol == 1e-10);
    CHECK(c.geodesics.size() == 1);
}

TEST_CASE("serialize then parse is the identity") {
    ExperimentConfig c;
    c.n = 3;
    c.potential.kind = "asymmetric";
    c.potential.epsilon = 0.1;
    c.geodesics = {{-30.0, 30.0, true}, {150.0, 210.0, false}};
    c.grid = {1.0 / 256, 0.99};
    c.solver.method = "picard";
    c.solver.formulation = "corrected";
    c.weights = {0.7, 0.3};
    c.sweep.separations = {6.5, 7.0 / 3.0 + 5.0};
    c.seed = 1234567890123ULL;
    c.threads = 2;
    c.output_dir = "runs/a";
    const ExperimentConfig back = validate_config(serialize_config(c));
    CHECK(back == c);
    CHECK(serialize_config(back) == serialize_config(c));
}

TEST_CASE("degenerate and intersecting geodesics") {
    auto v = violations_of(R"({"geodesics": [{"theta1_deg": 40, "theta2_deg": 40}]})");
    REQUIRE(v.size() == 1);
    CHECK(v[0].path == "geodesics[0]");

    v = violations_of(R"({"geodesics": [{"theta1_deg": 0, "theta2_deg": 180},
                                        {"theta1_deg": 20, "theta2_deg": 200},
                                        {"theta1_deg": 250, "theta2_deg": 290}]})");
    REQUIRE(v.size() == 1);
    CHECK(v[0].path == "geodesics[0], geodesics[1]");
    CHECK(v[0].found == "intersecting pair");

    v = violations_of(R"({"geodesics": [{"theta1_deg": 0, "theta2_deg": 90}, {"theta1_deg": 90, "theta2_deg": 180}]})");
    REQUIRE(v.size() == 1);
    CHECK(v[0].constraint == "no shared ideal endpoint");

    v = violations_of(R"({"geodesics": [{"theta1_deg": 10}]})");
    CHECK(has_path(v, "geodesics[0]"));
}

TEST_CASE("weight exponents are checked against the spectral rates") {
    CHECK(has_path(violations_of(R"({"weights": {"mu": 2.0}})"), "weights.mu"));
    CHECK(has_path(violations_of(R"({"weights": {"mu": 2.5}})"), "weights.mu"));
    CHECK(has_path(violations_of(R"({"weights": {"mu": 0}})"), "weights.mu"));
    CHECK(violations_of(R"({"weights": {"mu": 1.99}})").empty());
    CHECK(violations_of(R"({"n": 3, "weights": {"mu": 2.5, "delta": 0.25}})").empty());
    CHECK(has_path(violations_of(R"({"n": 3, "weights": {"delta": 0.5}})"), "weights.delta"));
}

TEST_CASE("every violation is reported with path, constraint and value") {
    const auto v = violations_of(R"({"grid": {"h_g": 0.3, "r_max": 1.2}, "solver": {"method": "bfgs", "max_iter": 0},
                                     "threads": 0, "n": 11, "profile": {"h": -1}})");
    for (const char* p : {"grid.h_g", "grid.r_max", "solver.method", "solver.max_iter", "threads", "n", "profile.h"})
        CHECK_MESSAGE(has_path(v, p), p);
    for (const auto& x : v) {
        CHECK_FALSE(x.constraint.empty());
        CHECK_FALSE(x.found.empty());
    }
    CHECK(has_path(violations_of(R"({"grid": {"h_g": 0.001953125, "r_max": 0.999}})"), "grid.r_max"));
    CHECK(has_path(violations_of(R"({"profile": {"T": 3}})"), "profile.T"));
}

TEST_CASE("unknown fields and wrong types") {
    auto v = violations_of(R"({"grdi": {}, "solver": {"tolerance": 1e-9}})");
    CHECK(has_path(v, "grdi"));
    CHECK(has_path(v, "solver.tolerance"));
    v = violations_of(R"({"n": "two", "solver": {"eigenvalue": 1}, "seed": -4, "geodesics": {}})");
    CHECK(has_path(v, "n"));
    CHECK(has_path(v, "solver.eigenvalue"));
    CHECK(has_path(v, "seed"));
    CHECK(has_path(v, "geodesics"));
    CHECK_THROWS_AS(validate_config("[1, 2]"), ConstraintViolation);
}

TEST_CASE("malformed text is a parse error with its location") {
    try {
        validate_config("{\n  \"n\": 2,\n  \"grid\": {\"h_g\": }\n}");
        FAIL("no exception");
    } catch (const ParseError& e) {
        const std::string what = e.what();
        CHECK(what.find("line 3") != std::string::npos);
        CHECK(what.find("column") != std::string::npos);
    }
}

TEST_CASE("potential kinds") {
    const auto c = validate_config(R"({"potential": {"kind": "asymmetric", "epsilon": 0.2}})");
    const auto p = c.potential.build();
    for (double u : {-2.0, -0.5, 0.3, 1.7}) {
        const double exact = std::pow(1 - u * u, 2) * (1 + 0.2 * u) / 4;
        CHECK(p.F(u) == doctest::Approx(exact).epsilon(1e-14));
    }
    CHECK(has_path(violations_of(R"({"potential": {"kind": "asymmetric", "epsilon": 0.6}})"), "potential"));
    CHECK(has_path(violations_of(R"({"potential": {"kind": "cubic"}})"), "potential.kind"));
    CHECK(violations_of(R"({"potential": {"kind": "polynomial", "coefficients": [0.25, 0, -0.5, 0, 0.25]}})").empty());
    CHECK(has_path(violations_of(R"({"potential": {"kind": "polynomial", "coefficients": [1, 0, 1]}})"), "potential"));
}
