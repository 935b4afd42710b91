// hypac: command-line front end for the experiments.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hypac/config.hpp"
#include "hypac/experiments.hpp"

using nlohmann::json;

namespace {

struct Overrides {
    std::string config_path, output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads, n, max_iter;
    std::optional<double> mu, delta, h_g, r_max, tol, linear_tol, T, h, epsilon, width, core_radius;
    std::optional<std::string> method, formulation, potential;
    std::optional<double> potential_epsilon;
    std::vector<std::string> geodesics;
    std::vector<double> separations;
    bool no_eigenvalue = false;
    bool no_cross_check = false;
};

void add_flags(CLI::App* app, Overrides& o) {
    app->add_option("-c,--config", o.config_path, "JSON config file");
    app->add_option("-o,--output-dir", o.output_dir, "directory for outputs");
    app->add_option("--seed", o.seed, "seed for sampling checks");
    app->add_option("--threads", o.threads, "OpenMP thread count");
    app->add_option("--n", o.n, "dimension of the profile problem");
    app->add_option("--potential", o.potential, "quartic | asymmetric");
    app->add_option("--potential-epsilon", o.potential_epsilon, "asymmetry of the asymmetric potential");
    app->add_option("--T", o.T, "profile half-width");
    app->add_option("--profile-h", o.h, "profile spacing");
    app->add_option("--mu", o.mu, "weight exponent mu");
    app->add_option("--delta", o.delta, "weight exponent delta (n >= 3)");
    app->add_option("--epsilon", o.epsilon, "supersolution offset");
    app->add_option("--h-g", o.h_g, "PDE grid spacing");
    app->add_option("--r-max", o.r_max, "truncation radius");
    app->add_option("--tol", o.tol, "nonlinear tolerance");
    app->add_option("--linear-tol", o.linear_tol, "relative linear tolerance");
    app->add_option("--max-iter", o.max_iter, "nonlinear iteration cap");
    app->add_option("--method", o.method, "newton | picard");
    app->add_option("--formulation", o.formulation, "direct | corrected");
    app->add_option("--width", o.width, "partition transition width");
    app->add_option("--core-radius", o.core_radius, "partition reach past each bisector");
    app->add_option("--geodesic", o.geodesics, "THETA1,THETA2[,flip] in degrees; repeatable, replaces the list");
    app->add_option("--separations", o.separations, "sweep separations D")->delimiter(',');
    app->add_flag("--no-eigenvalue", o.no_eigenvalue, "skip the 2D eigenvalue");
    app->add_flag("--no-cross-check", o.no_cross_check, "sweep: skip the second nonlinear method");
}

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw hypac::InvalidArgument("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// Applies flag overrides on the raw JSON so validation sees the final document.
std::string merged_config(const Overrides& o) {
    json doc = json::object();
    if (!o.config_path.empty()) {
        try {
            doc = json::parse(read_file(o.config_path));
        } catch (const json::parse_error& e) {
            throw hypac::ParseError(o.config_path + ": " + e.what());
        }
        if (!doc.is_object()) return doc.dump();
    }
    auto set = [&](std::initializer_list<const char*> path, const json& v) {
        json* node = &doc;
        auto it = path.begin();
        for (std::size_t i = 0; i + 1 < path.size(); ++i, ++it) {
            if (!node->contains(*it) || !(*node)[*it].is_object()) (*node)[*it] = json::object();
            node = &(*node)[*it];
        }
        (*node)[*it] = v;
    };
    if (!o.output_dir.empty()) set({"output_dir"}, o.output_dir);
    if (o.seed) set({"seed"}, *o.seed);
    if (o.threads) set({"threads"}, *o.threads);
    if (o.n) set({"n"}, *o.n);
    if (o.potential) set({"potential", "kind"}, *o.potential);
    if (o.potential_epsilon) set({"potential", "epsilon"}, *o.potential_epsilon);
    if (o.T) set({"profile", "T"}, *o.T);
    if (o.h) set({"profile", "h"}, *o.h);
    if (o.mu) set({"weights", "mu"}, *o.mu);
    if (o.delta) set({"weights", "delta"}, *o.delta);
    if (o.epsilon) set({"supersolution", "epsilon"}, *o.epsilon);
    if (o.h_g) set({"grid", "h_g"}, *o.h_g);
    if (o.r_max) set({"grid", "r_max"}, *o.r_max);
    if (o.tol) set({"solver", "tol"}, *o.tol);
    if (o.linear_tol) set({"solver", "linear_tol"}, *o.linear_tol);
    if (o.max_iter) set({"solver", "max_iter"}, *o.max_iter);
    if (o.method) set({"solver", "method"}, *o.method);
    if (o.formulation) set({"solver", "formulation"}, *o.formulation);
    if (o.no_eigenvalue) set({"solver", "eigenvalue"}, false);
    if (o.width) set({"partition", "width"}, *o.width);
    if (o.core_radius) set({"partition", "core_radius"}, *o.core_radius);
    if (!o.separations.empty()) set({"sweep", "separations"}, o.separations);
    if (o.no_cross_check) set({"sweep", "cross_check"}, false);
    if (!o.geodesics.empty()) {
        json list = json::array();
        for (const auto& s : o.geodesics) {
            std::vector<std::string> parts;
            std::stringstream ss(s);
            for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
            if (parts.size() < 2 || parts.size() > 3 || (parts.size() == 3 && parts[2] != "flip"))
                throw hypac::ParseError("--geodesic expects THETA1,THETA2[,flip], got '" + s + "'");
            json g;
            try {
                g = {{"theta1_deg", std::stod(parts[0])}, {"theta2_deg", std::stod(parts[1])},
                     {"flip", parts.size() == 3}};
            } catch (const std::exception&) {
                throw hypac::ParseError("--geodesic angles must be numbers, got '" + s + "'");
            }
            list.push_back(g);
        }
        doc["geodesics"] = list;
    }
    return doc.dump();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multilayer Allen-Cahn solutions on the hyperbolic plane"};
    app.require_subcommand(1);
    Overrides o;
    const char* commands[][2] = {
        {"validate", "parse and check a config, echo it with defaults filled"},
        {"profile", "1D layer profile, decay fit and eigenvalue"},
        {"spectrum", "lowest eigenvalue of the 1D linearization"},
        {"glue", "label regions and sample the approximate solution"},
        {"solve", "PDE correction of the glued solution"},
        {"sweep", "two-layer solves over a list of separations"},
        {"supersolution", "1D supersolution certificate"},
    };
    for (auto& c : commands) add_flags(app.add_subcommand(c[0], c[1]), o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : hypac::ExitValidation;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    hypac::ExperimentConfig cfg;
    try {
        cfg = hypac::validate_config(merged_config(o));
    } catch (const hypac::Error& e) {
        std::cerr << hypac::failure_report(e).dump(2) << "\n";
        return hypac::ExitValidation;
    }
#ifdef _OPENMP
    omp_set_num_threads(cfg.threads);
#endif

    const hypac::RunResult res = hypac::run_command(command, cfg);
    if (command == "validate" && res.exit_code == 0) std::cout << hypac::serialize_config(cfg);
    else std::cout << res.summary.dump(2) << "\n";
    return res.exit_code;
}
