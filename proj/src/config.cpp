#include "hypac/config.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace hypac {

using nlohmann::json;

ConstraintViolation::ConstraintViolation(std::vector<Violation> violations)
    : Error("ConstraintViolation",
            [&] {
                std::ostringstream os;
                os << violations.size() << " violation(s)";
                for (const auto& v : violations)
                    os << "; " << v.path << ": " << v.constraint << " (found " << v.found << ")";
                return os.str();
            }()),
      violations_(std::move(violations)) {}

DoubleWellPotential PotentialSpec::build() const {
    if (kind == "quartic") return DoubleWellPotential::quartic();
    if (kind == "asymmetric") {
        // (1 - u^2)^2 (1 + eps u) / 4 expanded in ascending powers
        const double e = epsilon;
        return DoubleWellPotential::polynomial({0.25, 0.25 * e, -0.5, -0.5 * e, 0.25, 0.25 * e});
    }
    if (kind == "polynomial") return DoubleWellPotential::polynomial(coefficients);
    throw InvalidArgument("unknown potential kind '" + kind + "'");
}

std::vector<Geodesic> ExperimentConfig::build_geodesics() const {
    std::vector<Geodesic> out;
    for (const auto& g : geodesics) out.push_back(g.build());
    return out;
}

// ---------------------------------------------------------------------------
// serialization

json to_json(const ExperimentConfig& c) {
    json pot{{"kind", c.potential.kind}};
    if (c.potential.kind == "asymmetric") pot["epsilon"] = c.potential.epsilon;
    if (c.potential.kind == "polynomial") pot["coefficients"] = c.potential.coefficients;
    json geos = json::array();
    for (const auto& g : c.geodesics)
        geos.push_back({{"theta1_deg", g.theta1_deg}, {"theta2_deg", g.theta2_deg}, {"flip", g.flip}});
    return json{
        {"potential", pot},
        {"n", c.n},
        {"profile", {{"T", c.profile.T}, {"h", c.profile.h}, {"tol", c.profile.tol}}},
        {"geodesics", geos},
        {"grid", {{"h_g", c.grid.h_g}, {"r_max", c.grid.r_max}}},
        {"solver",
         {{"method", c.solver.method},
          {"tol", c.solver.tol},
          {"max_iter", c.solver.max_iter},
          {"linear_tol", c.solver.linear_tol},
          {"formulation", c.solver.formulation},
          {"eigenvalue", c.solver.eigenvalue}}},
        {"weights", {{"mu", c.weights.mu}, {"delta", c.weights.delta}}},
        {"partition", {{"width", c.partition.width}, {"core_radius", c.partition.core_radius}}},
        {"supersolution",
         {{"epsilon", c.supersolution.epsilon}, {"r_max", c.supersolution.r_max}, {"h_r", c.supersolution.h_r}}},
        {"sweep", {{"separations", c.sweep.separations}, {"cross_check", c.sweep.cross_check}}},
        {"output_dir", c.output_dir},
        {"seed", c.seed},
        {"threads", c.threads},
    };
}

std::string serialize_config(const ExperimentConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// parsing

namespace {

class Reader {
public:
    explicit Reader(std::vector<Violation>& out) : out_(out) {}

    // Reads obj[key] into `target` if present; records type errors.
    template <class T>
    void get(const json& obj, const std::string& path, const char* key, T& target) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        const std::string p = path.empty() ? key : path + "." + key;
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw json::type_error::create(302, "expected a boolean", &v);
            } else if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer()) throw json::type_error::create(302, "expected an integer", &v);
                if constexpr (std::is_unsigned_v<T>)
                    if (v.is_number_integer() && !v.is_number_unsigned())
                        throw json::type_error::create(302, "expected a non-negative integer", &v);
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!v.is_number()) throw json::type_error::create(302, "expected a number", &v);
            }
            target = v.get<T>();
        } catch (const json::exception& e) {
            out_.push_back({p, "wrong type", v.dump()});
        }
    }

    void known(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
        if (!obj.is_object()) {
            out_.push_back({path.empty() ? "<root>" : path, "must be an object", obj.dump()});
            return;
        }
        for (const auto& [k, v] : obj.items()) {
            bool ok = false;
            for (const char* key : keys) ok = ok || k == key;
            if (!ok) out_.push_back({path.empty() ? k : path + "." + k, "unknown field", v.dump()});
        }
    }

private:
    std::vector<Violation>& out_;
};

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::vector<Violation> check_config(const ExperimentConfig& c) {
    std::vector<Violation> out;
    auto bad = [&](std::string path, std::string constraint, std::string found) {
        out.push_back({std::move(path), std::move(constraint), std::move(found)});
    };

    bool potential_ok = false;
    SpectralRates rates;
    if (c.potential.kind != "quartic" && c.potential.kind != "asymmetric" && c.potential.kind != "polynomial") {
        bad("potential.kind", "one of quartic, asymmetric, polynomial", c.potential.kind);
    } else if (c.potential.kind == "asymmetric" && !(std::abs(c.potential.epsilon) < 1.0)) {
        bad("potential.epsilon", "|epsilon| < 1", num(c.potential.epsilon));
    } else if (c.potential.kind == "polynomial" && c.potential.coefficients.size() < 3) {
        bad("potential.coefficients", "at least three coefficients", std::to_string(c.potential.coefficients.size()));
    } else {
        try {
            const DoubleWellPotential p = c.potential.build();
            validate_potential(p);
            potential_ok = true;
        } catch (const Error& e) {
            bad("potential", "valid double-well potential", e.what());
        }
    }

    if (c.n < 2 || c.n > 10) bad("n", "2 <= n <= 10", std::to_string(c.n));
    if (potential_ok && c.n >= 2) rates = spectral_rates(c.potential.build(), c.n);

    if (!(c.profile.h > 0.0)) bad("profile.h", "h > 0", num(c.profile.h));
    if (!(c.profile.tol > 0.0)) bad("profile.tol", "tol > 0", num(c.profile.tol));
    if (!(c.profile.T > 0.0)) {
        bad("profile.T", "T > 0", num(c.profile.T));
    } else if (rates.beta > 0.0 && c.profile.T < 8.0 / rates.beta) {
        bad("profile.T", "T >= 8 / beta = " + num(8.0 / rates.beta), num(c.profile.T));
    }

    if (c.geodesics.empty()) bad("geodesics", "at least one geodesic", "[]");
    std::vector<std::optional<Geodesic>> built;
    for (std::size_t i = 0; i < c.geodesics.size(); ++i) {
        const auto& g = c.geodesics[i];
        const std::string p = "geodesics[" + std::to_string(i) + "]";
        try {
            built.emplace_back(g.build());
        } catch (const Error& e) {
            bad(p, "distinct finite endpoints", num(g.theta1_deg) + ", " + num(g.theta2_deg));
            built.emplace_back(std::nullopt);
        }
    }
    for (std::size_t i = 0; i < built.size(); ++i)
        for (std::size_t j = i + 1; j < built.size(); ++j) {
            if (!built[i] || !built[j]) continue;
            const std::string p = "geodesics[" + std::to_string(i) + "], geodesics[" + std::to_string(j) + "]";
            try {
                if (!geodesics_disjoint(*built[i], *built[j])) bad(p, "pairwise disjoint geodesics", "intersecting pair");
            } catch (const Error&) {
                bad(p, "no shared ideal endpoint", "shared endpoint");
            }
        }

    const double cells = 2.0 / c.grid.h_g;
    if (!(c.grid.h_g > 0.0) || std::abs(cells - std::round(cells)) > 1e-9 * cells ||
        static_cast<long>(std::round(cells)) % 2 != 0)
        bad("grid.h_g", "2 / h_g an even integer", num(c.grid.h_g));
    if (!(c.grid.r_max > 0.0 && c.grid.r_max < 1.0)) bad("grid.r_max", "0 < r_max < 1", num(c.grid.r_max));
    else if (c.grid.h_g > 0.0 && !(c.grid.r_max + c.grid.h_g < 1.0))
        bad("grid.r_max", "r_max + h_g < 1", num(c.grid.r_max));

    if (c.solver.method != "newton" && c.solver.method != "picard")
        bad("solver.method", "newton or picard", c.solver.method);
    if (c.solver.formulation != "direct" && c.solver.formulation != "corrected")
        bad("solver.formulation", "direct or corrected", c.solver.formulation);
    if (!(c.solver.tol > 0.0)) bad("solver.tol", "tol > 0", num(c.solver.tol));
    if (!(c.solver.linear_tol > 0.0 && c.solver.linear_tol < 1.0))
        bad("solver.linear_tol", "0 < linear_tol < 1", num(c.solver.linear_tol));
    if (c.solver.max_iter < 1) bad("solver.max_iter", "max_iter >= 1", std::to_string(c.solver.max_iter));

    if (!(c.weights.mu > 0.0)) bad("weights.mu", "mu > 0", num(c.weights.mu));
    else if (rates.beta > 0.0 && !(c.weights.mu < rates.beta))
        bad("weights.mu", "mu < beta = " + num(rates.beta), num(c.weights.mu));
    if (c.n >= 3 && !(c.weights.delta > 0.0 && c.weights.delta < 0.5 * (c.n - 2)))
        bad("weights.delta", "0 < delta < (n - 2) / 2", num(c.weights.delta));
    if (c.n == 2 && !(c.weights.delta >= 0.0)) bad("weights.delta", "delta >= 0", num(c.weights.delta));

    if (!(c.partition.width > 0.0)) bad("partition.width", "width > 0", num(c.partition.width));
    if (!(c.partition.core_radius > 0.0)) bad("partition.core_radius", "core_radius > 0", num(c.partition.core_radius));

    if (!(c.supersolution.epsilon > 0.0)) bad("supersolution.epsilon", "epsilon > 0", num(c.supersolution.epsilon));
    if (!(c.supersolution.r_max > 0.0)) bad("supersolution.r_max", "r_max > 0", num(c.supersolution.r_max));
    if (!(c.supersolution.h_r > 0.0 && c.supersolution.h_r < c.supersolution.r_max))
        bad("supersolution.h_r", "0 < h_r < r_max", num(c.supersolution.h_r));

    if (c.sweep.separations.empty()) bad("sweep.separations", "non-empty list", "[]");
    for (std::size_t i = 0; i < c.sweep.separations.size(); ++i)
        if (!(c.sweep.separations[i] > 0.0))
            bad("sweep.separations[" + std::to_string(i) + "]", "D > 0", num(c.sweep.separations[i]));

    if (c.output_dir.empty()) bad("output_dir", "non-empty path", "\"\"");
    if (c.threads < 1) bad("threads", "threads >= 1", std::to_string(c.threads));
    return out;
}

ExperimentConfig validate_config(const std::string& raw) {
    json doc;
    try {
        doc = json::parse(raw);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    std::vector<Violation> out;
    Reader rd(out);
    ExperimentConfig c;
    rd.known(doc, "", {"potential", "n", "profile", "geodesics", "grid", "solver", "weights", "partition",
                       "supersolution", "sweep", "output_dir", "seed", "threads"});
    if (!doc.is_object()) throw ConstraintViolation(out);

    if (doc.contains("potential")) {
        const json& p = doc["potential"];
        rd.known(p, "potential", {"kind", "epsilon", "coefficients"});
        if (p.is_object()) {
            rd.get(p, "potential", "kind", c.potential.kind);
            rd.get(p, "potential", "epsilon", c.potential.epsilon);
            rd.get(p, "potential", "coefficients", c.potential.coefficients);
        }
    }
    rd.get(doc, "", "n", c.n);
    if (doc.contains("profile")) {
        const json& p = doc["profile"];
        rd.known(p, "profile", {"T", "h", "tol"});
        if (p.is_object()) {
            rd.get(p, "profile", "T", c.profile.T);
            rd.get(p, "profile", "h", c.profile.h);
            rd.get(p, "profile", "tol", c.profile.tol);
        }
    }
    if (doc.contains("geodesics")) {
        const json& gs = doc["geodesics"];
        if (!gs.is_array()) {
            out.push_back({"geodesics", "must be an array", gs.dump()});
        } else {
            c.geodesics.clear();
            for (std::size_t i = 0; i < gs.size(); ++i) {
                const std::string p = "geodesics[" + std::to_string(i) + "]";
                GeodesicSpec g;
                rd.known(gs[i], p, {"theta1_deg", "theta2_deg", "flip"});
                if (gs[i].is_object()) {
                    if (!gs[i].contains("theta1_deg") || !gs[i].contains("theta2_deg"))
                        out.push_back({p, "theta1_deg and theta2_deg are required", gs[i].dump()});
                    rd.get(gs[i], p, "theta1_deg", g.theta1_deg);
                    rd.get(gs[i], p, "theta2_deg", g.theta2_deg);
                    rd.get(gs[i], p, "flip", g.flip);
                }
                c.geodesics.push_back(g);
            }
        }
    }
    if (doc.contains("grid")) {
        const json& p = doc["grid"];
        rd.known(p, "grid", {"h_g", "r_max"});
        if (p.is_object()) {
            rd.get(p, "grid", "h_g", c.grid.h_g);
            rd.get(p, "grid", "r_max", c.grid.r_max);
        }
    }
    if (doc.contains("solver")) {
        const json& p = doc["solver"];
        rd.known(p, "solver", {"method", "tol", "max_iter", "linear_tol", "formulation", "eigenvalue"});
        if (p.is_object()) {
            rd.get(p, "solver", "method", c.solver.method);
            rd.get(p, "solver", "tol", c.solver.tol);
            rd.get(p, "solver", "max_iter", c.solver.max_iter);
            rd.get(p, "solver", "linear_tol", c.solver.linear_tol);
            rd.get(p, "solver", "formulation", c.solver.formulation);
            rd.get(p, "solver", "eigenvalue", c.solver.eigenvalue);
        }
    }
    if (doc.contains("weights")) {
        const json& p = doc["weights"];
        rd.known(p, "weights", {"mu", "delta"});
        if (p.is_object()) {
            rd.get(p, "weights", "mu", c.weights.mu);
            rd.get(p, "weights", "delta", c.weights.delta);
        }
    }
    if (doc.contains("partition")) {
        const json& p = doc["partition"];
        rd.known(p, "partition", {"width", "core_radius"});
        if (p.is_object()) {
            rd.get(p, "partition", "width", c.partition.width);
            rd.get(p, "partition", "core_radius", c.partition.core_radius);
        }
    }
    if (doc.contains("supersolution")) {
        const json& p = doc["supersolution"];
        rd.known(p, "supersolution", {"epsilon", "r_max", "h_r"});
        if (p.is_object()) {
            rd.get(p, "supersolution", "epsilon", c.supersolution.epsilon);
            rd.get(p, "supersolution", "r_max", c.supersolution.r_max);
            rd.get(p, "supersolution", "h_r", c.supersolution.h_r);
        }
    }
    if (doc.contains("sweep")) {
        const json& p = doc["sweep"];
        rd.known(p, "sweep", {"separations", "cross_check"});
        if (p.is_object()) {
            rd.get(p, "sweep", "separations", c.sweep.separations);
            rd.get(p, "sweep", "cross_check", c.sweep.cross_check);
        }
    }
    rd.get(doc, "", "output_dir", c.output_dir);
    rd.get(doc, "", "seed", c.seed);
    rd.get(doc, "", "threads", c.threads);

    if (out.empty()) out = check_config(c);
    if (!out.empty()) throw ConstraintViolation(std::move(out));
    return c;
}

}  // namespace hypac
