// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Heavy studies go through run_command so the shipped pipeline is what gets
// accepted; the cheap ones call the library directly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "hypac/experiments.hpp"
#include "hypac/pdesolve.hpp"
#include "hypac/profile.hpp"
#include "../support.hpp"

using namespace hypac;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    // records a sub-check; a failing one is flagged in the detail line
    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += ok ? what : "[x] " + what;
    }
};

std::string fmt(double v, const char* spec = "%.4g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path work_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "hypac_acceptance" / name;
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

const DoubleWellPotential quartic = DoubleWellPotential::quartic();

ExperimentConfig single_layer_config() {
    ExperimentConfig c;
    c.geodesics = {{0.0, 180.0, false}};
    c.grid = {1.0 / 512, 0.995};
    c.solver.method = "newton";
    c.solver.formulation = "direct";
    return c;
}

ExperimentConfig sweep_config() {
    ExperimentConfig c;
    c.geodesics = {{-30.0, 30.0, false}, {150.0, 210.0, false}};
    c.grid = {1.0 / 1024, 0.9985};
    c.solver.method = "newton";
    c.solver.formulation = "corrected";
    c.sweep.separations = {6.0, 8.0, 10.0};
    c.sweep.cross_check = true;
    return c;
}

// shared between criteria 6-8
nlohmann::json single_layer_report, sweep_summary;

Outcome criterion1() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const Profile p = solve_profile(quartic, 2, 12.0, 0.005, 1e-10);
    const auto rates = spectral_rates(quartic, 2);
    const auto d = estimate_decay(p, rates);
    const double secs = seconds_since(t0);
    double min_slope = INFINITY;
    for (int i = 1; i < p.grid().M; ++i) min_slope = std::min(min_slope, p.derivatives()[i]);
    o.check(p.max_residual() <= 1e-10, "residual " + fmt(p.max_residual()) + " <= 1e-10");
    o.check(min_slope > 0.0, "min U0' " + fmt(min_slope) + " > 0");
    o.check(std::abs(d.beta_hat_plus / 2.0 - 1.0) <= 0.05, "beta+ " + fmt(d.beta_hat_plus, "%.5f") + " vs 2");
    o.check(std::abs(d.beta_hat_minus / 2.0 - 1.0) <= 0.05, "beta- " + fmt(d.beta_hat_minus, "%.5f") + " vs 2");
    o.check(secs < 5.0, "time " + fmt(secs, "%.2f") + " s < 5 s");
    return o;
}

Outcome criterion2() {
    Outcome o;
    const Profile p = solve_profile(quartic, 3, 12.0, 0.005, 1e-10);
    const auto d = estimate_decay(p, spectral_rates(quartic, 3));
    const double exact = 1.0 + std::sqrt(3.0);
    const double worst = std::max(std::abs(d.beta_hat_plus / exact - 1), std::abs(d.beta_hat_minus / exact - 1));
    o.check(worst <= 0.05, "n=3 rates " + fmt(d.beta_hat_plus, "%.5f") + ", " + fmt(d.beta_hat_minus, "%.5f") +
                               " vs " + fmt(exact, "%.5f"));
    std::mt19937_64 rng(2);
    int held = 0, total = 0;
    for (int k = 0; k < 5; ++k) {
        const DoubleWellPotential pot = testsupport::random_potential(rng);
        validate_potential(pot);
        for (int n = 2; n <= 6; ++n, ++total) held += spectral_rates(pot, n).beta > n - 1;
    }
    o.check(held == total, "beta > n-1 in " + std::to_string(held) + "/" + std::to_string(total) + " cases");
    return o;
}

Outcome criterion3() {
    Outcome o;
    for (int n : {2, 3, 4}) {
        const Profile p12 = solve_profile(quartic, n, 12.0, 0.005, 1e-10);
        const Profile p10 = solve_profile(quartic, n, 10.0, 0.005, 1e-10);
        const double l12 = lowest_eigenvalue_1d(p12).eigenvalue;
        const double l10 = lowest_eigenvalue_1d(p10).eigenvalue;
        const double shift = lowest_eigenvalue_1d(p12, 0.5).eigenvalue - l12 - 0.5;
        const std::string tag = "n=" + std::to_string(n) + ": ";
        o.check(l12 > 0.0, tag + "lambda " + fmt(l12, "%.7f") + " > 0");
        o.check(std::abs(l12 - l10) < 1e-6, tag + "|T10-T12| " + fmt(std::abs(l12 - l10)));
        o.check(std::abs(shift) <= 1e-10, tag + "shift err " + fmt(std::abs(shift)));
    }
    return o;
}

Outcome criterion4() {
    Outcome o;
    const Profile p2 = solve_profile(quartic, 2, 12.0, 0.005, 1e-10);
    const auto r2 = spectral_rates(quartic, 2);
    const auto ok2 = check_supersolution(p2, r2, 1.0, 0.0, 0.02);
    o.check(ok2.passed && ok2.certified_bound < 0.0, "n=2 mu=1 bound " + fmt(ok2.certified_bound));
    const Profile p3 = solve_profile(quartic, 3, 12.0, 0.005, 1e-10);
    const auto ok3 = check_supersolution(p3, spectral_rates(quartic, 3), 1.0, 0.25, 0.02);
    o.check(ok3.passed && ok3.certified_bound < 0.0, "n=3 delta=0.25 bound " + fmt(ok3.certified_bound));
    std::string failure = "no failure";
    try {
        check_supersolution(p2, r2, 2.5, 0.0, 0.02);
    } catch (const SupersolutionViolation& e) {
        failure = e.report().worst_region;
    }
    o.check(failure == "tail", "mu=2.5 fails in " + failure);
    return o;
}

Outcome criterion5() {
    Outcome o;
    std::mt19937_64 rng(5);
    int configs = 0, label_mismatch = 0, adjacency_bad = 0, not_bipartite = 0;
    double worst_sum = 0.0, worst_grad = 0.0;
    while (configs < 200) {
        const auto gs = testsupport::random_configuration(rng, 8);
        const LabeledConfiguration cfg = label_regions(gs);
        // the partition needs D_H >= 3; closer configurations are redrawn
        if (cfg.min_separation() < 3.0) continue;
        ++configs;
        const auto brute = testsupport::brute_colouring(gs, cfg.base_angle());
        not_bipartite += !brute.bipartite;
        for (std::size_t j = 0; j < gs.size(); ++j) {
            const auto [a, b] = cfg.adjacency()[j];
            adjacency_bad += cfg.regions()[a].label != -cfg.regions()[b].label;
        }
        const Partition part(cfg);
        for (int s = 0; s < 10000; ++s) {
            const DiskPoint p = testsupport::random_disk_point(rng, 8);
            double sum = 0.0;
            for (double c : part.weights(p)) sum += c;
            worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
            if (s % 10 == 0) {
                const auto it = brute.colour.find(testsupport::side_vector(gs, p));
                label_mismatch += it == brute.colour.end() || it->second != cfg.label_at(p);
                const double lam = conformal_factor(p), e = 1e-6 / lam;
                const double gx = (weight_tau(cfg, {p.x + e, p.y}) - weight_tau(cfg, {p.x - e, p.y})) / (2 * e);
                const double gy = (weight_tau(cfg, {p.x, p.y + e}) - weight_tau(cfg, {p.x, p.y - e})) / (2 * e);
                worst_grad = std::max(worst_grad, std::hypot(gx, gy) / lam);
            }
        }
    }
    o.check(not_bipartite == 0 && label_mismatch == 0,
            "labels vs brute force: " + std::to_string(label_mismatch) + " mismatches");
    o.check(adjacency_bad == 0, "adjacent labels opposite");
    o.check(worst_sum <= 1e-12, "max |sum chi - 1| " + fmt(worst_sum));
    o.check(worst_grad <= 1.05, "max |grad tau| " + fmt(worst_grad, "%.5f"));
    return o;
}

Outcome criterion6() {
    Outcome o;
    ExperimentConfig cfg = single_layer_config();
    cfg.output_dir = work_dir("single_layer").string();
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult r = run_command("solve", cfg);
    const double secs = seconds_since(t0);
    single_layer_report = r.summary;
    o.check(r.exit_code == ExitSuccess, "exit " + std::to_string(r.exit_code));
    if (!r.summary.contains("iterations")) return o;
    const int it = r.summary["iterations"];
    const double err = r.summary["sup_error_vs_profile"];
    const double dev = r.summary["nodal"]["max_euclidean"];
    o.check(r.summary["converged"] == true && it <= 3, "Newton iterations " + std::to_string(it));
    o.check(err <= 5e-4, "sup |u - U0(t)| " + fmt(err) + " <= 5e-4");
    o.check(dev <= 2 * cfg.grid.h_g, "nodal Euclidean " + fmt(dev) + " <= 2 h_g");
    o.check(secs < 120.0, "time " + fmt(secs, "%.1f") + " s");
    return o;
}

Outcome criterion7() {
    Outcome o;
    ExperimentConfig cfg = sweep_config();
    cfg.output_dir = work_dir("sweep").string();
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult r = run_command("sweep", cfg);
    const double secs = seconds_since(t0);
    sweep_summary = r.summary;
    o.check(r.exit_code == ExitSuccess, "exit " + std::to_string(r.exit_code));
    if (!r.summary.contains("rows")) return o;
    const auto& rows = r.summary["rows"];
    bool all_ok = rows.size() == cfg.sweep.separations.size();
    for (const auto& row : rows) all_ok = all_ok && row["status"] == "ok";
    o.check(all_ok, "all separations converged");
    if (!all_ok) return o;
    auto decreasing = [&](const char* key) {
        std::string vals;
        bool dec = true;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            vals += (k ? " > " : "") + fmt(rows[k][key].get<double>(), "%.3g");
            if (k) dec = dec && rows[k][key].get<double>() < rows[k - 1][key].get<double>();
        }
        o.check(dec, std::string(key) + " " + vals);
    };
    decreasing("sup_gH");
    decreasing("v_inf");
    decreasing("nodal_deviation");
    const double sg = r.summary["slope_sup_gH"], sv = r.summary["slope_v_inf"];
    const double target = r.summary["slope_target"];
    o.check(sg <= target, "slope sup g_H " + fmt(sg, "%.4f") + " <= " + fmt(target, "%.2f"));
    o.check(sv <= target, "slope |v| " + fmt(sv, "%.4f") + " <= " + fmt(target, "%.2f"));
    double worst = 0.0;
    for (const auto& row : rows) worst = std::max(worst, row["picard_newton_diff"].get<double>());
    o.check(worst <= 10 * cfg.solver.tol, "Picard vs Newton " + fmt(worst) + " <= 10 tol");
    o.check(secs < 900.0, "time " + fmt(secs, "%.1f") + " s");
    return o;
}

Outcome criterion8() {
    Outcome o;
    const double lam1d = lowest_eigenvalue_1d(solve_profile(quartic, 2, 12.0, 0.005, 1e-10)).eigenvalue;
    if (single_layer_report.contains("lowest_eigenvalue")) {
        const double lam = single_layer_report["lowest_eigenvalue"];
        o.check(lam > 0.0, "single layer " + fmt(lam, "%.5f") + " > 0");
        o.check(std::abs(lam / lam1d - 1.0) <= 0.10,
                "vs 1D " + fmt(lam1d, "%.5f") + " (" + fmt(100 * (lam / lam1d - 1), "%+.1f") + "%)");
    } else {
        o.check(false, "single-layer eigenvalue missing");
    }
    if (sweep_summary.contains("rows") && !sweep_summary["rows"].empty()) {
        for (const auto& row : sweep_summary["rows"]) {
            const bool ok = row["eigenvalue"].is_number() && row["eigenvalue"].get<double>() > 0.0;
            o.check(ok, "D=" + fmt(row["D"].get<double>(), "%g") + " " +
                            (row["eigenvalue"].is_number() ? fmt(row["eigenvalue"].get<double>(), "%.5f") : "n/a"));
        }
    } else {
        o.check(false, "sweep eigenvalues missing");
    }
    return o;
}

// sup |u - U0(s t)| over active cells, overall and on |x| <= 0.9
std::pair<double, double> single_layer_error(double h_g, const Profile& prof) {
    auto g = std::make_shared<const DiskGrid>(h_g, 0.995);
    const auto lab = label_regions({Geodesic(0.0, pi)});
    const auto approx = approximate_solution(lab, {}, prof);
    const auto sol = newton_solve(assemble_problem(approx, g, Formulation::Direct), {});
    const Geodesic& g0 = lab.geodesics()[0];
    double all = 0.0, inner = 0.0;
    for (int k : g->active()) {
        const DiskPoint p = g->center(k);
        const double e = std::abs(sol.u[k] - prof.value(lab.orientation()[0] * signed_distance(p, g0)));
        all = std::max(all, e);
        if (p.norm_sq() <= 0.81) inner = std::max(inner, e);
    }
    return {all, inner};
}

Outcome criterion9() {
    Outcome o;
    const Profile prof = solve_profile(quartic, 2, 12.0, 0.005, 1e-10);
    const auto [a1, i1] = single_layer_error(1.0 / 256, prof);
    const auto [a2, i2] = single_layer_error(1.0 / 512, prof);
    const double inner_order = std::log2(i1 / i2), full_order = std::log2(a1 / a2);
    o.check(inner_order >= 1.7, "order on |x|<=0.9: " + fmt(inner_order, "%.3f") + " (" + fmt(i1) + " -> " +
                                    fmt(i2) + ")");
    // informational only: near r_max the grid is still pre-asymptotic
    o.detail += "; full-domain order " + fmt(full_order, "%.3f") + " (" + fmt(a1) + " -> " + fmt(a2) + ")";
    return o;
}

Outcome criterion10() {
    Outcome o;
    ExperimentConfig base = single_layer_config();
    const std::vector<std::pair<std::string, ExperimentConfig>> runs = [&] {
        ExperimentConfig glue = base, sweep = sweep_config();
        glue.geodesics = {{-20.0, 20.0, false}, {160.0, 200.0, false}, {80.0, 100.0, true}};
        glue.grid = {1.0 / 256, 0.99};
        glue.seed = 7;
        sweep.grid = {1.0 / 128, 0.99};
        sweep.sweep.separations = {2.0, 4.0, 5.0};
        return std::vector<std::pair<std::string, ExperimentConfig>>{
            {"profile", base}, {"glue", glue}, {"solve", base}, {"sweep", sweep}};
    }();
    int files = 0, differing = 0;
    for (auto [cmd, cfg] : runs) {
        cfg.threads = 1;
        cfg.output_dir = work_dir("repro_" + cmd).string();
        const RunResult a = run_command(cmd, cfg);
        std::map<std::string, std::string> first;
        for (const auto& f : a.outputs) first[f] = slurp(fs::path(cfg.output_dir) / f);
        const RunResult b = run_command(cmd, cfg);
        bool same = a.outputs == b.outputs && a.exit_code == b.exit_code;
        for (const auto& f : b.outputs) {
            ++files;
            const bool eq = first.count(f) && first[f] == slurp(fs::path(cfg.output_dir) / f);
            differing += !eq;
            same = same && eq;
        }
        o.check(same, cmd + " (exit " + std::to_string(a.exit_code) + ", " + std::to_string(a.outputs.size()) +
                          " files)");
    }
    o.detail += "; " + std::to_string(files - differing) + "/" + std::to_string(files) + " files identical";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                         criterion5, criterion6, criterion7, criterion8,
                                                         criterion9, criterion10};
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("threw: ") + e.what();
        }
        failed += !o.pass;
        std::printf("criterion %2zu: %s  %s\n", k + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
