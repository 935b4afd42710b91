#include "doctest.h"

#include <cmath>
#include <map>
#include <tuple>

#include <Eigen/Dense>

#include "hypac/error.hpp"
#include "hypac/profile.hpp"

using namespace hypac;

namespace {

const Profile& quartic_profile(int n, double T = 12.0, double h = 0.005) {
    static std::map<std::tuple<int, double, double>, Profile> cache;
    auto key = std::make_tuple(n, T, h);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, solve_profile(DoubleWellPotential::quartic(), n, T, h, 1e-10)).first;
    return it->second;
}

// Bottom of -b'' + [f'(U) + m^2 tanh^2 + m sech^2] b, m = (n-1)/2, the
// symmetrized linearization, by a tridiagonal eigen-solve on the profile grid.
double tridiagonal_bottom(const Profile& prof) {
    const auto& g = prof.grid();
    const int m = g.M - 1;
    const double h = g.h, mm = 0.5 * (prof.dimension() - 1);
    Eigen::VectorXd diag(m), sub(m - 1);
    for (int k = 0; k < m; ++k) {
        const double t = g.t(k + 1), th = std::tanh(t), sech = 1.0 / std::cosh(t);
        diag[k] = 2.0 / (h * h) + prof.potential().fprime(prof.values()[k + 1]) + mm * mm * th * th + mm * sech * sech;
        if (k + 1 < m) sub[k] = -1.0 / (h * h);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

}  // namespace

TEST_CASE("two-dimensional quartic profile is tanh") {
    const Profile& p = quartic_profile(2);
    double err = 0.0;
    for (int i = 0; i < p.grid().size(); ++i) err = std::max(err, std::abs(p.values()[i] - std::tanh(p.grid().t(i))));
    CHECK(err < 1e-5);
    CHECK(p.max_residual() <= 1e-10);
    CHECK(p.value(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.derivative(0.0) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(p.value(0.73) == doctest::Approx(std::tanh(0.73)).epsilon(1e-5));
    CHECK(p.second_derivative(0.5) ==
          doctest::Approx(-2 * std::tanh(0.5) / std::pow(std::cosh(0.5), 2)).epsilon(1e-4));

    // second order in h
    const auto profile_error = [](double h) {
        const Profile q = solve_profile(DoubleWellPotential::quartic(), 2, 12.0, h, 1e-12);
        double e = 0.0;
        for (int i = 0; i < q.grid().size(); ++i) e = std::max(e, std::abs(q.values()[i] - std::tanh(q.grid().t(i))));
        return e;
    };
    const double order = std::log2(profile_error(0.04) / profile_error(0.02));
    CHECK(order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("profile is odd and increasing for the symmetric potential") {
    for (int n : {2, 3, 4}) {
        const Profile& p = quartic_profile(n);
        const int M = p.grid().M;
        for (int i = 0; i <= M; ++i) CHECK(p.values()[i] == doctest::Approx(-p.values()[M - i]).epsilon(1e-10));
        // at n = 4 the tails reach +-1 to machine precision, where U' rounds to 0
        for (int i = 1; i < M; ++i) {
            REQUIRE(p.derivatives()[i] >= 0.0);
            if (n < 4 || 1.0 - std::abs(p.values()[i]) > 1e-12) REQUIRE(p.derivatives()[i] > 0.0);
        }
        CHECK(p.values().front() == -1.0);
        CHECK(p.values().back() == 1.0);
    }
}

TEST_CASE("discrete residual is recomputed consistently") {
    const Profile& p = quartic_profile(3);
    const auto r = profile_residual(p.grid(), 3, p.potential(), p.values());
    double m = 0.0;
    for (double x : r) m = std::max(m, std::abs(x));
    CHECK(m <= 1e-10);
    CHECK(m == doctest::Approx(p.max_residual()).epsilon(1e-6));
}

TEST_CASE("decay rates") {
    {
        const Profile& p = quartic_profile(2);
        const auto d = estimate_decay(p, spectral_rates(p.potential(), 2));
        CHECK(d.beta_hat_plus == doctest::Approx(2.0).epsilon(0.05));
        CHECK(d.beta_hat_minus == doctest::Approx(2.0).epsilon(0.05));
        // 1 - tanh t ~ 2 e^{-2t}
        CHECK(d.c_hat_plus == doctest::Approx(2.0).epsilon(0.1));
    }
    {
        const Profile& p = quartic_profile(3);
        const auto d = estimate_decay(p, spectral_rates(p.potential(), 3));
        CHECK(d.beta_hat_plus == doctest::Approx(1.0 + std::sqrt(3.0)).epsilon(0.05));
        CHECK(d.beta_hat_minus == doctest::Approx(1.0 + std::sqrt(3.0)).epsilon(0.05));
    }
}

TEST_CASE("asymmetric potential has different tail rates") {
    const double e = 0.2;
    const auto pot = DoubleWellPotential::polynomial({0.25, e / 4, -0.5, -e / 2, 0.25, e / 4});
    const Profile p = solve_profile(pot, 2, 12.0, 0.005, 1e-10);
    const auto r = spectral_rates(pot, 2);
    const auto d = estimate_decay(p, r);
    CHECK(d.beta_hat_plus == doctest::Approx(r.beta_plus).epsilon(0.05));
    CHECK(d.beta_hat_minus == doctest::Approx(r.beta_minus).epsilon(0.05));
    CHECK(d.beta_hat_plus > d.beta_hat_minus);
}

TEST_CASE("lowest 1D eigenvalue") {
    const Profile& p2 = quartic_profile(2);
    const auto e2 = lowest_eigenvalue_1d(p2);
    // exact ground state for the sech^2 well about tanh t
    CHECK(e2.eigenvalue == doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-6));
    for (int n : {2, 3, 4}) {
        const Profile& p = quartic_profile(n);
        const double lam = lowest_eigenvalue_1d(p).eigenvalue;
        CHECK(lam > 0.0);
        CHECK(lam == doctest::Approx(tridiagonal_bottom(p)).epsilon(1e-5));
        const double lam10 = lowest_eigenvalue_1d(quartic_profile(n, 10.0)).eigenvalue;
        CHECK(std::abs(lam - lam10) < 1e-6);
        const double shifted = lowest_eigenvalue_1d(p, 0.37).eigenvalue;
        CHECK(std::abs(shifted - lam - 0.37) < 1e-10);
    }
}

TEST_CASE("radial weight phi_delta") {
    // on H^3 (n = 4) the solution is sinh((1 - delta) r) / ((1 - delta) sinh r)
    const double delta = 0.4, k = 1.0 - delta;
    const auto s = compute_phi_delta(4, delta, 10.0, 0.01);
    double err = 0.0;
    for (std::size_t i = 1; i < s.r.size(); ++i) {
        const double r = s.r[i];
        const double exact = std::sinh(k * r) / (k * std::sinh(r));
        err = std::max(err, std::abs(s.phi[i] - exact) / exact);
    }
    CHECK(err < 1e-8);
    CHECK(s.phi[0] == 1.0);

    // n = 3 decays like e^{-delta r}
    const auto t = compute_phi_delta(3, 0.25, 60.0, 0.01);
    const double slope = (std::log(t.phi.back()) - std::log(t.phi[t.phi.size() - 1001])) / 10.0;
    CHECK(slope == doctest::Approx(-0.25).epsilon(0.01));
    for (double v : t.phi) REQUIRE(v > 0.0);

    CHECK_THROWS_AS(compute_phi_delta(3, 0.6, 10.0, 0.01), ExponentOutOfRange);
    CHECK_THROWS_AS(compute_phi_delta(2, 0.1, 10.0, 0.01), InvalidArgument);

    CHECK(weight_rho(2, 5.0) == 1.0);
    CHECK(weight_rho(3, 0.0) == 1.0);
    CHECK(std::log(weight_rho(3, 40.0)) / -40.0 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("supersolution certificates") {
    const Profile& p2 = quartic_profile(2);
    const auto r2 = spectral_rates(p2.potential(), 2);
    const auto ok = check_supersolution(p2, r2, 1.0, 0.0, 0.02);
    CHECK(ok.passed);
    CHECK(ok.certified_bound < 0.0);
    CHECK(ok.A1 > 0.0);
    CHECK(ok.A1_prime >= ok.A1);

    bool threw = false;
    try {
        check_supersolution(p2, r2, 2.5, 0.0, 0.02);
    } catch (const SupersolutionViolation& e) {
        threw = true;
        CHECK(e.report().worst_region == "tail");
        CHECK(e.report().certified_bound >= 0.0);
    }
    CHECK(threw);

    const Profile& p3 = quartic_profile(3);
    const auto r3 = check_supersolution(p3, spectral_rates(p3.potential(), 3), 1.0, 0.25, 0.02);
    CHECK(r3.passed);
    CHECK(r3.certified_bound < 0.0);
}

TEST_CASE("invalid profile requests") {
    const auto q = DoubleWellPotential::quartic();
    CHECK_THROWS_AS(solve_profile(q, 2, -1.0, 0.01, 1e-10), InvalidArgument);
    CHECK_THROWS_AS(solve_profile(q, 2, 12.0, 0.0, 1e-10), InvalidArgument);
    CHECK_THROWS_AS(solve_profile(q, 2, 0.01, 0.005, 1e-10), InvalidArgument);
}
