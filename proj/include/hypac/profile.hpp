#pragma once

#include <string>
#include <vector>

#include "hypac/error.hpp"
#include "hypac/jet.hpp"
#include "hypac/potential.hpp"

namespace hypac {

/// Uniform nodes t_i = -T + i h, i = 0..M, with M h = 2T exactly.
struct ProfileGrid {
    double T = 0.0;
    double h = 0.0;
    int M = 0;

    ProfileGrid() = default;
    /// Rounds M = 2T/h to the nearest even integer and adjusts h accordingly.
    ProfileGrid(double half_width, double spacing);

    double t(int i) const { return i == M ? T : -T + i * h; }
    int size() const { return M + 1; }
};

/// Discrete layer solution of U'' + (n-1) tanh t U' - f(U) = 0 on [-T, T]
/// with U(+-T) = +-1.
class Profile {
public:
    Profile(ProfileGrid grid, std::vector<double> U, std::vector<double> dU,
            std::vector<double> residual, int n, DoubleWellPotential potential, int newton_iterations);

    const ProfileGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return U_; }
    const std::vector<double>& derivatives() const { return dU_; }
    const std::vector<double>& residuals() const { return residual_; }
    int dimension() const { return n_; }
    const DoubleWellPotential& potential() const { return potential_; }
    int newton_iterations() const { return newton_iterations_; }
    double max_residual() const;

    /// Cubic Hermite interpolation; clamps to the wells outside [-T, T].
    double value(double t) const;
    double derivative(double t) const;
    /// From the ODE: U'' = f(U) - (n-1) tanh t U'.
    double second_derivative(double t) const;
    /// U0 applied to a jet, with U0'' supplied by the ODE.
    Jet value(const Jet& t) const;

private:
    void hermite(double t, double& u, double& du) const;

    ProfileGrid grid_;
    std::vector<double> U_, dU_, residual_;
    int n_;
    DoubleWellPotential potential_;
    int newton_iterations_;
};

struct ProfileOptions {
    int max_iterations = 100;
    bool check_monotone = true;
};

Profile solve_profile(const DoubleWellPotential& p, int n, double T, double h, double tol,
                      ProfileOptions options = {});

/// Discrete residual of the layer ODE at interior nodes (zero at the ends).
std::vector<double> profile_residual(const ProfileGrid& grid, int n, const DoubleWellPotential& p,
                                     const std::vector<double>& U);

/// Discrete L_0 = d^2/dt^2 + (n-1) tanh t d/dt - f'(U_0) applied to samples
/// (central differences; zero at the two end nodes).
std::vector<double> apply_linearized_1d(const Profile& prof, const std::vector<double>& a);

struct DecayEstimate {
    double beta_hat_plus = 0.0, beta_hat_minus = 0.0;
    double c_hat_plus = 0.0, c_hat_minus = 0.0;
    double window_lo = 0.0, window_hi = 0.0;  // in |t|
    double residual_plus = 0.0, residual_minus = 0.0;  // RMS of the log fit
    int nodes_per_side = 0;
};

/// Least-squares fit of log(1 -+ U) against |t| on |t| in [lo T, hi T].
DecayEstimate estimate_decay(const Profile& prof, const SpectralRates& rates,
                             double lo_fraction = 0.6, double hi_fraction = 0.9);

struct Eigenpair1D {
    double eigenvalue = 0.0;
    /// Interior-node samples normalized so that sum phi^2 cosh^{n-1} h = 1.
    std::vector<double> vector;
    int iterations = 0;
};

/// Bottom of the spectrum of -L_0 on L^2(cosh^{n-1} dt) with Dirichlet ends.
/// `potential_shift` is added to f'(U_0).
Eigenpair1D lowest_eigenvalue_1d(const Profile& prof, double potential_shift = 0.0,
                                 double tol = 1e-14, int max_iterations = 2000);

struct RadialSamples {
    int n = 3;
    double delta = 0.0;
    double h = 0.0;
    std::vector<double> r, phi, dphi;
};

/// Positive radial solution of phi'' + (n-2) coth r phi' + delta (n-2-delta) phi = 0,
/// phi(0) = 1, phi'(0) = 0, on r_k = k h up to R.
RadialSamples compute_phi_delta(int n, double delta, double R, double h);

/// Radial weight rho = sech r on H^{n-1} (n >= 3); the n = 2 spaces use 1.
double weight_rho(int n, double r);

struct SupersolutionOptions {
    double r_max = 20.0;
    double h_r = 0.05;
    double band_halfwidth_in_h = 2.0;
};

struct SupersolutionReport {
    int n = 2;
    double mu = 0.0, delta = 0.0, epsilon = 0.0;
    double A1 = 0.0, A1_prime = 0.0;  // pinching: A1 w <= v <= A1' w
    double tail_amplitude_minus = 0.0, tail_amplitude_plus = 0.0;  // A in A e^{-mu |t|}
    double certified_bound = 0.0;     // max of L_0 v / w outside the band
    double worst_t = 0.0, worst_r = 0.0;
    std::string worst_region;  // "core" (profile branch) or "tail" (exponential branch)
    std::vector<double> crossings;  // t values where the active branch switches
    int checked_points = 0, excluded_points = 0;
    bool passed = false;
};

class SupersolutionViolation : public Error {
public:
    explicit SupersolutionViolation(SupersolutionReport report);
    const SupersolutionReport& report() const { return report_; }

private:
    SupersolutionReport report_;
};

/// Evaluates v = phi_delta * min{U_0' + eps, A e^{-mu |t|}} (phi_delta = 1 for n = 2)
/// and discrete L_0 v on a (t, r) grid against the weight
/// w = sech(mu t) rho^delta. Throws SupersolutionViolation when L_0 v / w
/// is not strictly negative away from the branch-crossing band. A is chosen per
/// side so the exponential takes over only where it is itself a supersolution.
SupersolutionReport check_supersolution(const Profile& prof, const SpectralRates& rates, double mu,
                                        double delta, double epsilon,
                                        SupersolutionOptions options = {});

}  // namespace hypac
