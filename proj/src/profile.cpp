#include "hypac/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hypac {

namespace {

// log cosh t without overflow
double log_cosh(double t) {
    const double a = std::abs(t);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Thomas algorithm; sub[i] couples i to i-1, sup[i] couples i to i+1.
std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                                      std::vector<double> sup, std::vector<double> rhs) {
    const std::size_t m = diag.size();
    for (std::size_t i = 1; i < m; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> x(m);
    x[m - 1] = rhs[m - 1] / diag[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
    return x;
}

struct LineFit {
    double slope = 0.0, intercept = 0.0, rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ss += e * e;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

}  // namespace

ProfileGrid::ProfileGrid(double half_width, double spacing) : T(half_width) {
    if (!(half_width > 0.0) || !(spacing > 0.0))
        throw InvalidArgument("profile grid needs T > 0 and h > 0");
    M = 2 * static_cast<int>(std::lround(half_width / spacing));
    if (M < 4) throw InvalidArgument("profile grid needs at least 4 cells");
    h = 2.0 * T / M;
}

// ---------------------------------------------------------------------------
// Profile

Profile::Profile(ProfileGrid grid, std::vector<double> U, std::vector<double> dU,
                 std::vector<double> residual, int n, DoubleWellPotential potential,
                 int newton_iterations)
    : grid_(grid), U_(std::move(U)), dU_(std::move(dU)), residual_(std::move(residual)), n_(n),
      potential_(std::move(potential)), newton_iterations_(newton_iterations) {}

double Profile::max_residual() const { return max_abs(residual_); }

void Profile::hermite(double t, double& u, double& du) const {
    if (t <= -grid_.T) {
        u = -1.0;
        du = 0.0;
        return;
    }
    if (t >= grid_.T) {
        u = 1.0;
        du = 0.0;
        return;
    }
    const double h = grid_.h;
    int i = static_cast<int>(std::floor((t + grid_.T) / h));
    i = std::clamp(i, 0, grid_.M - 1);
    const double s = (t - grid_.t(i)) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    u = h00 * U_[i] + h10 * h * dU_[i] + h01 * U_[i + 1] + h11 * h * dU_[i + 1];
    const double d00 = 6 * s2 - 6 * s, d10 = 3 * s2 - 4 * s + 1;
    const double d01 = -6 * s2 + 6 * s, d11 = 3 * s2 - 2 * s;
    du = (d00 * U_[i] + d01 * U_[i + 1]) / h + d10 * dU_[i] + d11 * dU_[i + 1];
}

double Profile::value(double t) const {
    double u, du;
    hermite(t, u, du);
    return u;
}

double Profile::derivative(double t) const {
    double u, du;
    hermite(t, u, du);
    return du;
}

double Profile::second_derivative(double t) const {
    double u, du;
    hermite(t, u, du);
    if (std::abs(t) >= grid_.T) return 0.0;
    return potential_.f(u) - (n_ - 1) * std::tanh(t) * du;
}

Jet Profile::value(const Jet& t) const {
    double u, du;
    hermite(t.v, u, du);
    const double d2 = std::abs(t.v) >= grid_.T ? 0.0
                                               : potential_.f(u) - (n_ - 1) * std::tanh(t.v) * du;
    return chain(t, u, du, d2);
}

// ---------------------------------------------------------------------------
// solve_profile

std::vector<double> profile_residual(const ProfileGrid& grid, int n, const DoubleWellPotential& p,
                                     const std::vector<double>& U) {
    std::vector<double> R(grid.size(), 0.0);
    const double h = grid.h;
    for (int i = 1; i < grid.M; ++i) {
        const double t = grid.t(i);
        R[i] = (U[i + 1] - 2.0 * U[i] + U[i - 1]) / (h * h) +
               (n - 1) * std::tanh(t) * (U[i + 1] - U[i - 1]) / (2.0 * h) - p.f(U[i]);
    }
    return R;
}

Profile solve_profile(const DoubleWellPotential& p, int n, double T, double h, double tol,
                      ProfileOptions options) {
    const SpectralRates rates = spectral_rates(p, n);
    if (T < 8.0 / rates.beta) {
        std::ostringstream os;
        os << "half-width T = " << T << " is below 8/beta = " << 8.0 / rates.beta;
        throw InvalidArgument(os.str());
    }
    const ProfileGrid grid(T, h);
    const int M = grid.M;
    const double hh = grid.h;

    std::vector<double> U(grid.size());
    for (int i = 0; i <= M; ++i) U[i] = std::tanh(0.5 * rates.beta * grid.t(i));
    U[0] = -1.0;
    U[M] = 1.0;

    std::vector<double> R = profile_residual(grid, n, p, U);
    double rnorm = max_abs(R);
    int it = 0;
    for (; it < options.max_iterations && rnorm > tol; ++it) {
        // Jacobian of the interior residual, unknowns U_1..U_{M-1}
        const int m = M - 1;
        std::vector<double> sub(m), diag(m), sup(m), rhs(m);
        for (int k = 0; k < m; ++k) {
            const int i = k + 1;
            const double c = (n - 1) * std::tanh(grid.t(i)) / (2.0 * hh);
            sub[k] = 1.0 / (hh * hh) - c;
            sup[k] = 1.0 / (hh * hh) + c;
            diag[k] = -2.0 / (hh * hh) - p.fprime(U[i]);
            rhs[k] = -R[i];
        }
        const std::vector<double> dx = solve_tridiagonal(sub, diag, sup, rhs);

        double step = 1.0;
        std::vector<double> trial(U);
        double trial_norm = std::numeric_limits<double>::infinity();
        for (int ls = 0; ls < 30; ++ls) {
            for (int k = 0; k < m; ++k) trial[k + 1] = U[k + 1] + step * dx[k];
            R = profile_residual(grid, n, p, trial);
            trial_norm = max_abs(R);
            if (trial_norm < rnorm || trial_norm <= tol) break;
            step *= 0.5;
        }
        if (!(trial_norm < rnorm) && trial_norm > tol) {
            std::ostringstream os;
            os << "profile residual stalled at " << rnorm << " after " << it << " iterations";
            throw NewtonDivergence(os.str());
        }
        U.swap(trial);
        rnorm = trial_norm;
    }
    if (rnorm > tol) {
        std::ostringstream os;
        os << "profile residual " << rnorm << " above tolerance " << tol << " after " << it
           << " iterations";
        throw NewtonDivergence(os.str());
    }
    // one polishing step when it still helps; the residual floor is roundoff
    {
        const int m = M - 1;
        std::vector<double> sub(m), diag(m), sup(m), rhs(m);
        for (int k = 0; k < m; ++k) {
            const int i = k + 1;
            const double c = (n - 1) * std::tanh(grid.t(i)) / (2.0 * hh);
            sub[k] = 1.0 / (hh * hh) - c;
            sup[k] = 1.0 / (hh * hh) + c;
            diag[k] = -2.0 / (hh * hh) - p.fprime(U[i]);
            rhs[k] = -R[i];
        }
        const std::vector<double> dx = solve_tridiagonal(sub, diag, sup, rhs);
        std::vector<double> trial(U);
        for (int k = 0; k < m; ++k) trial[k + 1] += dx[k];
        std::vector<double> Rt = profile_residual(grid, n, p, trial);
        if (max_abs(Rt) < rnorm) {
            U.swap(trial);
            R.swap(Rt);
            rnorm = max_abs(R);
        }
    }

    std::vector<double> dU(grid.size());
    for (int i = 1; i < M; ++i) dU[i] = (U[i + 1] - U[i - 1]) / (2.0 * hh);
    dU[0] = (-3.0 * U[0] + 4.0 * U[1] - U[2]) / (2.0 * hh);
    dU[M] = (3.0 * U[M] - 4.0 * U[M - 1] + U[M - 2]) / (2.0 * hh);

    if (options.check_monotone) {
        // Where 1 - |U| is below a few ulps the samples cannot resolve U'; there
        // only roundoff-sized negative slopes are tolerated.
        const double resolvable = 1e4 * std::numeric_limits<double>::epsilon();
        const double noise = 8.0 * std::numeric_limits<double>::epsilon() / hh;
        for (int i = 0; i <= M; ++i) {
            const bool resolved = 1.0 - std::abs(U[i]) > resolvable;
            const bool ok = resolved ? dU[i] > 0.0 && (i == 0 || U[i] > U[i - 1])
                                     : dU[i] > -noise && (i == 0 || U[i] >= U[i - 1] - noise * hh);
            if (!ok) {
                std::ostringstream os;
                os << "U0' <= 0 at t = " << grid.t(i) << " (U' = " << dU[i] << ")";
                throw MonotonicityFailure(os.str());
            }
        }
    }
    return Profile(grid, std::move(U), std::move(dU), std::move(R), n, p, it);
}

std::vector<double> apply_linearized_1d(const Profile& prof, const std::vector<double>& a) {
    const ProfileGrid& g = prof.grid();
    const int n = prof.dimension();
    std::vector<double> out(g.size(), 0.0);
    for (int i = 1; i < g.M; ++i) {
        out[i] = (a[i + 1] - 2.0 * a[i] + a[i - 1]) / (g.h * g.h) +
                 (n - 1) * std::tanh(g.t(i)) * (a[i + 1] - a[i - 1]) / (2.0 * g.h) -
                 prof.potential().fprime(prof.values()[i]) * a[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// estimate_decay

DecayEstimate estimate_decay(const Profile& prof, const SpectralRates& /*rates*/,
                             double lo_fraction, double hi_fraction) {
    const ProfileGrid& g = prof.grid();
    DecayEstimate est;
    est.window_lo = lo_fraction * g.T;
    est.window_hi = hi_fraction * g.T;

    std::vector<double> xp, yp, xm, ym;
    for (int i = 0; i <= g.M; ++i) {
        const double t = g.t(i);
        const double a = std::abs(t);
        if (a < est.window_lo || a > est.window_hi) continue;
        const double u = prof.values()[i];
        const double gap = t > 0 ? 1.0 - u : 1.0 + u;
        if (!(gap > 0.0)) {
            std::ostringstream os;
            os << "profile reaches the well at t = " << t << "; decay window too far out";
            throw WindowTooSmall(os.str());
        }
        (t > 0 ? xp : xm).push_back(a);
        (t > 0 ? yp : ym).push_back(std::log(gap));
    }
    est.nodes_per_side = static_cast<int>(std::min(xp.size(), xm.size()));
    if (est.nodes_per_side < 20) {
        std::ostringstream os;
        os << "decay window holds " << est.nodes_per_side << " nodes per side, need 20";
        throw WindowTooSmall(os.str());
    }
    const LineFit fp = fit_line(xp, yp);
    const LineFit fm = fit_line(xm, ym);
    est.beta_hat_plus = -fp.slope;
    est.beta_hat_minus = -fm.slope;
    est.c_hat_plus = std::exp(fp.intercept);
    est.c_hat_minus = std::exp(fm.intercept);
    est.residual_plus = fp.rms;
    est.residual_minus = fm.rms;
    return est;
}

// ---------------------------------------------------------------------------
// lowest_eigenvalue_1d

Eigenpair1D lowest_eigenvalue_1d(const Profile& prof, double potential_shift, double tol,
                                 int max_iterations) {
    const ProfileGrid& g = prof.grid();
    const int n = prof.dimension();
    const int m = g.M - 1;
    const double h2 = g.h * g.h;

    // symmetrized operator W^{-1/2} (K + W f') W^{-1/2}, W = cosh^{n-1} t
    std::vector<double> diag(m), off(m, 0.0);  // off[k] couples k and k+1
    // w(t_mid) / sqrt(w(t_i) w(t_j)) and w(t_mid) / w(t_i), evaluated in log form
    auto mid = [&](int i, int j) { return 0.5 * (g.t(i) + g.t(j)); };
    auto coupling = [&](int i, int j) {
        return std::exp((n - 1) * (log_cosh(mid(i, j)) - 0.5 * (log_cosh(g.t(i)) + log_cosh(g.t(j)))));
    };
    auto flux = [&](int i, int j) {
        return std::exp((n - 1) * (log_cosh(mid(i, j)) - log_cosh(g.t(i))));
    };
    for (int k = 0; k < m; ++k) {
        const int i = k + 1;
        diag[k] = (flux(i, i - 1) + flux(i, i + 1)) / h2 +
                  prof.potential().fprime(prof.values()[i]) + potential_shift;
        if (k + 1 < m) off[k] = -coupling(i, i + 1) / h2;
    }

    // Gershgorin lower bound keeps the shifted matrix positive definite
    double sigma = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) {
        const double r = std::abs(off[k]) + (k > 0 ? std::abs(off[k - 1]) : 0.0);
        sigma = std::min(sigma, diag[k] - r);
    }
    sigma -= 1.0;

    std::vector<double> sub(m), sup(m), d(m);
    for (int k = 0; k < m; ++k) {
        d[k] = diag[k] - sigma;
        sup[k] = off[k];
        sub[k] = k > 0 ? off[k - 1] : 0.0;
    }
    auto apply = [&](const std::vector<double>& x) {
        std::vector<double> y(m);
        for (int k = 0; k < m; ++k) {
            y[k] = diag[k] * x[k];
            if (k > 0) y[k] += off[k - 1] * x[k - 1];
            if (k + 1 < m) y[k] += off[k] * x[k + 1];
        }
        return y;
    };
    auto normalize = [&](std::vector<double>& x) {
        double s = 0;
        for (double v : x) s += v * v;
        s = std::sqrt(s * g.h);
        for (double& v : x) v /= s;
    };

    std::vector<double> x(m);
    for (int k = 0; k < m; ++k) x[k] = std::exp(-0.5 * g.t(k + 1) * g.t(k + 1) / 4.0);
    normalize(x);

    Eigenpair1D out;
    double lambda = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < max_iterations; ++it) {
        std::vector<double> y = solve_tridiagonal(sub, d, sup, x);
        normalize(y);
        const std::vector<double> Ay = apply(y);
        double num = 0, den = 0;
        for (int k = 0; k < m; ++k) {
            num += Ay[k] * y[k];
            den += y[k] * y[k];
        }
        const double next = num / den;
        x.swap(y);
        const bool settled = std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next));
        lambda = next;
        if (settled) break;
    }
    if (it == max_iterations) {
        std::ostringstream os;
        os << "inverse iteration did not settle in " << max_iterations << " steps";
        throw IterationStall(os.str());
    }
    out.eigenvalue = lambda;
    out.iterations = it + 1;
    out.vector.resize(m);
    for (int k = 0; k < m; ++k) out.vector[k] = x[k] * std::exp(-0.5 * (n - 1) * log_cosh(g.t(k + 1)));
    if (out.vector[m / 2] < 0)
        for (double& v : out.vector) v = -v;
    return out;
}

// ---------------------------------------------------------------------------
// phi_delta

double weight_rho(int n, double r) { return n <= 2 ? 1.0 : 1.0 / std::cosh(r); }

RadialSamples compute_phi_delta(int n, double delta, double R, double h) {
    if (n < 3) throw InvalidArgument("phi_delta exists only for n >= 3");
    if (!(delta > 0.0) || !(delta < 0.5 * (n - 2))) {
        std::ostringstream os;
        os << "delta = " << delta << " outside (0, " << 0.5 * (n - 2) << ")";
        throw ExponentOutOfRange(os.str());
    }
    if (!(R > 0.0) || !(h > 0.0)) throw InvalidArgument("phi_delta needs R > 0 and h > 0");

    const int K = static_cast<int>(std::lround(R / h));
    const double lam = delta * (n - 2 - delta);
    const double m = n - 1;  // dimension of the cross-section

    RadialSamples s;
    s.n = n;
    s.delta = delta;
    s.h = h;
    s.r.resize(K + 1);
    s.phi.resize(K + 1);
    s.dphi.resize(K + 1);
    for (int k = 0; k <= K; ++k) s.r[k] = k * h;

    // regular series at the origin: phi = 1 + a r^2 + b r^4
    const double a = -lam / (2.0 * m);
    const double b = -a * ((m - 1.0) * 2.0 / 3.0 + lam) / (4.0 * m + 8.0);
    s.phi[0] = 1.0;
    s.dphi[0] = 0.0;
    if (K >= 1) {
        s.phi[1] = 1.0 + a * h * h + b * h * h * h * h;
        s.dphi[1] = 2.0 * a * h + 4.0 * b * h * h * h;
    }
    auto rhs = [&](double r, double p, double dp, double& dp_out, double& d2p_out) {
        dp_out = dp;
        d2p_out = -(n - 2) / std::tanh(r) * dp - lam * p;
    };
    for (int k = 1; k < K; ++k) {
        const double r = s.r[k];
        double p = s.phi[k], q = s.dphi[k];
        double k1p, k1q, k2p, k2q, k3p, k3q, k4p, k4q;
        rhs(r, p, q, k1p, k1q);
        rhs(r + 0.5 * h, p + 0.5 * h * k1p, q + 0.5 * h * k1q, k2p, k2q);
        rhs(r + 0.5 * h, p + 0.5 * h * k2p, q + 0.5 * h * k2q, k3p, k3q);
        rhs(r + h, p + h * k3p, q + h * k3q, k4p, k4q);
        s.phi[k + 1] = p + h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        s.dphi[k + 1] = q + h / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q);
    }
    return s;
}

// ---------------------------------------------------------------------------
// check_supersolution

namespace {

std::string describe(const SupersolutionReport& r) {
    std::ostringstream os;
    os << "L_0 v / weight reaches " << r.certified_bound << " >= 0 at t = " << r.worst_t
       << ", r = " << r.worst_r << " (" << r.worst_region << " region, mu = " << r.mu << ")";
    return os.str();
}

}  // namespace

SupersolutionViolation::SupersolutionViolation(SupersolutionReport report)
    : Error("SupersolutionViolation", describe(report)), report_(std::move(report)) {}

SupersolutionReport check_supersolution(const Profile& prof, const SpectralRates& rates, double mu,
                                        double delta, double epsilon,
                                        SupersolutionOptions options) {
    const int n = prof.dimension();
    if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
    if (rates.n != n) throw InvalidArgument("spectral rates computed for a different dimension");

    const ProfileGrid& g = prof.grid();
    const auto& dU = prof.derivatives();

    SupersolutionReport rep;
    rep.n = n;
    rep.mu = mu;
    rep.delta = n >= 3 ? delta : 0.0;
    rep.epsilon = epsilon;

    // The exponential branch only has to be a supersolution where it is
    // active. On each side pick the onset |t| >= t_c beyond which its symbol
    // stays below half its limit, then scale it so that it dominates the
    // profile branch on [0, t_c].
    const auto& U = prof.values();
    const DoubleWellPotential& pot = prof.potential();
    const double lam_r = n >= 3 ? delta * (n - 2 - delta) : 0.0;
    auto symbol = [&](int i) {
        const double t = g.t(i), sh = 1.0 / std::cosh(t);
        return mu * mu - (n - 1) * mu * std::tanh(std::abs(t)) - pot.fprime(U[i]) - lam_r * sh * sh;
    };
    const int mid = g.M / 2;
    auto onset = [&](int side, double limit) {
        // walks inward from the end node while the symbol stays below the target
        int i = side > 0 ? g.M : 0;
        if (!(limit < 0.0)) {
            // no admissible onset; fall back to where U0' drops under epsilon
            while (i != mid && dU[i] < epsilon) i -= side;
            return i;
        }
        while (i != mid && symbol(i - side) <= 0.5 * limit) i -= side;
        return i;
    };
    const int ic_plus = onset(+1, mu * mu - (n - 1) * mu - rates.gamma_plus);
    const int ic_minus = onset(-1, mu * mu - (n - 1) * mu - rates.gamma_minus);
    rep.tail_amplitude_plus = 0.0;
    rep.tail_amplitude_minus = 0.0;
    for (int i = mid; i <= ic_plus; ++i)
        rep.tail_amplitude_plus =
            std::max(rep.tail_amplitude_plus, (dU[i] + epsilon) * std::exp(mu * std::abs(g.t(i))));
    for (int i = ic_minus; i <= mid; ++i)
        rep.tail_amplitude_minus =
            std::max(rep.tail_amplitude_minus, (dU[i] + epsilon) * std::exp(mu * std::abs(g.t(i))));

    std::vector<double> A(g.size()), B(g.size());
    std::vector<char> a_active(g.size());
    for (int i = 0; i <= g.M; ++i) {
        const double amp = i >= mid ? rep.tail_amplitude_plus : rep.tail_amplitude_minus;
        A[i] = dU[i] + epsilon;
        B[i] = amp * std::exp(-mu * std::abs(g.t(i)));
        a_active[i] = A[i] <= B[i];
    }
    for (int i = 0; i < g.M; ++i) {
        if (a_active[i] != a_active[i + 1]) {
            // linear interpolation of A - B between the two nodes
            const double d0 = A[i] - B[i], d1 = A[i + 1] - B[i + 1];
            rep.crossings.push_back(g.t(i) + g.h * d0 / (d0 - d1));
        }
    }
    const double band = options.band_halfwidth_in_h * g.h;
    auto in_band = [&](double t) {
        for (double c : rep.crossings)
            if (std::abs(t - c) <= band) return true;
        return false;
    };

    const std::vector<double> LA = apply_linearized_1d(prof, A);
    const std::vector<double> LB = apply_linearized_1d(prof, B);

    // radial factor
    std::vector<double> rs{0.0}, phi{1.0}, lap_phi{0.0};
    if (n >= 3) {
        const RadialSamples s = compute_phi_delta(n, delta, options.r_max, options.h_r);
        const double lam = delta * (n - 2 - delta);
        rs = s.r;
        phi = s.phi;
        lap_phi.assign(rs.size(), 0.0);
        lap_phi[0] = -lam;  // phi(0) = 1
        for (std::size_t k = 1; k + 1 < rs.size(); ++k) {
            lap_phi[k] = (phi[k + 1] - 2 * phi[k] + phi[k - 1]) / (s.h * s.h) +
                         (n - 2) / std::tanh(rs[k]) * (phi[k + 1] - phi[k - 1]) / (2 * s.h);
        }
        // the last radial node has no right neighbour
        rs.pop_back();
        phi.pop_back();
        lap_phi.pop_back();
    }

    rep.A1 = std::numeric_limits<double>::infinity();
    rep.A1_prime = 0.0;
    rep.certified_bound = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rs.size(); ++k) {
        const double rho_d = n >= 3 ? std::pow(weight_rho(n, rs[k]), delta) : 1.0;
        for (int i = 0; i <= g.M; ++i) {
            const double t = g.t(i);
            const double w = rho_d / std::cosh(mu * t);
            const double branch = a_active[i] ? A[i] : B[i];
            const double v = phi[k] * branch;
            rep.A1 = std::min(rep.A1, v / w);
            rep.A1_prime = std::max(rep.A1_prime, v / w);
            if (i == 0 || i == g.M) continue;
            if (in_band(t)) {
                ++rep.excluded_points;
                continue;
            }
            const double Lt = a_active[i] ? LA[i] : LB[i];
            const double sech2 = 1.0 / (std::cosh(t) * std::cosh(t));
            const double L0v = Lt * phi[k] + sech2 * branch * lap_phi[k];
            const double q = L0v / w;
            ++rep.checked_points;
            if (q > rep.certified_bound) {
                rep.certified_bound = q;
                rep.worst_t = t;
                rep.worst_r = rs[k];
                rep.worst_region = a_active[i] ? "core" : "tail";
            }
        }
    }
    rep.passed = rep.certified_bound < 0.0;
    if (!rep.passed) throw SupersolutionViolation(rep);
    return rep;
}

}  // namespace hypac
