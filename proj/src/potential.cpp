#include "hypac/potential.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "hypac/error.hpp"

namespace hypac {

namespace {

double horner(const std::vector<double>& c, double u) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
    return acc;
}

std::vector<double> derivative(const std::vector<double>& c) {
    std::vector<double> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
    if (d.empty()) d.push_back(0.0);
    return d;
}

bool is_even_polynomial(const std::vector<double>& c) {
    for (std::size_t k = 1; k < c.size(); k += 2)
        if (c[k] != 0.0) return false;
    return true;
}

}  // namespace

DoubleWellPotential::DoubleWellPotential(ScalarFn F, ScalarFn f, ScalarFn fprime,
                                         std::string name, bool symmetric)
    : F_(std::move(F)), f_(std::move(f)), fp_(std::move(fprime)), name_(std::move(name)),
      symmetric_(symmetric) {}

DoubleWellPotential DoubleWellPotential::quartic() {
    auto p = polynomial({0.25, 0.0, -0.5, 0.0, 0.25});
    p.name_ = "quartic";
    return p;
}

DoubleWellPotential DoubleWellPotential::polynomial(std::vector<double> coefficients) {
    if (coefficients.empty()) throw InvalidArgument("polynomial potential needs coefficients");
    auto c0 = std::make_shared<const std::vector<double>>(coefficients);
    auto c1 = std::make_shared<const std::vector<double>>(derivative(*c0));
    auto c2 = std::make_shared<const std::vector<double>>(derivative(*c1));
    DoubleWellPotential p([c0](double u) { return horner(*c0, u); },
                          [c1](double u) { return horner(*c1, u); },
                          [c2](double u) { return horner(*c2, u); }, "polynomial",
                          is_even_polynomial(*c0));
    p.coefficients_ = std::move(coefficients);
    return p;
}

DoubleWellPotential DoubleWellPotential::from_wells(const ScalarFn& F, const ScalarFn& f,
                                                    const ScalarFn& fprime, double lo,
                                                    double hi) {
    if (!(hi > lo)) throw InvalidArgument("well locations must satisfy lo < hi");
    const double m = 0.5 * (lo + hi);
    const double r = 0.5 * (hi - lo);
    return DoubleWellPotential([F, m, r](double s) { return F(m + r * s); },
                               [f, m, r](double s) { return r * f(m + r * s); },
                               [fprime, m, r](double s) { return r * r * fprime(m + r * s); },
                               "rescaled");
}

PotentialValidation validate_potential(const DoubleWellPotential& p, int sample_count,
                                       double tolerance) {
    if (sample_count < 3) throw InvalidArgument("sample_count must be at least 3");

    PotentialValidation rep;
    rep.sample_count = sample_count;

    const double a = -3.0, b = 3.0;
    const double step = (b - a) / (sample_count - 1);
    rep.min_sampled_F = std::min(p.F(-1.0), p.F(1.0));
    if (rep.min_sampled_F < -tolerance) throw NegativePotential("F takes negative values at the wells");
    double prev_s = a, prev_F = p.F(a);
    for (int i = 0; i < sample_count; ++i) {
        const double s = a + i * step;
        const double Fs = p.F(s);
        rep.min_sampled_F = std::min(rep.min_sampled_F, Fs);
        if (Fs < -tolerance) {
            std::ostringstream os;
            os << "F(" << s << ") = " << Fs << " < 0";
            throw NegativePotential(os.str());
        }
        rep.worst_violation = std::max(rep.worst_violation, -Fs);
        if (i > 0) {
            // decreasing on (-inf,-1), increasing on (1,inf)
            double excess = 0.0;
            if (s <= -1.0) excess = Fs - prev_F;
            if (prev_s >= 1.0) excess = prev_F - Fs;
            if (excess > tolerance) {
                std::ostringstream os;
                os << "F not monotone outside the wells between " << prev_s << " and " << s;
                throw MonotonicityViolation(os.str());
            }
            rep.worst_violation = std::max(rep.worst_violation, excess);
        }
        prev_s = s;
        prev_F = Fs;
    }
    const double wells[] = {std::abs(p.F(-1.0)), std::abs(p.F(1.0)), std::abs(p.f(-1.0)),
                            std::abs(p.f(1.0))};
    rep.max_abs_well_value = *std::max_element(std::begin(wells), std::end(wells));
    if (rep.max_abs_well_value > tolerance) {
        std::ostringstream os;
        os << "F and f must vanish at +-1; F(-1)=" << p.F(-1.0) << " F(1)=" << p.F(1.0)
           << " f(-1)=" << p.f(-1.0) << " f(1)=" << p.f(1.0);
        throw WellMismatch(os.str());
    }

    rep.gamma_minus = p.fprime(-1.0);
    rep.gamma_plus = p.fprime(1.0);
    if (!(rep.gamma_minus > 0.0) || !(rep.gamma_plus > 0.0)) {
        std::ostringstream os;
        os << "f'(-1)=" << rep.gamma_minus << ", f'(1)=" << rep.gamma_plus
           << "; both must be positive";
        throw NondegenerateWellViolation(os.str());
    }

    rep.worst_violation = std::max(rep.worst_violation, rep.max_abs_well_value);
    return rep;
}

SpectralRates spectral_rates(const DoubleWellPotential& p, int n) {
    if (n < 2) throw InvalidArgument("dimension n must be >= 2");
    SpectralRates r;
    r.n = n;
    r.gamma_minus = p.fprime(-1.0);
    r.gamma_plus = p.fprime(1.0);
    if (!(r.gamma_minus > 0.0) || !(r.gamma_plus > 0.0))
        throw NondegenerateWellViolation("spectral rates need f'(+-1) > 0");
    const double half = 0.5 * (n - 1);
    r.beta_minus = half + std::sqrt(half * half + r.gamma_minus);
    r.beta_plus = half + std::sqrt(half * half + r.gamma_plus);
    r.beta = std::min(r.beta_minus, r.beta_plus);
    return r;
}

}  // namespace hypac
