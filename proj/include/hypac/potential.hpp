#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hypac {

using ScalarFn = std::function<double(double)>;

/// Double-well nonlinearity F with wells normalized to -1 and +1.
///
/// Holds F, f = F' and f' = F''. Instances are immutable; copies share the
/// underlying evaluators.
class DoubleWellPotential {
public:
    DoubleWellPotential(ScalarFn F, ScalarFn f, ScalarFn fprime, std::string name = "custom",
                        bool symmetric = false);

    /// (1 - u^2)^2 / 4, so f(u) = u^3 - u and f'(+-1) = 2.
    static DoubleWellPotential quartic();

    /// F(u) = sum_k c_k u^k (ascending degree).
    static DoubleWellPotential polynomial(std::vector<double> coefficients);

    /// Pulls back a potential whose wells sit at `lo` < `hi` to wells at +-1
    /// through u = m + r s with m = (lo + hi)/2, r = (hi - lo)/2.
    static DoubleWellPotential from_wells(const ScalarFn& F, const ScalarFn& f,
                                          const ScalarFn& fprime, double lo, double hi);

    double F(double u) const { return F_(u); }
    double f(double u) const { return f_(u); }
    double fprime(double u) const { return fp_(u); }

    const std::string& name() const { return name_; }
    bool symmetric() const { return symmetric_; }
    /// Empty unless constructed through `polynomial` / `quartic`.
    const std::vector<double>& coefficients() const { return coefficients_; }

private:
    ScalarFn F_, f_, fp_;
    std::string name_;
    bool symmetric_ = false;
    std::vector<double> coefficients_;
};

struct PotentialValidation {
    int sample_count = 0;
    double gamma_minus = 0.0;
    double gamma_plus = 0.0;
    double max_abs_well_value = 0.0;   // max(|F(-1)|, |F(1)|, |f(-1)|, |f(1)|)
    double min_sampled_F = 0.0;
    double worst_violation = 0.0;      // largest constraint excess seen (0 if none)
};

/// Checks the double-well hypotheses on `sample_count` uniform points of
/// [-3, 3] plus the wells themselves. Throws on the first hard failure.
PotentialValidation validate_potential(const DoubleWellPotential& p, int sample_count = 6001,
                                       double tolerance = 1e-10);

struct SpectralRates {
    int n = 2;
    double gamma_minus = 0.0;
    double gamma_plus = 0.0;
    double beta_minus = 0.0;
    double beta_plus = 0.0;
    double beta = 0.0;
};

/// beta_pm = (n-1)/2 + sqrt((n-1)^2/4 + gamma_pm), gamma_pm = f'(+-1).
SpectralRates spectral_rates(const DoubleWellPotential& p, int n);

}  // namespace hypac
