#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace focklab {

enum class WeightFamily { Power, Exponential, DoubleExponential, Gaussian, Logarithmic };

/// Radial weight phi on [0,inf) from one of the built-in analytic families:
///
///   power:a      phi(r) = r^a            (class I for a > 2; a > 0 accepted)
///   exp:b        phi(r) = e^{b r},  b > 0
///   doubleexp    phi(r) = e^{e^r}
///   gauss        phi(r) = r^2/2
///   log:a        phi(r) = a log(1+r), a > 0
///
/// All derived quantities are exposed both directly and in log form. The
/// log forms are the ones downstream integrators use: for doubleexp,
/// e^{-p phi} underflows near r = 2 and Delta phi overflows near r = 6.5.
class RadialWeight {
public:
    static RadialWeight power(double alpha);
    static RadialWeight exponential(double beta);
    static RadialWeight double_exponential();
    static RadialWeight gaussian();
    static RadialWeight logarithmic(double a);

    /// Parse a weight spec (`power:3`, `exp:1.5`, `doubleexp`, `gauss`,
    /// `log:4`). Throws Error("ParseError") naming the offending token.
    static RadialWeight parse(std::string_view spec);

    WeightFamily family() const { return family_; }
    double parameter() const { return param_; }
    std::string spec_string() const;

    double phi(double r) const;
    double dphi(double r) const;
    double ddphi(double r) const;
    double dddphi(double r) const;
    /// Delta phi(r) = phi''(r) + phi'(r)/r; at r = 0 the limit (may be +inf).
    double laplacian(double r) const;
    double tau(double r) const; // laplacian^{-1/2}
    /// p * phi(r): the exponent of the density e^{-p phi}, never exponentiated here.
    double neg_log_density(double p, double r) const { return p * phi(r); }

    double log_dphi(double r) const;    // r > 0
    double log1p_dphi(double r) const;  // log(1 + phi'(r)), stable for huge phi'
    double log_laplacian(double r) const;
    double log_tau(double r) const { return -0.5 * log_laplacian(r); }

    /// tau regularised to a constant scale near the origin: tau(1) for
    /// r <= 0.9, linear blend on [0.9, 1.1], tau(r) beyond. Positive,
    /// continuous and non-increasing for the class-I families.
    double tau_clamped(double r) const;
    double log_tau_clamped(double r) const;

    /// True for the families that are in class I for admissible parameters.
    bool class_I_candidate() const;

    /// Largest r with p*phi(r) <= cap (so e^{-p phi(r)} stays representable).
    double radius_with_neg_log_density_below(double p, double cap) const;

private:
    RadialWeight(WeightFamily f, double param) : family_(f), param_(param) {}
    WeightFamily family_;
    double param_ = 0.0;
};

struct WeightProfile {
    double phi, dphi, ddphi, laplacian, tau;
};

/// Pointwise profile of a weight. At r = 0 the laplacian/tau entries are the
/// r -> 0+ limits. Throws Error("NonpositiveLaplacian") when Delta phi <= 0
/// at that radius (e.g. power a > 2 at r = 0).
WeightProfile weight_profile(const RadialWeight& w, double r);

struct ClassIReport {
    bool laplacian_positive = false;
    bool tau_decreasing = false;
    bool tau_prime_vanishing = false;
    bool side_condition_A = false; // tau(r) r^C increasing for a fitted C
    bool side_condition_B = false; // tau'(r) log(1/tau(r)) decreasing to 0
    bool in_class_I = false;
    double fitted_C = 0.0;
    double tau_prime_at_rmax = 0.0;
};

/// Diagnose class-I membership on a strictly increasing grid with
/// max(grid) >= 10 (else Error("GridTooShort")). All tau work is done on
/// log tau so the report stays meaningful when tau underflows (doubleexp).
ClassIReport class_I_report(const RadialWeight& w, const std::vector<double>& r_grid);

} // namespace focklab
