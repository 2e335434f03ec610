#pragma once

#include <vector>

#include "focklab/functions.hpp"
#include "focklab/weights.hpp"

namespace focklab::lp {

/// p-distortion function psi_p(r) = (int_r^inf s e^{-p phi(s)} ds) /
/// ((1+r) e^{-p phi(r)}), evaluated through the log-domain tail integral.
/// Throws Error("DivergentTail") for log:a weights with a*p <= 2.
double distortion(const RadialWeight& w, double p, double r, double tol = 1e-10);
double log_distortion(const RadialWeight& w, double p, double r, double tol = 1e-10);

struct DistortionPoint {
    double r, psi, psi_dphi, rel_err;
};

struct DistortionProfile {
    double p;
    std::vector<DistortionPoint> points;
};

DistortionProfile distortion_profile(const RadialWeight& w, double p,
                                     const std::vector<double>& r_grid, double tol = 1e-10);

struct AsymptotePoint {
    double r;
    double psi_dphi;            // psi_p(r) phi'(r), the (1+r)-normalised quotient
    double psi_dphi_normalized; // T(r) phi'(r) / (r e^{-p phi}), = psi_dphi (1+r)/r
};

/// psi_p * phi' tends to 1/p for the class-I families. The convergence at
/// finite radii lives in the r-normalised quotient (the truncation-
/// equivalent form of the distortion); the (1+r) form trails it by the
/// factor r/(1+r). Both are reported.
std::vector<AsymptotePoint> distortion_asymptote_check(const RadialWeight& w, double p,
                                                       const std::vector<double>& r_grid);

struct KpReport {
    std::vector<double> r_grid;
    std::vector<double> q_values;
    double sup_estimate = 0.0;
    bool satisfied = false;
};

/// Q(r) = d/dr(r e^{-p phi}) * (int_r^inf s e^{-p phi} ds) / (r^2 e^{-2 p phi}).
/// satisfied when Q stays bounded above with a non-increasing tail trend.
KpReport kp_condition(const RadialWeight& w, double p, const std::vector<double>& r_grid);

struct LPComparison {
    double lhs = 0.0;     // int_0^inf M_q^p(r, f)  r e^{-p phi} dr
    double rhs = 0.0;     // |f(0)|^p + int_0^inf M_q^p(r, f') psi_p^p r e^{-p phi} dr
    double ratio = 0.0;   // lhs / rhs
    bool defined = false; // false for f == 0
    double rel_err = 0.0;
};

/// Both sides of the derivative-norm equivalence for one function.
/// q may be infinity (sup circle means).
LPComparison lp_sides(const EntireFunction& f, const RadialWeight& w, double p, double q,
                      double tol = 1e-9);

struct LPSweep {
    std::vector<LPComparison> items;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};

LPSweep lp_ratio_sweep(const std::vector<EntireFunction>& fns, const RadialWeight& w,
                       double p, double q, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Bergman-disc analogue: weights on [0, 1).

enum class DiscFamily { One, ExpInverse, TripleExponential };

/// Radial weight w on [0,1): 1, e^{-(1-r)^{-gamma}}, or exp(-e^{e^{1/(1-r)}}).
class DiscWeight {
public:
    static DiscWeight one();
    static DiscWeight exp_inverse(double gamma);
    static DiscWeight triple_exponential();

    DiscFamily family() const { return family_; }
    double phi(double r) const; // -log w
    double dphi(double r) const;
    double ddphi(double r) const;
    double log_dphi(double r) const;

    /// log psi_w(r) = log[(1/w(r)) int_r^1 w(u) du], formed directly as the
    /// shifted integral int e^{-(phi(u)-phi(r))} du. Falls back to a local
    /// quadratic model of phi when the decay scale 1/phi'(r) drops below the
    /// floating-point resolution at r (triple-exponential weights). Throws
    /// Error("QuadratureNearBoundary") when phi(r) itself is not
    /// representable.
    double log_distortion(double r, double tol = 1e-10) const;

private:
    DiscWeight(DiscFamily f, double gamma) : family_(f), gamma_(gamma) {}
    DiscFamily family_;
    double gamma_ = 0.0;
};

/// psi_w(r) = (1/w(r)) int_r^1 w(u) du.
double bergman_distortion(const DiscWeight& w, double r, double tol = 1e-10);

struct BergmanLReport {
    std::vector<double> r_grid;
    std::vector<double> values; // (w'(r)/w(r)^2) int_r^1 w
    double sup_estimate = 0.0;
    bool satisfied = false;
};

BergmanLReport bergman_L_condition(const DiscWeight& w, const std::vector<double>& r_grid);

} // namespace focklab::lp
