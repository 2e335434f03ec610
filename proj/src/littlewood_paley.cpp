#include "focklab/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "focklab/errors.hpp"
#include "focklab/numerics.hpp"

namespace focklab::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const numerics::LogIntegrand kUnitH = [](double) { return 0.0; };

void check_tail_convergence(const RadialWeight& w, double p) {
    if (w.family() == WeightFamily::Logarithmic && w.parameter() * p <= 2.0)
        raise("DivergentTail", "int_0^inf s e^{-p phi} diverges for " + w.spec_string() +
                                   " with p = " + std::to_string(p));
}

// log of the shifted tail integral int_r^inf s e^{-p (phi(s) - phi(r))} ds.
// This is log T(r) + p phi(r) in exact arithmetic, but formed directly so it
// survives p phi(r) far beyond the point where that sum would lose every
// significant bit in double (doubleexp has p phi ~ 1e175 at r = 6).
double log_tail_shifted(const RadialWeight& w, double p, double r, double tol) {
    const double pphi = w.neg_log_density(p, r);
    if (pphi <= 1e4) {
        const auto res = numerics::radial_integral(kUnitH, w, p, r, 0.0, tol);
        return res.log_value + pphi;
    }
    // Spike regime: the density decays on a scale 1/(p phi') too small to
    // resolve in absolute coordinates (and the log values are too large to
    // subtract accurately), so integrate the local cubic model of
    // phi(r+v) - phi(r). The quartic remainder is O(p phi''''/(p phi')^4).
    const double lambda = p * w.dphi(r);
    const double kappa = p * w.ddphi(r);
    const double rho = p * w.dddphi(r);
    if (!std::isfinite(lambda) || !std::isfinite(kappa) || !std::isfinite(rho))
        raise("InvalidArgument",
              "radius beyond the representable range of " + w.spec_string());
    const double vmax = 78.0 / lambda;
    auto model = [&](double v) {
        return std::log(r + v) - (lambda + (0.5 * kappa + rho / 6.0 * v) * v) * v;
    };
    return numerics::log_integrate(model, 0.0, vmax, tol).log_value;
}

} // namespace

double log_distortion(const RadialWeight& w, double p, double r, double tol) {
    if (!(p > 0)) raise("InvalidArgument", "distortion needs p > 0");
    if (r < 0) raise("InvalidArgument", "distortion needs r >= 0");
    check_tail_convergence(w, p);
    return log_tail_shifted(w, p, r, tol) - std::log1p(r);
}

double distortion(const RadialWeight& w, double p, double r, double tol) {
    return std::exp(log_distortion(w, p, r, tol));
}

DistortionProfile distortion_profile(const RadialWeight& w, double p,
                                     const std::vector<double>& r_grid, double tol) {
    DistortionProfile prof;
    prof.p = p;
    prof.points.reserve(r_grid.size());
    for (double r : r_grid) {
        DistortionPoint pt{};
        pt.r = r;
        const double lg = log_distortion(w, p, r, tol);
        pt.psi = std::exp(lg);
        pt.psi_dphi = r > 0 ? std::exp(lg + w.log_dphi(r)) : 0.0;
        pt.rel_err = tol;
        prof.points.push_back(pt);
    }
    return prof;
}

std::vector<AsymptotePoint> distortion_asymptote_check(const RadialWeight& w, double p,
                                                       const std::vector<double>& r_grid) {
    std::vector<AsymptotePoint> out;
    out.reserve(r_grid.size());
    for (double r : r_grid) {
        AsymptotePoint pt{};
        pt.r = r;
        const double log_pd = log_distortion(w, p, r) + w.log_dphi(r);
        pt.psi_dphi = std::exp(log_pd);
        pt.psi_dphi_normalized = std::exp(log_pd + std::log1p(r) - std::log(r));
        out.push_back(pt);
    }
    return out;
}

KpReport kp_condition(const RadialWeight& w, double p, const std::vector<double>& r_grid) {
    if (r_grid.empty()) raise("InvalidArgument", "kp_condition needs a non-empty grid");
    const double required_max =
        w.family() == WeightFamily::DoubleExponential
            ? std::min(6.0, w.radius_with_neg_log_density_below(p, 650.0))
            : 20.0;
    if (r_grid.back() < required_max)
        raise("GridTooShort", "kp_condition grid must reach r = " + std::to_string(required_max));
    check_tail_convergence(w, p);

    KpReport rep;
    rep.r_grid = r_grid;
    rep.q_values.reserve(r_grid.size());
    for (double r : r_grid) {
        // d/dr (r e^{-p phi}) = e^{-p phi} (1 - p r phi'), so
        // Q(r) = (1 - p r phi') * T(r) e^{p phi} / r^2.
        const double lt = log_tail_shifted(w, p, r, 1e-10);
        const double lead = std::log(p) + std::log(r) + w.log_dphi(r);
        double sign, log_abs_lin;
        if (lead > 40.0) {
            sign = -1.0;
            log_abs_lin = lead;
        } else {
            const double lin = 1.0 - std::exp(lead);
            sign = lin < 0 ? -1.0 : 1.0;
            log_abs_lin = std::log(std::max(std::abs(lin), 1e-300));
        }
        const double log_abs_q = log_abs_lin + lt - 2.0 * std::log(r);
        rep.q_values.push_back(sign * std::exp(log_abs_q));
    }
    rep.sup_estimate = *std::max_element(rep.q_values.begin(), rep.q_values.end());

    bool finite = std::isfinite(rep.sup_estimate);
    const std::size_t n = rep.q_values.size();
    bool tail_ok = true;
    if (n >= 6) {
        std::vector<double> xr(rep.r_grid.begin() + 2 * n / 3, rep.r_grid.end());
        std::vector<double> yq(rep.q_values.begin() + 2 * n / 3, rep.q_values.end());
        double scale = 1.0;
        for (double v : yq) scale = std::max(scale, std::abs(v));
        tail_ok = numerics::fit_slope(xr, yq) <= 1e-3 * scale;
    }
    rep.satisfied = finite && tail_ok;
    return rep;
}

LPComparison lp_sides(const EntireFunction& f, const RadialWeight& w, double p, double q,
                      double tol) {
    if (!(p > 0) || !(q > 0)) raise("InvalidArgument", "lp_sides needs p, q > 0");
    check_tail_convergence(w, p);

    LPComparison cmp;
    cmp.rel_err = tol;
    if (f.is_zero()) return cmp; // lhs = rhs = 0, ratio undefined

    const auto fp = f.derivative();
    const double psi_tol = std::max(tol * 0.1, 1e-12);

    auto lhs_h = [&](double s) { return p * numerics::log_circle_mean(f, s, q); };
    const double log_lhs = numerics::radial_integral(lhs_h, w, p, 0.0, 0.0, tol).log_value;

    double log_rhs_int = -kInf;
    if (!fp.is_zero()) {
        auto rhs_h = [&](double s) {
            return p * (numerics::log_circle_mean(fp, s, q) + log_distortion(w, p, s, psi_tol));
        };
        log_rhs_int = numerics::radial_integral(rhs_h, w, p, 0.0, 0.0, tol).log_value;
    }
    const double f0 = std::abs(f.evaluate(0.0));
    const double log_f0_term = f0 > 0 ? p * std::log(f0) : -kInf;
    const double log_rhs = numerics::log_add(log_f0_term, log_rhs_int);

    cmp.lhs = std::exp(log_lhs);
    cmp.rhs = std::exp(log_rhs);
    cmp.ratio = std::exp(log_lhs - log_rhs);
    cmp.defined = true;
    return cmp;
}

LPSweep lp_ratio_sweep(const std::vector<EntireFunction>& fns, const RadialWeight& w,
                       double p, double q, double tol) {
    if (fns.size() < 1) raise("InvalidArgument", "lp_ratio_sweep needs at least one function");
    LPSweep sweep;
    sweep.min_ratio = kInf;
    sweep.max_ratio = -kInf;
    for (const auto& f : fns) {
        auto cmp = lp_sides(f, w, p, q, tol);
        if (cmp.defined) {
            sweep.min_ratio = std::min(sweep.min_ratio, cmp.ratio);
            sweep.max_ratio = std::max(sweep.max_ratio, cmp.ratio);
        }
        sweep.items.push_back(cmp);
    }
    return sweep;
}

// ---------------------------------------------------------------------------
// Bergman disc weights

DiscWeight DiscWeight::one() { return DiscWeight(DiscFamily::One, 0.0); }
DiscWeight DiscWeight::exp_inverse(double gamma) {
    if (gamma <= 0) raise("InvalidArgument", "exp_inverse disc weight needs gamma > 0");
    return DiscWeight(DiscFamily::ExpInverse, gamma);
}
DiscWeight DiscWeight::triple_exponential() {
    return DiscWeight(DiscFamily::TripleExponential, 0.0);
}

double DiscWeight::phi(double r) const {
    switch (family_) {
        case DiscFamily::One: return 0.0;
        case DiscFamily::ExpInverse: return std::pow(1.0 - r, -gamma_);
        case DiscFamily::TripleExponential: return std::exp(std::exp(1.0 / (1.0 - r)));
    }
    return 0.0;
}

double DiscWeight::dphi(double r) const {
    switch (family_) {
        case DiscFamily::One: return 0.0;
        case DiscFamily::ExpInverse: return gamma_ * std::pow(1.0 - r, -gamma_ - 1.0);
        case DiscFamily::TripleExponential: {
            const double x = 1.0 / (1.0 - r);
            return std::exp(x + std::exp(x)) * x * x;
        }
    }
    return 0.0;
}

double DiscWeight::ddphi(double r) const {
    switch (family_) {
        case DiscFamily::One: return 0.0;
        case DiscFamily::ExpInverse:
            return gamma_ * (gamma_ + 1.0) * std::pow(1.0 - r, -gamma_ - 2.0);
        case DiscFamily::TripleExponential: {
            const double x = 1.0 / (1.0 - r);
            return dphi(r) * x * x * (std::exp(x) + 1.0 + 2.0 / x);
        }
    }
    return 0.0;
}

double DiscWeight::log_dphi(double r) const {
    switch (family_) {
        case DiscFamily::One: return -std::numeric_limits<double>::infinity();
        case DiscFamily::ExpInverse:
            return std::log(gamma_) - (gamma_ + 1.0) * std::log1p(-r);
        case DiscFamily::TripleExponential: {
            const double x = 1.0 / (1.0 - r);
            return x + std::exp(x) + 2.0 * std::log(x);
        }
    }
    return 0.0;
}

double DiscWeight::log_distortion(double r, double tol) const {
    if (!(r >= 0.0 && r < 1.0)) raise("InvalidArgument", "disc weight needs r in [0, 1)");
    const double ph = phi(r);
    const double dp = dphi(r);
    if (!std::isfinite(ph) || !std::isfinite(dp))
        raise("QuadratureNearBoundary",
              "disc weight not representable in double precision at r = " + std::to_string(r));

    const double ulp = std::max(r, 0.5) * 2.3e-16;
    if (dp > 1e-3 / ulp) {
        // Decay scale 1/phi' is below the grid of representable points near
        // r, so integrate the local quadratic model of phi(r+v) - phi(r)
        // instead. The cubic correction is O(1/phi) here, far below tol.
        const double dd = ddphi(r);
        const double vmax = std::min(1.0 - r, 72.0 / dp);
        auto model = [&](double v) { return -(dp * v + 0.5 * dd * v * v); };
        return numerics::log_integrate(model, 0.0, vmax, tol, 80).log_value;
    }

    // Direct integration of e^{-(phi(u) - phi(r))}; cut where phi has grown
    // by 72 nats (or at 1).
    double hi = 1.0 - 1e-14;
    if (std::isfinite(phi(hi)) == false || phi(hi) > ph + 72.0) {
        double lo = r;
        const double cap = ph + 72.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double pm = phi(mid);
            if (std::isfinite(pm) && pm <= cap) lo = mid; else hi = mid;
        }
        hi = std::min(1.0 - 1e-14, hi);
    }
    auto integrand = [&](double u) { return ph - phi(u); };
    return numerics::log_integrate(integrand, r, hi, tol, 110).log_value;
}

double bergman_distortion(const DiscWeight& w, double r, double tol) {
    return std::exp(w.log_distortion(r, tol));
}

BergmanLReport bergman_L_condition(const DiscWeight& w, const std::vector<double>& r_grid) {
    if (r_grid.empty()) raise("InvalidArgument", "bergman_L_condition needs a non-empty grid");
    BergmanLReport rep;
    rep.r_grid = r_grid;
    rep.values.reserve(r_grid.size());
    for (double r : r_grid) {
        // (w'/w^2) int_r^1 w  =  -phi'(r) psi_w(r)
        const double ld = w.log_dphi(r);
        rep.values.push_back(ld == -std::numeric_limits<double>::infinity()
                                 ? 0.0
                                 : -std::exp(ld + w.log_distortion(r)));
    }
    rep.sup_estimate = *std::max_element(rep.values.begin(), rep.values.end());
    rep.satisfied = std::all_of(rep.values.begin(), rep.values.end(),
                                [](double v) { return std::isfinite(v); });
    return rep;
}

} // namespace focklab::lp
