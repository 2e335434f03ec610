#pragma once

#include <functional>
#include <vector>

#include "focklab/functions.hpp"
#include "focklab/weights.hpp"

namespace focklab::numerics {

/// log(e^a + e^b) without leaving log space.
double log_add(double a, double b);

/// log(sum_i e^{x_i}). Terms are sorted descending before accumulation so
/// the reduction order (and hence the result bit pattern) is fixed no
/// matter how the terms were produced.
double log_sum_exp(std::vector<double> terms);

struct LogQuadratureResult {
    double log_value = -std::numeric_limits<double>::infinity();
    double rel_error_estimate = 0.0;
    double r_cut = 0.0;
    long long n_evals = 0;
};

/// Callback giving the log of a nonnegative integrand; -inf encodes 0.
using LogIntegrand = std::function<double(double)>;

/// Adaptive quadrature of integral_a^b exp(L(s)) ds, entirely in log space.
/// Gauss-Legendre panels compared against their bisection; a panel is
/// accepted when the relative difference is below tol. All panel weights
/// are positive, so per-panel relative control bounds the total relative
/// error by tol.
LogQuadratureResult log_integrate(const LogIntegrand& log_f, double a, double b,
                                  double tol, int max_depth = 60);

/// log of integral_{r_lo}^inf h(s) s^{1+extra_power} e^{-p phi(s)} ds with
/// h given in log form. The infinite tail is cut where the log-integrand
/// has fallen ~69 nats (1e-30x) below its running maximum while decreasing,
/// and the cut is re-certified against the computed value via the local
/// log-log slope.
///
/// Errors: NonDecayingTail if the integrand is not eventually decreasing
/// before s = 1e4; DivergentTail if the tail decays too slowly to certify;
/// ToleranceNotMet if the 1e7-evaluation budget is exhausted.
LogQuadratureResult radial_integral(const LogIntegrand& log_h, const RadialWeight& w,
                                    double p, double r_lo, double extra_power,
                                    double tol);

/// Circle mean M_q(r, f) by the periodic trapezoid rule on n_nodes
/// equispaced angles (n_nodes is raised to at least 4*(deg+1), which makes
/// the q = 2 case exact by Parseval). q = inf takes the node maximum with
/// three refinement rounds of 8x local oversampling around the argmax.
/// Overflow is reported (Error("NumericOverflow")), never clamped.
double circle_mean(const EntireFunction& f, double r, double q, int n_nodes = 0);

/// log M_q(r, f), computed with scaling so intermediate powers |f|^q do not
/// overflow. -inf for the zero function.
double log_circle_mean(const EntireFunction& f, double r, double q, int n_nodes = 0);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace focklab::numerics
