#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "focklab/functions.hpp"
#include "focklab/linalg.hpp"
#include "focklab/weights.hpp"

namespace focklab::operators {

/// Norms of the monomials z^n: (delta_n)^p = 2 pi int_0^inf r^{np+1}
/// e^{-p phi(r)} dr, stored as log delta_n.
struct MonomialNorms {
    double p = 0.0;
    int n_max = 0;
    std::vector<double> log_delta; // n = 0 .. n_max

    double log_delta_at(int n) const;
    double delta(int n) const;
};

MonomialNorms monomial_norms(const RadialWeight& w, double p, int n_max, double tol = 1e-10);

/// omega_n = delta_{n+1} / ((n+1) delta_n) at p = 2; the weights of the
/// integration operator's shift action on the orthonormal monomials.
std::vector<double> volterra_weights(const MonomialNorms& p2_norms);
std::vector<double> volterra_weights(const RadialWeight& w, int n_max, double tol = 1e-10);

struct ShiftMonotonicity {
    bool eventually_decreasing = false;
    int n0 = -1;
};

/// Smallest n0 with omega strictly decreasing on [n0, end] and the last
/// value below omega_{n0}/2; needs at least 50 entries.
ShiftMonotonicity shift_monotonicity(const std::vector<double>& omega);

/// N x N truncation of f -> int_0^z f g' in the orthonormal basis
/// e_n = z^n / delta_n: entry(k+m, k) = m c_m delta_{k+m} / ((k+m) delta_k).
struct OperatorMatrix {
    int n = 0;
    EntireFunction symbol;
    linalg::Matrix entries;
};

OperatorMatrix tg_matrix(const EntireFunction& g, const MonomialNorms& p2_norms, int n);
OperatorMatrix tg_matrix(const EntireFunction& g, const RadialWeight& w, int n);

struct SchattenTail {
    std::vector<int> sizes;
    std::vector<double> partial_sums; // sum_j s_j(T_N)^p per truncation size
    std::vector<double> norms;        // (sum_j s_j^p)^{1/p}
    bool convergent = false;          // norm change over the last doubling <= 2%
};

/// Singular values per truncation via the eigendecomposition of T^H T.
/// Stabilisation is measured on the norm scale (sum^{1/p}); the raw partial
/// sums are also reported.
SchattenTail schatten_tail(const EntireFunction& g, const RadialWeight& w,
                           std::vector<int> sizes, double p);

/// log of M_inf(r, g') as a function of r; symbols with genuine
/// transcendental growth enter the criteria through this envelope.
using LogEnvelope = std::function<double(double)>;

LogEnvelope derivative_envelope(const EntireFunction& g);

enum class Verdict { Bounded, VanishesAtInfinity, Unbounded, Inconclusive };

std::string verdict_name(Verdict v);

struct CriterionReport {
    std::string quantity_name;
    std::vector<double> r_grid;
    std::vector<double> log_values;
    double log_sup_estimate = 0.0;
    double loglog_slope_tail = 0.0;
    Verdict verdict = Verdict::Inconclusive;
};

/// B(r) = M_inf(r, g') (Delta phi)^{(q-p)/(pq)} / (1 + phi'), p <= q.
/// Verdict by the tail log-log slope: >= +0.05 unbounded, <= -0.05 with a
/// 10x drop vanishing, <= 0 bounded; small positive slopes count as bounded
/// only when the local slope is itself decaying (approach to a constant).
CriterionReport tg_bounded_criterion(const LogEnvelope& env, const RadialWeight& w, double p,
                                     double q, const std::vector<double>& r_grid);

enum class TailVerdict { Finite, Divergent, Inconclusive };

std::string tail_verdict_name(TailVerdict v);

struct TailIntegral {
    double log_integral = 0.0; // over the probed window
    double tail_slope = 0.0;   // d log F / d log r at the window end
    TailVerdict verdict = TailVerdict::Inconclusive;
    double cw5_sup = 0.0; // sup of -tau'' tau / (tau phi')^2 (reported)
    double log_norm = 0.0;
};

/// int (|g'|/(1+phi'))^p Delta phi dm, radialised; finiteness from the tail
/// slope (< -1.05 finite, > -0.95 divergent, else inconclusive).
TailIntegral schatten_integral_criterion(const LogEnvelope& env, const RadialWeight& w,
                                         double p, double r_hi = 60.0);

/// ||g'/(1+phi')||_{L^r(dm)} with r = pq/(p-q), for q < p.
TailIntegral tg_qlp_criterion(const LogEnvelope& env, const RadialWeight& w, double p,
                              double q, double r_hi = 60.0);

struct DegreeVerdict {
    std::optional<bool> bounded;
    std::optional<bool> compact;
    std::string sup_condition; // set when the closed form defers to a sup/integral condition
};

/// Closed-form polynomial-degree verdicts for the power, exponential and
/// double-exponential families. Throws Error("OutOfCaseRange") outside the
/// families' stated parameter ranges.
DegreeVerdict degree_threshold(const RadialWeight& w, double p, double q, int g_degree);

struct KernelNorm {
    double log_norm_sq = 0.0; // log sum_n |z|^{2n}/delta_n^2
    double check_ratio = 0.0; // ||K_z||^2 e^{-2 phi} tau^2
    int n_used = 0;
};

/// Reproducing-kernel norm by the monomial series; requires the truncation
/// tail to sit 1e-12 below the running maximum (else TruncationInsufficient).
KernelNorm kernel_norm(const MonomialNorms& p2_norms, const RadialWeight& w, double abs_z);
KernelNorm kernel_norm(const RadialWeight& w, double abs_z, int n_max);

/// || f - P_m f ||_{F^phi_p} by radial quadrature of the tail polynomial.
double taylor_tail_norm(const EntireFunction& f, const RadialWeight& w, double p, int m,
                        double tol = 1e-10);

} // namespace focklab::operators
