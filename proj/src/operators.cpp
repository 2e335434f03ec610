#include "focklab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "focklab/errors.hpp"
#include "focklab/numerics.hpp"

namespace focklab::operators {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const numerics::LogIntegrand kUnitH = [](double) { return 0.0; };

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return g;
}

// trapezoid of exp(logF) on a positive grid, in log space
double log_trapezoid(const std::vector<double>& r, const std::vector<double>& log_f) {
    std::vector<double> terms;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double panel =
            numerics::log_add(log_f[i], log_f[i + 1]) + std::log(0.5 * (r[i + 1] - r[i]));
        terms.push_back(panel);
    }
    return numerics::log_sum_exp(std::move(terms));
}

double tail_slope_fit(const std::vector<double>& r, const std::vector<double>& log_f,
                      double window_fraction) {
    std::vector<double> xs, ys;
    const std::size_t start =
        static_cast<std::size_t>(static_cast<double>(r.size()) * (1.0 - window_fraction));
    for (std::size_t i = start; i < r.size(); ++i) {
        if (!std::isfinite(log_f[i])) continue;
        xs.push_back(std::log(r[i]));
        ys.push_back(log_f[i]);
    }
    if (xs.size() < 3) return 0.0;
    return numerics::fit_slope(xs, ys);
}

TailVerdict classify_tail(double slope) {
    if (slope < -1.05) return TailVerdict::Finite;
    if (slope <= -0.95) return TailVerdict::Inconclusive;
    return TailVerdict::Divergent;
}

// sup over the grid of -tau''(r) tau(r) / (tau(r) phi'(r))^2, with tau''
// taken from finite differences of log tau.
double cw5_supremum(const RadialWeight& w, const std::vector<double>& r_grid) {
    double sup = -kInf;
    for (double r : r_grid) {
        const double h = 1e-4 * std::max(1.0, r);
        if (r - h <= 0) continue;
        const double lm = w.log_tau(r - h), l0 = w.log_tau(r), lp = w.log_tau(r + h);
        const double d = (lp - lm) / (2.0 * h);
        const double dd = (lp - 2.0 * l0 + lm) / (h * h);
        // tau''/tau = (log tau)'' + ((log tau)')^2
        const double val = -(dd + d * d) * std::exp(-2.0 * w.log_dphi(r));
        sup = std::max(sup, val);
    }
    return sup;
}

} // namespace

double MonomialNorms::log_delta_at(int n) const {
    if (n < 0 || n > n_max) raise("InvalidArgument", "monomial norm index out of range");
    return log_delta[static_cast<std::size_t>(n)];
}

double MonomialNorms::delta(int n) const { return std::exp(log_delta_at(n)); }

MonomialNorms monomial_norms(const RadialWeight& w, double p, int n_max, double tol) {
    if (!(p > 0)) raise("InvalidArgument", "monomial_norms needs p > 0");
    if (n_max < 0) raise("InvalidArgument", "monomial_norms needs n_max >= 0");
    if (w.family() == WeightFamily::Logarithmic && w.parameter() * p <= n_max * p + 2.0)
        raise("DivergentTail", "monomial norms diverge for " + w.spec_string());

    MonomialNorms out;
    out.p = p;
    out.n_max = n_max;
    out.log_delta.reserve(static_cast<std::size_t>(n_max) + 1);
    const double log_2pi = std::log(2.0 * M_PI);
    for (int n = 0; n <= n_max; ++n) {
        const auto res = numerics::radial_integral(kUnitH, w, p, 0.0, n * p, tol);
        out.log_delta.push_back((log_2pi + res.log_value) / p);
    }
    return out;
}

std::vector<double> volterra_weights(const MonomialNorms& p2_norms) {
    if (p2_norms.p != 2.0) raise("InvalidArgument", "volterra weights need p = 2 norms");
    std::vector<double> omega;
    omega.reserve(static_cast<std::size_t>(p2_norms.n_max));
    for (int n = 0; n + 1 <= p2_norms.n_max; ++n) {
        omega.push_back(std::exp(p2_norms.log_delta_at(n + 1) - p2_norms.log_delta_at(n) -
                                 std::log(n + 1.0)));
    }
    return omega;
}

std::vector<double> volterra_weights(const RadialWeight& w, int n_max, double tol) {
    return volterra_weights(monomial_norms(w, 2.0, n_max + 1, tol));
}

ShiftMonotonicity shift_monotonicity(const std::vector<double>& omega) {
    if (omega.size() < 50) raise("InvalidArgument", "shift_monotonicity needs >= 50 weights");
    ShiftMonotonicity out;
    // start of the maximal strictly decreasing suffix
    std::size_t s = omega.size() - 1;
    while (s > 0 && omega[s - 1] > omega[s]) --s;
    if (s + 1 < omega.size() && omega.back() < omega[s] / 2.0) {
        out.eventually_decreasing = true;
        out.n0 = static_cast<int>(s);
    }
    return out;
}

OperatorMatrix tg_matrix(const EntireFunction& g, const MonomialNorms& p2_norms, int n) {
    if (g.degree() < 1) {
        OperatorMatrix zero;
        zero.n = n;
        zero.symbol = g;
        zero.entries = linalg::Matrix(n);
        return zero;
    }
    if (n < g.degree() + 5) raise("InvalidArgument", "truncation needs N >= deg g + 5");
    if (p2_norms.n_max < n - 1) raise("InvalidArgument", "not enough monomial norms");

    OperatorMatrix out;
    out.n = n;
    out.symbol = g;
    out.entries = linalg::Matrix(n);
    for (int k = 0; k < n; ++k) {
        for (int m = 1; m <= g.degree(); ++m) {
            const int row = k + m;
            if (row >= n) break;
            const Complex cm = g.coeff(m);
            if (cm == Complex(0.0)) continue;
            const double scale =
                std::exp(p2_norms.log_delta_at(row) - p2_norms.log_delta_at(k)) /
                static_cast<double>(row);
            out.entries.at(row, k) = static_cast<double>(m) * cm * scale;
        }
    }
    return out;
}

OperatorMatrix tg_matrix(const EntireFunction& g, const RadialWeight& w, int n) {
    return tg_matrix(g, monomial_norms(w, 2.0, n, 1e-10), n);
}

SchattenTail schatten_tail(const EntireFunction& g, const RadialWeight& w,
                           std::vector<int> sizes, double p) {
    if (!(p > 0)) raise("InvalidArgument", "schatten_tail needs p > 0");
    std::sort(sizes.begin(), sizes.end());
    if (sizes.size() < 3 || sizes.back() < 200)
        raise("InvalidArgument", "schatten_tail needs >= 3 truncation sizes, largest >= 200");

    const int n_max = sizes.back();
    const auto norms = monomial_norms(w, 2.0, n_max, 1e-10);
    const auto full = tg_matrix(g, norms, n_max);

    SchattenTail out;
    out.sizes = sizes;
    for (int n : sizes) {
        linalg::Matrix sub(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) sub.at(i, j) = full.entries.at(i, j);
        const auto ev = linalg::hermitian_eigenvalues(linalg::gram(sub));
        double sum = 0.0;
        for (double lambda : ev) sum += std::pow(std::sqrt(std::max(lambda, 0.0)), p);
        out.partial_sums.push_back(sum);
        out.norms.push_back(std::pow(sum, 1.0 / p));
    }
    const double last = out.norms.back();
    const double prev = out.norms[out.norms.size() - 2];
    out.convergent = last > 0 && std::abs(last - prev) / last <= 0.02;
    return out;
}

LogEnvelope derivative_envelope(const EntireFunction& g) {
    const EntireFunction gp = g.derivative();
    return [gp](double r) {
        return numerics::log_circle_mean(gp, r, std::numeric_limits<double>::infinity());
    };
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Bounded: return "Bounded";
        case Verdict::VanishesAtInfinity: return "VanishesAtInfinity";
        case Verdict::Unbounded: return "Unbounded";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::string tail_verdict_name(TailVerdict v) {
    switch (v) {
        case TailVerdict::Finite: return "Finite";
        case TailVerdict::Divergent: return "Divergent";
        case TailVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

CriterionReport tg_bounded_criterion(const LogEnvelope& env, const RadialWeight& w, double p,
                                     double q, const std::vector<double>& r_grid) {
    if (!(p > 0) || !(q > 0) || !(p <= q))
        raise("InvalidArgument", "tg_bounded_criterion needs 0 < p <= q");
    if (r_grid.size() < 8) raise("InvalidArgument", "criterion grid too short");

    CriterionReport rep;
    rep.quantity_name = "|g'| (Delta phi)^{(q-p)/(pq)} / (1 + phi')";
    rep.r_grid = r_grid;
    const double expo = (q - p) / (p * q);
    bool all_zero = true;
    for (double r : r_grid) {
        const double e = env(r);
        const double lv = e == -kInf ? -kInf : e + expo * w.log_laplacian(r) - w.log1p_dphi(r);
        if (lv != -kInf) all_zero = false;
        rep.log_values.push_back(lv);
    }
    if (all_zero) {
        rep.log_sup_estimate = -kInf;
        rep.verdict = Verdict::VanishesAtInfinity; // g constant: zero operator
        return rep;
    }
    rep.log_sup_estimate = *std::max_element(rep.log_values.begin(), rep.log_values.end());
    const double slope = tail_slope_fit(r_grid, rep.log_values, 0.5);
    const double slope_last = tail_slope_fit(r_grid, rep.log_values, 0.25);
    rep.loglog_slope_tail = slope;

    const double first = rep.log_values.front();
    const double last = rep.log_values.back();
    if (slope >= 0.05) {
        rep.verdict = Verdict::Unbounded;
    } else if (slope < -0.05 && last < first - std::log(10.0)) {
        rep.verdict = Verdict::VanishesAtInfinity;
    } else if (slope <= 0.0) {
        rep.verdict = Verdict::Bounded;
    } else {
        // tiny positive slope: bounded approach to a constant shows a
        // decaying local slope; a genuine small power keeps it
        rep.verdict = slope_last <= 0.5 * slope ? Verdict::Bounded : Verdict::Inconclusive;
    }
    return rep;
}

TailIntegral schatten_integral_criterion(const LogEnvelope& env, const RadialWeight& w,
                                         double p, double r_hi) {
    if (!(p > 0)) raise("InvalidArgument", "schatten criterion needs p > 0");
    const auto grid = log_grid(1.0, r_hi, 160);
    std::vector<double> log_f;
    bool all_zero = true;
    for (double r : grid) {
        const double e = env(r);
        double lv = -kInf;
        if (e != -kInf) {
            lv = p * (e - w.log1p_dphi(r)) + w.log_laplacian(r) + std::log(r) +
                 std::log(2.0 * M_PI);
            all_zero = false;
        }
        log_f.push_back(lv);
    }
    TailIntegral out;
    out.cw5_sup = cw5_supremum(w, grid);
    if (all_zero) {
        out.log_integral = -kInf;
        out.verdict = TailVerdict::Finite; // g constant: zero integral
        return out;
    }
    out.log_integral = log_trapezoid(grid, log_f);
    out.tail_slope = tail_slope_fit(grid, log_f, 0.3);
    out.verdict = classify_tail(out.tail_slope);
    out.log_norm = out.log_integral / p;
    return out;
}

TailIntegral tg_qlp_criterion(const LogEnvelope& env, const RadialWeight& w, double p,
                              double q, double r_hi) {
    if (!(q > 0) || !(q < p)) raise("InvalidArgument", "tg_qlp_criterion needs 0 < q < p");
    const double r_exp = p * q / (p - q);
    const auto grid = log_grid(1.0, r_hi, 160);
    std::vector<double> log_f;
    bool all_zero = true;
    for (double r : grid) {
        const double e = env(r);
        double lv = -kInf;
        if (e != -kInf) {
            lv = r_exp * (e - w.log1p_dphi(r)) + std::log(r) + std::log(2.0 * M_PI);
            all_zero = false;
        }
        log_f.push_back(lv);
    }
    TailIntegral out;
    if (all_zero) {
        out.log_integral = -kInf;
        out.log_norm = -kInf;
        out.verdict = TailVerdict::Finite;
        return out;
    }
    out.log_integral = log_trapezoid(grid, log_f);
    out.tail_slope = tail_slope_fit(grid, log_f, 0.3);
    out.verdict = classify_tail(out.tail_slope);
    out.log_norm = out.log_integral / r_exp;
    return out;
}

DegreeVerdict degree_threshold(const RadialWeight& w, double p, double q, int g_degree) {
    if (!(p > 0) || !(q > 0)) raise("OutOfCaseRange", "need p, q > 0");
    if (g_degree < 0) raise("OutOfCaseRange", "need deg g >= 0");
    DegreeVerdict out;
    const int d = g_degree;

    switch (w.family()) {
        case WeightFamily::Power: {
            const double alpha = w.parameter();
            if (!(alpha > 2.0)) raise("OutOfCaseRange", "power case needs alpha > 2");
            if (p <= q) {
                const double expr = 1.0 + (alpha - 2.0) * (1.0 - 1.0 / p + 1.0 / q);
                const double threshold = 1.0 + expr; // 2 + (alpha-2)(1 - 1/p + 1/q)
                out.bounded = expr < 0.0 ? (d == 0) : (d <= threshold);
                out.compact = expr <= 0.0 ? (d == 0) : (d < threshold);
            } else {
                const double q_crit = 2.0 * p / (p * (alpha - 1.0) + 2.0);
                if (q <= q_crit) {
                    out.bounded = (d == 0);
                    out.compact = (d == 0);
                } else {
                    const double r = p * q / (p - q);
                    out.bounded = d < alpha - 2.0 / r;
                    out.compact = out.bounded;
                }
            }
            return out;
        }
        case WeightFamily::Exponential: {
            const double diff = 1.0 / p - 1.0 / q;
            if (p <= q) {
                if (diff > 1.0) {
                    out.bounded = (d == 0);
                } else if (diff == 1.0) {
                    out.bounded = (d <= 1);
                } else {
                    out.bounded = true; // every polynomial; genuine growth needs the sup condition
                    out.sup_condition = "sup_z |g'(z)| e^{(1/p - 1/q - 1)|z|} < inf";
                }
                out.compact = diff >= 1.0 ? (d == 0) : true;
            } else {
                out.bounded = true;
                out.compact = true;
                out.sup_condition = "int (|g'| e^{-beta |z|})^{pq/(p-q)} dm < inf";
            }
            return out;
        }
        case WeightFamily::DoubleExponential: {
            const double diff = 1.0 / p - 1.0 / q;
            if (p <= q) {
                if (diff >= 1.0) {
                    out.bounded = (d == 0);
                    out.compact = (d == 0);
                } else {
                    out.bounded = true;
                    out.compact = true;
                    out.sup_condition =
                        "sup_z |g'(z)| e^{|z| + (1/p - 1/q - 1)(2|z| + e^{|z|})} < inf";
                }
            } else {
                out.bounded = true;
                out.compact = true;
                out.sup_condition = "int (|g'| e^{-|z| - e^{|z|}})^{pq/(p-q)} dm < inf";
            }
            return out;
        }
        default:
            raise("OutOfCaseRange",
                  "degree thresholds cover power, exp and doubleexp weights only");
    }
}

KernelNorm kernel_norm(const MonomialNorms& p2_norms, const RadialWeight& w, double abs_z) {
    if (p2_norms.p != 2.0) raise("InvalidArgument", "kernel norm needs p = 2 norms");
    if (abs_z < 0) raise("InvalidArgument", "kernel norm needs |z| >= 0");

    std::vector<double> terms;
    double running_max = -kInf;
    const double log_z = abs_z > 0 ? std::log(abs_z) : 0.0;
    for (int n = 0; n <= p2_norms.n_max; ++n) {
        double t;
        if (n == 0) t = -2.0 * p2_norms.log_delta_at(0);
        else if (abs_z == 0.0) t = -kInf;
        else t = 2.0 * n * log_z - 2.0 * p2_norms.log_delta_at(n);
        terms.push_back(t);
        running_max = std::max(running_max, t);
    }
    if (abs_z > 0 && terms.back() > running_max - std::log(1e12))
        raise("TruncationInsufficient",
              "kernel series tail above 1e-12 of its peak at |z| = " + std::to_string(abs_z) +
                  "; raise n_max");
    KernelNorm out;
    out.n_used = p2_norms.n_max;
    out.log_norm_sq = numerics::log_sum_exp(std::move(terms));
    out.check_ratio = std::exp(out.log_norm_sq - 2.0 * w.phi(abs_z) +
                               2.0 * w.log_tau_clamped(std::max(abs_z, 1e-12)));
    return out;
}

KernelNorm kernel_norm(const RadialWeight& w, double abs_z, int n_max) {
    return kernel_norm(monomial_norms(w, 2.0, n_max, 1e-10), w, abs_z);
}

double taylor_tail_norm(const EntireFunction& f, const RadialWeight& w, double p, int m,
                        double tol) {
    if (!(p > 0)) raise("InvalidArgument", "taylor_tail_norm needs p > 0");
    const EntireFunction tail = f.tail_from(m);
    if (tail.is_zero()) return 0.0;
    auto log_h = [&](double s) { return p * numerics::log_circle_mean(tail, s, p); };
    const auto res = numerics::radial_integral(log_h, w, p, 0.0, 0.0, tol);
    return std::exp((std::log(2.0 * M_PI) + res.log_value) / p);
}

} // namespace focklab::operators
