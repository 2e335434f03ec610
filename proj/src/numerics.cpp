#include "focklab/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "focklab/errors.hpp"

namespace focklab::numerics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr long long kEvalBudget = 10'000'000;

// 7-point Gauss-Legendre on [-1, 1]. Positive weights, so a panel value in
// log space is a log-sum-exp over the node terms.
constexpr std::array<double, 7> kGlNode = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
    0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
constexpr std::array<double, 7> kGlWeight = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694,
    0.3818300505051189, 0.2797053914892767, 0.1294849661688697};

double lse_fixed(std::array<double, 7> t) {
    std::sort(t.begin(), t.end(), std::greater<>());
    if (t[0] == -kInf) return -kInf;
    double acc = 0.0;
    for (double x : t) acc += std::exp(x - t[0]);
    return t[0] + std::log(acc);
}

struct RefineContext {
    const LogIntegrand* log_f = nullptr;
    double tol = 1e-9;
    int max_depth = 60;
    double negligible_log = -kInf;
    long long evals = 0;
    std::vector<double> panel_logs;
    std::vector<double> panel_err_logs; // log of absolute error contribution
};

double gl7_panel(RefineContext& ctx, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    std::array<double, 7> terms{};
    for (int i = 0; i < 7; ++i)
        terms[i] = std::log(kGlWeight[i]) + (*ctx.log_f)(mid + half * kGlNode[i]);
    ctx.evals += 7;
    if (half <= 0.0) return -kInf;
    return std::log(half) + lse_fixed(terms);
}

void refine(RefineContext& ctx, double a, double b, double whole, int depth) {
    if (ctx.evals > kEvalBudget)
        raise("ToleranceNotMet", "quadrature evaluation budget (1e7) exhausted");
    const double mid = 0.5 * (a + b);
    const double left = gl7_panel(ctx, a, mid);
    const double right = gl7_panel(ctx, mid, b);
    const double sum = log_add(left, right);

    double rel;
    if (sum == -kInf && whole == -kInf) rel = 0.0;
    else if (sum == -kInf || whole == -kInf) rel = 1.0;
    else rel = std::abs(std::expm1(whole - sum));

    // Log values of magnitude |L| carry an absolute rounding error of about
    // eps*|L|; relative differences below that floor are not resolvable and
    // chasing them would split panels forever.
    const double log_mag = (std::isfinite(whole) && std::isfinite(sum))
                               ? std::max(std::abs(whole), std::abs(sum))
                               : 0.0;
    const double rel_floor = 8.0 * 2.3e-16 * (1.0 + log_mag);

    if (rel <= std::max(ctx.tol, rel_floor) || depth >= ctx.max_depth ||
        sum < ctx.negligible_log || mid <= a || mid >= b) {
        ctx.panel_logs.push_back(sum);
        ctx.panel_err_logs.push_back(sum == -kInf ? -kInf
                                                  : sum + std::log(std::max(rel, 1e-18)));
        return;
    }
    refine(ctx, a, mid, left, depth + 1);
    refine(ctx, mid, b, right, depth + 1);
}

LogQuadratureResult integrate_panels(RefineContext& ctx, const std::vector<double>& breaks) {
    std::vector<double> coarse(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        coarse[i] = gl7_panel(ctx, breaks[i], breaks[i + 1]);
    ctx.negligible_log = log_sum_exp(coarse) - 52.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        refine(ctx, breaks[i], breaks[i + 1], coarse[i], 0);

    LogQuadratureResult res;
    res.log_value = log_sum_exp(ctx.panel_logs);
    const double err_log = log_sum_exp(ctx.panel_err_logs);
    res.rel_error_estimate =
        res.log_value == -kInf ? 0.0 : std::exp(err_log - res.log_value);
    res.n_evals = ctx.evals;
    return res;
}

} // namespace

double log_add(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    if (a < b) std::swap(a, b);
    if (a == kInf) return kInf;
    return a + std::log1p(std::exp(b - a));
}

double log_sum_exp(std::vector<double> terms) {
    std::sort(terms.begin(), terms.end(), std::greater<>());
    if (terms.empty() || terms.front() == -kInf) return -kInf;
    if (terms.front() == kInf) return kInf;
    double acc = 0.0;
    for (double x : terms) acc += std::exp(x - terms.front());
    return terms.front() + std::log(acc);
}

LogQuadratureResult log_integrate(const LogIntegrand& log_f, double a, double b,
                                  double tol, int max_depth) {
    if (!(a <= b)) raise("InvalidArgument", "log_integrate needs a <= b");
    LogQuadratureResult empty;
    empty.r_cut = b;
    if (a == b) return empty;

    RefineContext ctx;
    ctx.log_f = &log_f;
    ctx.tol = 0.5 * tol;
    ctx.max_depth = max_depth;
    std::vector<double> breaks;
    const int seed = 16;
    for (int i = 0; i <= seed; ++i) breaks.push_back(a + (b - a) * i / seed);
    auto res = integrate_panels(ctx, breaks);
    res.r_cut = b;
    return res;
}

LogQuadratureResult radial_integral(const LogIntegrand& log_h, const RadialWeight& w,
                                    double p, double r_lo, double extra_power,
                                    double tol) {
    if (!(tol >= 1e-12 && tol <= 1e-3))
        raise("InvalidArgument", "radial_integral needs tol in [1e-12, 1e-3]");
    if (r_lo < 0) raise("InvalidArgument", "radial_integral needs r_lo >= 0");
    const double pow1 = 1.0 + extra_power;
    if (pow1 < 0) raise("InvalidArgument", "radial_integral needs extra_power >= -1");

    // log of the s-space integrand h(s) s^{1+extra_power} e^{-p phi(s)}
    auto log_f = [&](double s) -> double {
        if (s <= 0.0) return pow1 > 0.0 ? -kInf : log_h(s) - w.neg_log_density(p, s);
        const double lh = log_h(s);
        if (lh == -kInf) return -kInf;
        double v = lh + pow1 * std::log(s) - w.neg_log_density(p, s);
        return std::isnan(v) ? -kInf : v;
    };

    // --- Tail scan: find the cut radius with its negligibility certificate.
    // Work on the y-space density e^{Ly}, Ly(s) = log f(s) + log s, which is
    // what a log-substituted panel integrates; the certificate itself is
    // checked on the s-space density.
    const double s_start = std::max(r_lo, 1e-4);
    double s = s_start;
    double max_ls = -kInf, arg_max = s_start;
    double max_ly = -kInf;
    double prev_ly = -kInf, prev_logs = std::log(s_start);
    double lambda = 0.0;          // trailing log-log slope of the y-density
    int decreasing_run = 0;
    double log_total_est = -kInf; // coarse running estimate of the integral
    double cut = -1.0, cut_lambda = -1.0, cut_ly = -kInf;

    for (int iter = 0; iter < 200000; ++iter) {
        const double ls = log_f(s);
        const double logs = std::log(s);
        const double ly = ls == -kInf ? -kInf : ls + logs;
        if (ls > max_ls) { max_ls = ls; arg_max = s; }
        if (ly > max_ly) max_ly = ly;
        if (iter > 0 && ly < prev_ly) {
            ++decreasing_run;
            if (ly != -kInf && prev_ly != -kInf)
                lambda = (ly - prev_ly) / (logs - prev_logs);
            else
                lambda = -kInf;
        } else if (ly >= prev_ly) {
            decreasing_run = 0;
        }
        // trapezoid mass of this step, coarse but enough for thresholds
        if (iter > 0 && ly != -kInf)
            log_total_est = log_add(log_total_est, ly + std::log(logs - prev_logs));

        const bool certified = ls <= max_ls - 69.2;
        if (s > arg_max && decreasing_run >= 5 && lambda <= -0.05 && certified) {
            const double log_tail = ly - std::log(std::max(0.05, -lambda));
            if (log_tail <= log_total_est + std::log(tol) - 2.3 || ly == -kInf) {
                cut = s;
                cut_lambda = lambda;
                cut_ly = ly;
                break;
            }
        }
        if (s > 1e4 && decreasing_run < 5 && iter > 50)
            raise("NonDecayingTail",
                  "integrand for " + w.spec_string() + " not decreasing by r = 1e4");
        if (s > 1e300)
            raise("DivergentTail",
                  "tail for " + w.spec_string() + " decays too slowly to certify");
        prev_ly = ly;
        prev_logs = logs;
        s = s * 1.03 + 1e-4;
    }
    if (cut < 0) raise("DivergentTail", "no tail cut found for " + w.spec_string());

    if (cut <= r_lo) {
        LogQuadratureResult res;
        res.r_cut = r_lo;
        return res;
    }

    // --- Panel seeding: resolve the peak region linearly, the tail
    // geometrically, then refine adaptively.
    std::vector<double> breaks{r_lo};
    const double lin_end =
        std::min(cut, std::max({2.0 * arg_max, r_lo + 4.0 * (arg_max - r_lo), r_lo * 1.5}));
    if (lin_end > r_lo) {
        for (int i = 1; i <= 12; ++i) breaks.push_back(r_lo + (lin_end - r_lo) * i / 12.0);
    }
    if (cut > lin_end) {
        const double ratio = cut / std::max(lin_end, 1e-300);
        const int m = std::max(4, static_cast<int>(6.0 * std::log10(std::max(ratio, 1.0))) + 2);
        for (int i = 1; i <= m; ++i)
            breaks.push_back(lin_end * std::pow(ratio, static_cast<double>(i) / m));
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    if (breaks.back() < cut) breaks.push_back(cut);

    RefineContext ctx;
    LogIntegrand lf = log_f;
    ctx.log_f = &lf;
    ctx.tol = 0.5 * tol;
    auto res = integrate_panels(ctx, breaks);
    res.r_cut = cut;

    if (res.log_value != -kInf && cut_ly != -kInf) {
        const double log_tail = cut_ly - std::log(std::max(0.05, -cut_lambda));
        res.rel_error_estimate += std::exp(log_tail - res.log_value);
    }
    const double resolvable =
        20.0 * 2.3e-16 * (1.0 + (std::isfinite(res.log_value) ? std::abs(res.log_value) : 0.0));
    if (res.rel_error_estimate > std::max(10.0 * tol, resolvable))
        raise("ToleranceNotMet", "requested tolerance not met for " + w.spec_string());
    return res;
}

double log_circle_mean(const EntireFunction& f, double r, double q, int n_nodes) {
    if (f.is_zero()) return -kInf;
    if (!(q > 0)) raise("InvalidArgument", "circle_mean needs q > 0");
    if (r < 0) raise("InvalidArgument", "circle_mean needs r >= 0");
    if (r == 0.0) {
        const double a0 = std::abs(f.coeff(0));
        return a0 == 0.0 ? -kInf : std::log(a0);
    }
    const int deg = f.degree();
    const int n = std::max({n_nodes, 4 * (deg + 1), 16});
    const double two_pi = 2.0 * M_PI;

    if (std::isinf(q)) {
        double best = -1.0, best_t = 0.0;
        for (int j = 0; j < n; ++j) {
            const double t = two_pi * j / n;
            const double v = f.abs_at(r, t);
            if (std::isinf(v)) raise("NumericOverflow", "|f| overflows on circle r = " + std::to_string(r));
            if (v > best) { best = v; best_t = t; }
        }
        double spacing = two_pi / n;
        for (int round = 0; round < 3; ++round) {
            const double lo = best_t - spacing, step = 2.0 * spacing / 16.0;
            for (int j = 0; j <= 16; ++j) {
                const double t = lo + j * step;
                const double v = f.abs_at(r, t);
                if (v > best) { best = v; best_t = t; }
            }
            spacing /= 8.0;
        }
        return best == 0.0 ? -kInf : std::log(best);
    }

    // Scaled trapezoid mean of |f|^q: on a full period this is the
    // rectangle rule, spectrally accurate; for q = 2 with n > 2 deg it is
    // exact (Parseval).
    std::vector<double> vals(static_cast<std::size_t>(n));
    double m = 0.0;
    for (int j = 0; j < n; ++j) {
        const double v = f.abs_at(r, two_pi * j / n);
        if (std::isinf(v)) raise("NumericOverflow", "|f| overflows on circle r = " + std::to_string(r));
        vals[static_cast<std::size_t>(j)] = v;
        m = std::max(m, v);
    }
    if (m == 0.0) return -kInf;
    double acc = 0.0;
    for (double v : vals) acc += std::pow(v / m, q);
    return std::log(m) + std::log(acc / n) / q;
}

double circle_mean(const EntireFunction& f, double r, double q, int n_nodes) {
    const double lm = log_circle_mean(f, r, q, n_nodes);
    if (lm == -kInf) return 0.0;
    const double v = std::exp(lm);
    if (std::isinf(v)) raise("NumericOverflow", "circle mean overflows at r = " + std::to_string(r));
    return v;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        raise("InvalidArgument", "fit_slope needs matching vectors of size >= 2");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace focklab::numerics
