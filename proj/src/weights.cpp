#include "focklab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "focklab/errors.hpp"

namespace focklab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_param(const std::string& tok, const std::string& spec) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        raise("ParseError", "bad parameter token '" + tok + "' in weight spec '" + spec + "'");
    }
}

} // namespace

RadialWeight RadialWeight::power(double alpha) {
    if (alpha <= 0) raise("InvalidArgument", "power weight needs alpha > 0");
    return RadialWeight(WeightFamily::Power, alpha);
}
RadialWeight RadialWeight::exponential(double beta) {
    if (beta <= 0) raise("InvalidArgument", "exponential weight needs beta > 0");
    return RadialWeight(WeightFamily::Exponential, beta);
}
RadialWeight RadialWeight::double_exponential() {
    return RadialWeight(WeightFamily::DoubleExponential, 0.0);
}
RadialWeight RadialWeight::gaussian() { return RadialWeight(WeightFamily::Gaussian, 0.0); }
RadialWeight RadialWeight::logarithmic(double a) {
    if (a <= 0) raise("InvalidArgument", "logarithmic weight needs a > 0");
    return RadialWeight(WeightFamily::Logarithmic, a);
}

RadialWeight RadialWeight::parse(std::string_view spec_view) {
    const std::string spec(spec_view);
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const bool has_param = colon != std::string::npos;
    const std::string rest = has_param ? spec.substr(colon + 1) : std::string();

    if (head == "power") {
        if (!has_param) raise("ParseError", "weight spec 'power' needs a parameter, e.g. power:3");
        return power(parse_param(rest, spec));
    }
    if (head == "exp") {
        if (!has_param) raise("ParseError", "weight spec 'exp' needs a parameter, e.g. exp:1.5");
        return exponential(parse_param(rest, spec));
    }
    if (head == "doubleexp") return double_exponential();
    if (head == "gauss") return gaussian();
    if (head == "log") {
        if (!has_param) raise("ParseError", "weight spec 'log' needs a parameter, e.g. log:4");
        return logarithmic(parse_param(rest, spec));
    }
    raise("ParseError", "unknown weight family '" + head + "' in weight spec '" + spec + "'");
}

std::string RadialWeight::spec_string() const {
    auto num = [](double v) {
        std::string s = std::to_string(v);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    };
    switch (family_) {
        case WeightFamily::Power: return "power:" + num(param_);
        case WeightFamily::Exponential: return "exp:" + num(param_);
        case WeightFamily::DoubleExponential: return "doubleexp";
        case WeightFamily::Gaussian: return "gauss";
        case WeightFamily::Logarithmic: return "log:" + num(param_);
    }
    return "?";
}

double RadialWeight::phi(double r) const {
    switch (family_) {
        case WeightFamily::Power: return std::pow(r, param_);
        case WeightFamily::Exponential: return std::exp(param_ * r);
        case WeightFamily::DoubleExponential: return std::exp(std::exp(r));
        case WeightFamily::Gaussian: return 0.5 * r * r;
        case WeightFamily::Logarithmic: return param_ * std::log1p(r);
    }
    return 0.0;
}

double RadialWeight::dphi(double r) const {
    switch (family_) {
        case WeightFamily::Power: return param_ * std::pow(r, param_ - 1.0);
        case WeightFamily::Exponential: return param_ * std::exp(param_ * r);
        case WeightFamily::DoubleExponential: return std::exp(r + std::exp(r));
        case WeightFamily::Gaussian: return r;
        case WeightFamily::Logarithmic: return param_ / (1.0 + r);
    }
    return 0.0;
}

double RadialWeight::ddphi(double r) const {
    switch (family_) {
        case WeightFamily::Power: return param_ * (param_ - 1.0) * std::pow(r, param_ - 2.0);
        case WeightFamily::Exponential: return param_ * param_ * std::exp(param_ * r);
        case WeightFamily::DoubleExponential: {
            const double er = std::exp(r);
            return (er + er * er) * std::exp(er);
        }
        case WeightFamily::Gaussian: return 1.0;
        case WeightFamily::Logarithmic: return -param_ / ((1.0 + r) * (1.0 + r));
    }
    return 0.0;
}

double RadialWeight::dddphi(double r) const {
    switch (family_) {
        case WeightFamily::Power:
            return param_ * (param_ - 1.0) * (param_ - 2.0) * std::pow(r, param_ - 3.0);
        case WeightFamily::Exponential: return param_ * param_ * param_ * std::exp(param_ * r);
        case WeightFamily::DoubleExponential: {
            const double er = std::exp(r);
            return std::exp(r + er) * (1.0 + 3.0 * er + er * er);
        }
        case WeightFamily::Gaussian: return 0.0;
        case WeightFamily::Logarithmic: {
            const double u = 1.0 + r;
            return 2.0 * param_ / (u * u * u);
        }
    }
    return 0.0;
}

double RadialWeight::laplacian(double r) const {
    if (r == 0.0) {
        // r -> 0+ limit of phi'' + phi'/r.
        switch (family_) {
            case WeightFamily::Power:
                if (param_ > 2.0) return 0.0;
                if (param_ == 2.0) return 4.0;
                return kInf;
            case WeightFamily::Gaussian: return 2.0;
            default: return kInf;
        }
    }
    return std::exp(log_laplacian(r));
}

double RadialWeight::tau(double r) const {
    const double lap = laplacian(r);
    if (lap <= 0.0) raise("NonpositiveLaplacian", "Delta phi <= 0 at r = " + std::to_string(r));
    return 1.0 / std::sqrt(lap);
}

double RadialWeight::log_dphi(double r) const {
    switch (family_) {
        case WeightFamily::Power: return std::log(param_) + (param_ - 1.0) * std::log(r);
        case WeightFamily::Exponential: return std::log(param_) + param_ * r;
        case WeightFamily::DoubleExponential: return r + std::exp(r);
        case WeightFamily::Gaussian: return std::log(r);
        case WeightFamily::Logarithmic: return std::log(param_) - std::log1p(r);
    }
    return -kInf;
}

double RadialWeight::log1p_dphi(double r) const {
    const double ld = log_dphi(r);
    if (ld > 36.0) return ld; // 1 + phi' == phi' to double precision
    return std::log1p(std::exp(ld));
}

double RadialWeight::log_laplacian(double r) const {
    if (r <= 0.0) raise("InvalidArgument", "log_laplacian needs r > 0");
    switch (family_) {
        case WeightFamily::Power:
            return 2.0 * std::log(param_) + (param_ - 2.0) * std::log(r);
        case WeightFamily::Exponential:
            return param_ * r + std::log(param_ * param_ + param_ / r);
        case WeightFamily::DoubleExponential:
            // e^{e^r} (e^r + e^{2r} + e^r/r) = e^{e^r + 2r} (1 + (1 + 1/r) e^{-r})
            return std::exp(r) + 2.0 * r + std::log1p((1.0 + 1.0 / r) * std::exp(-r));
        case WeightFamily::Gaussian: return std::log(2.0);
        case WeightFamily::Logarithmic:
            return std::log(param_) - std::log(r) - 2.0 * std::log1p(r);
    }
    return -kInf;
}

double RadialWeight::tau_clamped(double r) const {
    const double t1 = tau(1.0);
    if (r <= 0.9) return t1;
    if (r >= 1.1) return tau(r);
    const double t11 = tau(1.1);
    return t1 + (r - 0.9) / 0.2 * (t11 - t1);
}

double RadialWeight::log_tau_clamped(double r) const {
    if (r >= 1.1) return log_tau(r);
    return std::log(tau_clamped(r));
}

bool RadialWeight::class_I_candidate() const {
    switch (family_) {
        case WeightFamily::Power: return param_ > 2.0;
        case WeightFamily::Exponential:
        case WeightFamily::DoubleExponential: return true;
        default: return false;
    }
}

double RadialWeight::radius_with_neg_log_density_below(double p, double cap) const {
    if (p <= 0) raise("InvalidArgument", "need p > 0");
    if (neg_log_density(p, 0.0) > cap) return 0.0;
    double hi = 1.0;
    while (hi < 1e12 && neg_log_density(p, hi) <= cap) hi *= 2.0;
    if (neg_log_density(p, hi) <= cap) return hi;
    double lo = hi / 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (neg_log_density(p, mid) <= cap ? lo : hi) = mid;
    }
    return lo;
}

WeightProfile weight_profile(const RadialWeight& w, double r) {
    if (r < 0) raise("InvalidArgument", "weight_profile needs r >= 0");
    WeightProfile pr{};
    pr.phi = w.phi(r);
    pr.dphi = w.dphi(r);
    pr.ddphi = w.ddphi(r);
    pr.laplacian = w.laplacian(r);
    if (pr.laplacian <= 0.0)
        raise("NonpositiveLaplacian",
              "Delta phi <= 0 at r = " + std::to_string(r) + " for " + w.spec_string());
    pr.tau = std::isinf(pr.laplacian) ? 0.0 : 1.0 / std::sqrt(pr.laplacian);
    return pr;
}

ClassIReport class_I_report(const RadialWeight& w, const std::vector<double>& r_grid) {
    if (r_grid.size() < 8) raise("GridTooShort", "class_I_report needs at least 8 grid points");
    for (std::size_t i = 0; i + 1 < r_grid.size(); ++i)
        if (!(r_grid[i] < r_grid[i + 1]))
            raise("InvalidArgument", "grid must be strictly increasing");
    if (r_grid.front() <= 0) raise("InvalidArgument", "grid must be positive");
    if (r_grid.back() < 10.0) raise("GridTooShort", "class_I_report needs max(grid) >= 10");

    ClassIReport rep{};
    const std::size_t n = r_grid.size();

    std::vector<double> log_tau(n);
    rep.laplacian_positive = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double ll = w.log_laplacian(r_grid[i]);
        if (!std::isfinite(ll) && !(ll == std::numeric_limits<double>::infinity())) {
            rep.laplacian_positive = false;
        }
        log_tau[i] = -0.5 * ll;
    }

    rep.tau_decreasing = true;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (r_grid[i] < 1.0) continue;
        if (!(log_tau[i + 1] < log_tau[i])) rep.tau_decreasing = false;
    }

    // tau'(r_max) via central differences of log tau; tau' = tau * (log tau)'.
    const double rmax = r_grid.back();
    const double h = 1e-4 * std::max(1.0, rmax);
    const double dlog = (-0.5 * w.log_laplacian(rmax + h) + 0.5 * w.log_laplacian(rmax - h)) / (2.0 * h);
    const double log_abs_tau_prime = log_tau.back() + std::log(std::max(std::abs(dlog), 1e-300));
    rep.tau_prime_at_rmax = (dlog < 0 ? -1.0 : 1.0) * std::exp(log_abs_tau_prime);
    rep.tau_prime_vanishing = log_abs_tau_prime < std::log(1e-2);

    // Side condition A on the top half of the grid: slopes of -log tau
    // against log r must stay bounded for tau(r) r^C to increase for some
    // fixed C > 0.
    const std::size_t half = n / 2;
    std::vector<double> slope, logr;
    for (std::size_t i = half; i + 1 < n; ++i) {
        slope.push_back(-(log_tau[i + 1] - log_tau[i]) /
                        (std::log(r_grid[i + 1]) - std::log(r_grid[i])));
        logr.push_back(std::log(r_grid[i]));
    }
    if (slope.size() >= 3) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < slope.size(); ++i) {
            sx += logr[i];
            sy += slope[i];
            sxx += logr[i] * logr[i];
            sxy += logr[i] * slope[i];
        }
        const double m = static_cast<double>(slope.size());
        const double trend = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        const double scale = 1.0 + std::abs(sy / m);
        rep.side_condition_A = trend <= 0.05 * scale;
        rep.fitted_C = std::max(0.0, *std::max_element(slope.begin(), slope.end())) + 0.01;
    }

    // Side condition B: |tau' log(1/tau)| decreasing toward 0 on the top half.
    auto log_abs_u = [&](std::size_t i) {
        const double r = r_grid[i];
        const double hh = 1e-4 * std::max(1.0, r);
        const double d = (-0.5 * w.log_laplacian(r + hh) + 0.5 * w.log_laplacian(r - hh)) / (2.0 * hh);
        const double lt = log_tau[i];
        const double log_tau_prime = lt + std::log(std::max(std::abs(d), 1e-300));
        return log_tau_prime + std::log(std::max(std::abs(lt), 1e-300));
    };
    const double u_first = log_abs_u(half);
    const double u_last = log_abs_u(n - 1);
    rep.side_condition_B = u_last < std::log(0.05) && u_last <= u_first + 1e-9;

    rep.in_class_I = rep.laplacian_positive && rep.tau_decreasing && rep.tau_prime_vanishing &&
                     (rep.side_condition_A || rep.side_condition_B);
    return rep;
}

} // namespace focklab
