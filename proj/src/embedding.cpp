#include "focklab/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "focklab/errors.hpp"
#include "focklab/numerics.hpp"

namespace focklab::embedding {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log of the local quantity at a before the tau normalisation:
// sum over atoms within D(a, delta tau(a)) of m_i e^{q phi(zeta_i)}
double log_local_mass(const DiscreteMeasure& mu, const RadialWeight& w, double q,
                      double delta, Complex a) {
    const double rad = delta * w.tau_clamped(std::abs(a));
    std::vector<double> terms;
    for (const auto& atom : mu.atoms) {
        if (std::abs(atom.position - a) < rad)
            terms.push_back(std::log(atom.mass) + q * w.phi(std::abs(atom.position)));
    }
    return numerics::log_sum_exp(std::move(terms));
}

double log_local_value(const DiscreteMeasure& mu, const RadialWeight& w, double p, double q,
                       double delta, Complex a) {
    const double lm = log_local_mass(mu, w, q, delta, a);
    if (lm == -kInf) return -kInf;
    return lm - (2.0 * q / p) * w.log_tau_clamped(std::abs(a));
}

void validate_pq_delta(double p, double q, double delta) {
    if (!(p > 0) || !(q > 0)) raise("InvalidArgument", "need p, q > 0");
    if (!(delta > 0)) raise("InvalidArgument", "need delta > 0");
}

} // namespace

DiscreteMeasure DiscreteMeasure::from_csv(std::istream& in) {
    DiscreteMeasure mu;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::stringstream ss(line);
        std::string tok;
        double vals[3];
        int got = 0;
        bool header = false;
        while (std::getline(ss, tok, ',') && got < 3) {
            try {
                std::size_t pos = 0;
                vals[got] = std::stod(tok, &pos);
                if (pos != tok.size() && tok.find_first_not_of(" \t\r", pos) != std::string::npos)
                    throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                // an alphabetic first field on the first line is a header row
                if (line_no == 1 && got == 0) { header = true; break; }
                raise("ParseError", "bad numeric token '" + tok + "' on measure CSV line " +
                                        std::to_string(line_no));
            }
            ++got;
        }
        if (header) continue;
        if (got != 3)
            raise("ParseError",
                  "measure CSV line " + std::to_string(line_no) + " needs x,y,mass");
        if (!(vals[2] > 0))
            raise("InvalidArgument",
                  "mass must be strictly positive on CSV line " + std::to_string(line_no));
        mu.atoms.push_back({Complex(vals[0], vals[1]), vals[2]});
    }
    return mu;
}

DiscreteMeasure DiscreteMeasure::from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise("IoError", "cannot open measure file '" + path + "'");
    return from_csv(in);
}

double DiscreteMeasure::total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.mass;
    return s;
}

double DiscreteMeasure::max_radius() const {
    double r = 0.0;
    for (const auto& a : atoms) r = std::max(r, std::abs(a.position));
    return r;
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
    if (!(factor > 0)) raise("InvalidArgument", "scale factor must be positive");
    DiscreteMeasure out(*this);
    for (auto& a : out.atoms) a.mass *= factor;
    return out;
}

CarlesonReport carleson_sup(const DiscreteMeasure& mu, const RadialWeight& w, double p,
                            double q, double delta, const CenterGrid& grid) {
    validate_pq_delta(p, q, delta);
    if (!(p <= q)) raise("InvalidArgument", "carleson_sup needs p <= q");

    CarlesonReport rep;
    rep.log_k_value = -kInf;
    rep.k_value = 0.0;
    rep.verdict = EmbeddingVerdict::BoundedEvidence;
    if (mu.atoms.empty()) return rep;

    auto consider = [&](Complex a) {
        const double lv = log_local_value(mu, w, p, q, delta, a);
        if (lv > rep.log_k_value) {
            rep.log_k_value = lv;
            rep.argmax_center = a;
        }
    };
    if (grid.n >= 2 && grid.radius > 0) {
        for (int iy = 0; iy < grid.n; ++iy) {
            const double y = -grid.radius + 2.0 * grid.radius * iy / (grid.n - 1);
            for (int ix = 0; ix < grid.n; ++ix) {
                const double x = -grid.radius + 2.0 * grid.radius * ix / (grid.n - 1);
                consider(Complex(x, y));
            }
        }
    }
    for (const auto& atom : mu.atoms) consider(atom.position);

    rep.k_value = std::exp(rep.log_k_value);
    return rep;
}

CarlesonReport carleson_sup_default_grid(const DiscreteMeasure& mu, const RadialWeight& w,
                                         double p, double q, double delta, int grid_n) {
    const double margin = 2.0 * w.tau_clamped(0.0);
    CenterGrid grid{mu.max_radius() + margin, grid_n};
    return carleson_sup(mu, w, p, q, delta, grid);
}

VanishingTrend carleson_vanishing(const DiscreteMeasure& mu, const RadialWeight& w, double p,
                                  double q, double delta, const std::vector<double>& shells,
                                  int samples_per_shell) {
    validate_pq_delta(p, q, delta);
    if (shells.size() < 2) raise("InvalidArgument", "need at least two shell boundaries");

    VanishingTrend tr;
    for (const auto& atom : mu.atoms) {
        const double r = std::abs(atom.position);
        tr.vanish_radius = std::max(tr.vanish_radius, r + delta * w.tau_clamped(r));
    }
    for (std::size_t k = 0; k + 1 < shells.size(); ++k) {
        const double lo = shells[k], hi = shells[k + 1];
        double best = -kInf;
        const int n_r = 4;
        for (int i = 0; i < n_r; ++i) {
            const double r = lo + (hi - lo) * (i + 0.5) / n_r;
            for (int j = 0; j < samples_per_shell; ++j) {
                const double th = 2.0 * M_PI * j / samples_per_shell;
                best = std::max(best, log_local_value(mu, w, p, q, delta, std::polar(r, th)));
            }
        }
        // atoms inside the shell are candidate centers too
        for (const auto& atom : mu.atoms) {
            const double r = std::abs(atom.position);
            if (r >= lo && r < hi)
                best = std::max(best, log_local_value(mu, w, p, q, delta, atom.position));
        }
        tr.shell_radius.push_back(0.5 * (lo + hi));
        tr.shell_log_max.push_back(best);
    }

    const double last = tr.shell_log_max.back();
    bool decreasing = true;
    for (std::size_t k = 0; k + 1 < tr.shell_log_max.size(); ++k)
        if (tr.shell_log_max[k + 1] > tr.shell_log_max[k] + 1e-12) decreasing = false;
    tr.verdict = (last == -kInf || (decreasing && last < tr.shell_log_max.front()))
                     ? EmbeddingVerdict::CompactEvidence
                     : EmbeddingVerdict::Inconclusive;
    return tr;
}

CenterGrid qlp_default_grid(const DiscreteMeasure& mu, const RadialWeight& w, double delta,
                            double cells_per_disc) {
    CenterGrid grid;
    double support = 0.0, min_scale = kInf;
    for (const auto& atom : mu.atoms) {
        const double r = std::abs(atom.position);
        const double scale = delta * w.tau_clamped(r);
        support = std::max(support, r + scale);
        min_scale = std::min(min_scale, scale);
    }
    if (mu.atoms.empty()) {
        grid.radius = 1.0;
        grid.n = 8;
        return grid;
    }
    grid.radius = support * 1.02;
    const double cell = min_scale / cells_per_disc;
    grid.n = std::min(4000, static_cast<int>(std::ceil(2.0 * grid.radius / cell)));
    return grid;
}

QlpNorm carleson_qlp(const DiscreteMeasure& mu, const RadialWeight& w, double p, double q,
                     double delta, const CenterGrid& grid) {
    validate_pq_delta(p, q, delta);
    if (!(q < p)) raise("InvalidArgument", "carleson_qlp needs q < p");
    if (grid.n < 2 || !(grid.radius > 0)) raise("InvalidArgument", "bad qlp grid");

    QlpNorm out;
    out.exponent = p / (p - q);
    if (mu.atoms.empty()) {
        out.log_norm = -kInf;
        out.norm = 0.0;
        return out;
    }
    // midpoint rule over [-R, R]^2; F(z) = tau^{-2} * local mass
    const double h = 2.0 * grid.radius / grid.n;
    std::vector<double> terms;
    for (int iy = 0; iy < grid.n; ++iy) {
        const double y = -grid.radius + (iy + 0.5) * h;
        for (int ix = 0; ix < grid.n; ++ix) {
            const double x = -grid.radius + (ix + 0.5) * h;
            const Complex z(x, y);
            const double lm = log_local_mass(mu, w, q, delta, z);
            if (lm == -kInf) continue;
            const double log_f = lm - 2.0 * w.log_tau_clamped(std::abs(z));
            terms.push_back(out.exponent * log_f);
        }
    }
    const double log_integral = numerics::log_sum_exp(std::move(terms)) + 2.0 * std::log(h);
    out.log_norm = log_integral / out.exponent;
    out.norm = std::exp(out.log_norm);
    return out;
}

EmpiricalEmbedding embedding_empirical(const DiscreteMeasure& mu, const RadialWeight& w,
                                       double p, double q,
                                       const std::vector<EntireFunction>& sample_fns) {
    if (!(p > 0) || !(q > 0)) raise("InvalidArgument", "need p, q > 0");
    if (sample_fns.size() < 5)
        raise("InvalidArgument", "embedding_empirical needs at least 5 sample functions");

    EmpiricalEmbedding out;
    for (const auto& f : sample_fns) {
        if (f.is_zero()) {
            out.ratios.push_back(0.0);
            continue;
        }
        std::vector<double> terms;
        for (const auto& atom : mu.atoms) {
            const double v = std::abs(f.evaluate(atom.position));
            if (v > 0) terms.push_back(std::log(atom.mass) + q * std::log(v));
        }
        const double log_lq = numerics::log_sum_exp(std::move(terms)) / q;

        auto log_h = [&](double s) { return p * numerics::log_circle_mean(f, s, p); };
        const double log_fock =
            (std::log(2.0 * M_PI) +
             numerics::radial_integral(log_h, w, p, 0.0, 0.0, 1e-9).log_value) /
            p;
        out.ratios.push_back(std::exp(log_lq - log_fock));
    }
    out.ratio_max = *std::max_element(out.ratios.begin(), out.ratios.end());
    return out;
}

NonNestingTrend nonnested_witness(const RadialWeight& w, double p, double q,
                                  const std::vector<double>& r_grid) {
    if (!(p > 0) || !(q > 0)) raise("InvalidArgument", "need p, q > 0");
    NonNestingTrend tr;
    tr.r_grid = r_grid;
    const double expo = 2.0 * (1.0 - q / p);
    for (double r : r_grid)
        tr.values.push_back(std::exp(expo * w.log_tau_clamped(r)));
    tr.strictly_increasing = true;
    for (std::size_t i = 0; i + 1 < tr.values.size(); ++i)
        if (!(tr.values[i + 1] > tr.values[i])) tr.strictly_increasing = false;
    tr.growth = tr.values.empty() ? 0.0 : tr.values.back() / tr.values.front();
    return tr;
}

} // namespace focklab::embedding
