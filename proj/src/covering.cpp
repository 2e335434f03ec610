#include "focklab/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <unordered_map>

#include "focklab/errors.hpp"
#include "focklab/numerics.hpp"

namespace focklab::covering {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Square grid centered at 0 with odd side, so symmetric points have exactly
// opposite coordinates and radial ties are exact.
struct Grid {
    double step = 0.0;
    int c = 0;  // center index
    int nx = 0; // side length
    double coord(int i) const { return (i - c) * step; }
    long long index(int ix, int iy) const { return static_cast<long long>(iy) * nx + ix; }
    long long size() const { return static_cast<long long>(nx) * nx; }
};

Grid make_grid(double r_max, double step) {
    Grid g;
    g.step = step;
    g.c = static_cast<int>(std::ceil(r_max / step));
    g.nx = 2 * g.c + 1;
    return g;
}

struct BitSet {
    std::vector<std::uint64_t> words;
    explicit BitSet(long long n) : words(static_cast<std::size_t>((n + 63) / 64), 0) {}
    bool test(long long i) const { return (words[i >> 6] >> (i & 63)) & 1u; }
    void set(long long i) { words[i >> 6] |= (std::uint64_t(1) << (i & 63)); }
};

// Apply fn(ix, iy) to all grid points inside the open disc D(z, rad).
// The index ranges are padded by one cell: when rad is an exact multiple of
// the step the rounded bounds can otherwise skip a row whose points sit
// inside by an ulp. The squared-distance predicate is the single source of
// truth for membership.
template <typename Fn>
void for_disc(const Grid& g, Complex z, double rad, Fn&& fn) {
    const double x = z.real(), y = z.imag();
    const int iy_lo = std::max(0, static_cast<int>(std::ceil((y - rad) / g.step)) + g.c - 1);
    const int iy_hi =
        std::min(g.nx - 1, static_cast<int>(std::floor((y + rad) / g.step)) + g.c + 1);
    for (int iy = iy_lo; iy <= iy_hi; ++iy) {
        const double dy = g.coord(iy) - y;
        const double h2 = rad * rad - dy * dy;
        if (h2 <= 0) continue;
        const double h = std::sqrt(h2);
        const int ix_lo = std::max(0, static_cast<int>(std::ceil((x - h) / g.step)) + g.c - 1);
        const int ix_hi =
            std::min(g.nx - 1, static_cast<int>(std::floor((x + h) / g.step)) + g.c + 1);
        for (int ix = ix_lo; ix <= ix_hi; ++ix) {
            const double dx = g.coord(ix) - x;
            if (dx * dx + dy * dy < rad * rad) fn(ix, iy);
        }
    }
}

void check_lipschitz(const RadialScale& t, double r_max, double step) {
    if (r_max <= 0) return;
    double prev = t.value(0.0);
    for (double r = step; r <= r_max + step; r += step) {
        const double cur = t.value(r);
        if (std::abs(cur - prev) > 0.25 * step * (1.0 + 1e-12))
            raise("LipschitzViolation",
                  "empirical 1/4-Lipschitz bound fails between r = " + std::to_string(r - step) +
                      " and r = " + std::to_string(r));
        prev = cur;
    }
}

double radial_lipschitz(const std::function<double(double)>& f, double r_max, int n) {
    if (r_max <= 0) return 0.0;
    const double h = r_max / n;
    double c1 = 0.0, prev = f(0.0);
    for (int i = 1; i <= n; ++i) {
        const double cur = f(i * h);
        c1 = std::max(c1, std::abs(cur - prev) / h);
        prev = cur;
    }
    return c1;
}

} // namespace

RadialScale scaled_tau_profile(const RadialWeight& w, double delta) {
    if (!(delta > 0)) raise("InvalidArgument", "scaled_tau needs delta > 0");
    RadialScale s;
    s.plateau_radius = 0.9;
    s.value = [w, delta](double r) { return delta * w.tau_clamped(r); };
    return s;
}

double scaled_tau(const RadialWeight& w, double delta, Complex z) {
    return delta * w.tau_clamped(std::abs(z));
}

RadialScale constant_scale(double t) {
    if (!(t > 0)) raise("InvalidArgument", "constant scale must be positive");
    RadialScale s;
    s.plateau_radius = kInf;
    s.value = [t](double) { return t; };
    return s;
}

CoveringConfig make_config(const RadialWeight& w, double r_max, double delta_override,
                           double step_override) {
    if (r_max < 0) raise("InvalidArgument", "r_max must be nonnegative");
    CoveringConfig cfg;
    cfg.r_max = r_max;
    cfg.c1_estimate =
        radial_lipschitz([&](double r) { return w.tau_clamped(r); }, std::max(r_max, 2.0), 20000);
    cfg.m_tau = std::min(1.0, cfg.c1_estimate > 0 ? 1.0 / cfg.c1_estimate : kInf) / 4.0;
    cfg.delta = delta_override > 0 ? delta_override : cfg.m_tau;
    if (r_max > 0 && w.tau_clamped(r_max) >= w.tau_clamped(0.0) && r_max > 1.2)
        raise("InvalidArgument", "tau is not decreasing for " + w.spec_string() +
                                     "; covering needs a class-I weight");

    // Halve delta until the empirical 1/4-Lipschitz check of t passes on the
    // grid implied by that delta. For delta <= m_tau this passes outright.
    for (int attempt = 0;; ++attempt) {
        const double step =
            step_override > 0 ? step_override
                              : cfg.delta * w.tau_clamped(std::max(r_max, 1.0)) / 8.0;
        try {
            check_lipschitz(scaled_tau_profile(w, cfg.delta), r_max, step);
            cfg.grid_step = step;
            break;
        } catch (const Error&) {
            if (attempt > 50) throw;
            cfg.delta *= 0.5;
        }
    }
    return cfg;
}

CoveringResult build_covering(const RadialScale& t, const CoveringConfig& cfg) {
    if (cfg.r_max < 0) raise("InvalidArgument", "r_max must be nonnegative");
    CoveringResult out;
    if (cfg.r_max == 0.0) {
        out.centers.push_back(Complex(0.0, 0.0));
        out.radii.push_back(t.value(0.0));
        return out;
    }
    if (!(cfg.grid_step > 0)) raise("GridTooCoarse", "grid_step must be positive");
    const double t_min = t.value(cfg.r_max);
    if (cfg.grid_step > t_min / 8.0 * (1.0 + 1e-12))
        raise("GridTooCoarse", "grid_step must be at most min t / 8");
    check_lipschitz(t, cfg.r_max, cfg.grid_step);

    const Grid g = make_grid(cfg.r_max, cfg.grid_step);
    BitSet covered(g.size());

    auto process = [&](int ix, int iy, double r) {
        const long long idx = g.index(ix, iy);
        if (covered.test(idx)) return;
        const Complex z(g.coord(ix), g.coord(iy));
        const double rad = t.value(r);
        out.centers.push_back(z);
        out.radii.push_back(rad);
        for_disc(g, z, rad, [&](int jx, int jy) { covered.set(g.index(jx, jy)); });
    };

    // Phase 1: the plateau, where t ties exactly; row-major index order.
    const double plateau = std::min(t.plateau_radius, cfg.r_max);
    if (t.plateau_radius > 0) {
        for (int iy = 0; iy < g.nx; ++iy) {
            const double y = g.coord(iy);
            if (std::abs(y) > plateau) continue;
            for (int ix = 0; ix < g.nx; ++ix) {
                const double x = g.coord(ix);
                const double r = std::hypot(x, y);
                if (r <= plateau) process(ix, iy, r);
            }
        }
    }
    if (t.plateau_radius >= cfg.r_max) return out;

    // Phase 2: t strictly decreasing in r, so max-t order is ring order;
    // within a ring sort by (r, index).
    const double w = cfg.grid_step;
    const int k_hi = static_cast<int>(std::ceil(cfg.r_max / w));
    std::vector<std::pair<double, long long>> ring; // (r, index)
    for (int k = static_cast<int>(std::floor(plateau / w)); k <= k_hi; ++k) {
        const double lo = k * w, hi = (k + 1) * w;
        ring.clear();
        const int iy_lo = std::max(0, g.c - static_cast<int>(std::floor(hi / w)) - 1);
        const int iy_hi = std::min(g.nx - 1, g.c + static_cast<int>(std::floor(hi / w)) + 1);
        for (int iy = iy_lo; iy <= iy_hi; ++iy) {
            const double y = g.coord(iy);
            const double hx2 = hi * hi - y * y;
            if (hx2 < 0) continue;
            const double hx = std::sqrt(hx2);
            const double lx2 = lo * lo - y * y;
            const double lx = lx2 > 0 ? std::sqrt(lx2) : 0.0;
            // row meets the annulus in [-hx, -lx] and [lx, hx]; the two
            // merge into [-hx, hx] when the row crosses the inner circle
            const int n_intervals = lx > 0.0 ? 2 : 1;
            for (int side = 0; side < n_intervals; ++side) {
                const double a = side == 1 ? lx : -hx;
                const double b = (side == 0 && n_intervals == 2) ? -lx : hx;
                int ix_lo = std::max(0, static_cast<int>(std::ceil(a / w)) + g.c - 1);
                int ix_hi = std::min(g.nx - 1, static_cast<int>(std::floor(b / w)) + g.c + 1);
                for (int ix = ix_lo; ix <= ix_hi; ++ix) {
                    const double x = g.coord(ix);
                    const double r = std::hypot(x, y);
                    if (r <= plateau || r > cfg.r_max) continue;
                    if (static_cast<int>(r / w) != k) continue;
                    ring.emplace_back(r, g.index(ix, iy));
                }
            }
        }
        std::sort(ring.begin(), ring.end());
        ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
        for (const auto& [r, idx] : ring) {
            const int iy = static_cast<int>(idx / g.nx);
            const int ix = static_cast<int>(idx % g.nx);
            process(ix, iy, r);
        }
    }
    return out;
}

CoveringResult build_covering(const RadialWeight& w, const CoveringConfig& cfg) {
    return build_covering(scaled_tau_profile(w, cfg.delta), cfg);
}

VerificationReport verify_covering(const CoveringResult& cov, const RadialScale& t,
                                   const CoveringConfig& cfg, int n_threads,
                                   std::uint64_t seed) {
    VerificationReport rep;
    const std::size_t m = cov.centers.size();
    if (m == 0 || m != cov.radii.size()) return rep;
    n_threads = std::max(1, n_threads);

    // (i) separation via a spatial hash at the largest radius scale
    const double t_max = *std::max_element(cov.radii.begin(), cov.radii.end());
    const double cell = std::max(t_max, 1e-12);
    auto key = [&](double x, double y) {
        const long long cx = static_cast<long long>(std::floor(x / cell));
        const long long cy = static_cast<long long>(std::floor(y / cell));
        return cx * 2000003LL + cy;
    };
    std::unordered_map<long long, std::vector<int>> hash;
    hash.reserve(m * 2);
    for (std::size_t j = 0; j < m; ++j) {
        const Complex zj = cov.centers[j];
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) {
                const auto it = hash.find(key(zj.real() + dx * cell, zj.imag() + dy * cell));
                if (it == hash.end()) continue;
                for (int k : it->second) {
                    // same squared-distance predicate the construction uses
                    const double ax = zj.real() - cov.centers[k].real();
                    const double ay = zj.imag() - cov.centers[k].imag();
                    if (ax * ax + ay * ay < cov.radii[k] * cov.radii[k])
                        ++rep.separation_violations;
                }
            }
        hash[key(zj.real(), zj.imag())].push_back(static_cast<int>(j));
    }
    rep.separation_ok = rep.separation_violations == 0;

    if (cfg.r_max == 0.0 || !(cfg.grid_step > 0)) {
        rep.coverage_ok = true;
        rep.triple_inclusion_ok = true;
        rep.multiplicity_max = 1;
        rep.multiplicity_histogram = {0, 1};
        return rep;
    }

    const Grid g = make_grid(cfg.r_max, cfg.grid_step);
    const double r2max = cfg.r_max * cfg.r_max;

    // (ii) coverage, rebuilt from the centers alone
    {
        BitSet covered(g.size());
        for (std::size_t j = 0; j < m; ++j)
            for_disc(g, cov.centers[j], cov.radii[j],
                     [&](int ix, int iy) { covered.set(g.index(ix, iy)); });
        for (int iy = 0; iy < g.nx; ++iy) {
            const double y = g.coord(iy);
            for (int ix = 0; ix < g.nx; ++ix) {
                const double x = g.coord(ix);
                const double r2 = x * x + y * y;
                if (r2 > r2max) continue;
                const double r = std::sqrt(r2);
                if (r > cfg.r_max - t.value(r)) continue; // rim: truncation zone
                if (!covered.test(g.index(ix, iy))) ++rep.uncovered_interior_points;
            }
        }
        rep.coverage_ok = rep.uncovered_interior_points == 0;
    }

    // (iii) sampled second-generation inclusion: w in D(z, t(z)), z in
    // D(z_j, t_j) implies |w - z_j| < 3 t_j
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        auto in_disc = [&](Complex center, double rad) {
            while (true) {
                const double a = unit(rng), b = unit(rng);
                if (a * a + b * b < 1.0) return center + Complex(a * rad, b * rad);
            }
        };
        std::uniform_int_distribution<std::size_t> pick(0, m - 1);
        bool ok = true;
        const int n_samples = 2000;
        for (int s = 0; s < n_samples; ++s) {
            const std::size_t j = pick(rng);
            const Complex z = in_disc(cov.centers[j], cov.radii[j]);
            const Complex w = in_disc(z, t.value(std::abs(z)));
            if (std::abs(w - cov.centers[j]) >= 3.0 * cov.radii[j]) ok = false;
        }
        rep.triple_inclusion_ok = ok;
        rep.samples_checked = n_samples;
    }

    // (iv) multiplicity of the 3x-dilated discs over the grid. Row blocks
    // are owned by one thread each; every thread walks all centers.
    {
        std::vector<std::uint8_t> counts(static_cast<std::size_t>(g.size()), 0);
        auto worker = [&](int tid) {
            const int rows = g.nx;
            const int lo = static_cast<int>(static_cast<long long>(rows) * tid / n_threads);
            const int hi = static_cast<int>(static_cast<long long>(rows) * (tid + 1) / n_threads);
            for (std::size_t j = 0; j < m; ++j) {
                for_disc(g, cov.centers[j], 3.0 * cov.radii[j], [&](int ix, int iy) {
                    if (iy < lo || iy >= hi) return;
                    auto& c = counts[static_cast<std::size_t>(g.index(ix, iy))];
                    if (c < 255) ++c;
                });
            }
        };
        if (n_threads == 1) {
            worker(0);
        } else {
            std::vector<std::thread> pool;
            for (int tid = 0; tid < n_threads; ++tid) pool.emplace_back(worker, tid);
            for (auto& th : pool) th.join();
        }
        int mult_max = 0;
        std::vector<long long> hist(1, 0);
        for (int iy = 0; iy < g.nx; ++iy) {
            const double y = g.coord(iy);
            for (int ix = 0; ix < g.nx; ++ix) {
                const double x = g.coord(ix);
                if (x * x + y * y > r2max) continue;
                const int c = counts[static_cast<std::size_t>(g.index(ix, iy))];
                if (c > mult_max) {
                    mult_max = c;
                    hist.resize(static_cast<std::size_t>(c) + 1, 0);
                }
                ++hist[static_cast<std::size_t>(c)];
            }
        }
        rep.multiplicity_max = mult_max;
        rep.multiplicity_histogram = std::move(hist);
    }
    return rep;
}

VerificationReport verify_covering(const CoveringResult& cov, const RadialWeight& w,
                                   const CoveringConfig& cfg, int n_threads,
                                   std::uint64_t seed) {
    return verify_covering(cov, scaled_tau_profile(w, cfg.delta), cfg, n_threads, seed);
}

bool tau_doubling_check(const RadialWeight& w, double delta, Complex a, int n_samples,
                        std::uint64_t seed) {
    if (!(delta > 0)) raise("InvalidArgument", "tau_doubling_check needs delta > 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double ta = w.tau_clamped(std::abs(a));
    const double rad = delta * ta;
    for (int s = 0; s < n_samples; ++s) {
        double x, y;
        do {
            x = unit(rng);
            y = unit(rng);
        } while (x * x + y * y >= 1.0);
        const Complex z = a + Complex(x * rad, y * rad);
        const double tz = w.tau_clamped(std::abs(z));
        if (tz < 0.5 * ta || tz > 2.0 * ta) return false;
    }
    return true;
}

PointEstimate pointwise_estimate_check(const RadialWeight& w, double p,
                                       const EntireFunction& f, Complex a, double delta,
                                       int n_radial, int n_angular) {
    if (!(p > 0)) raise("InvalidArgument", "pointwise_estimate_check needs p > 0");
    const double rho = delta * w.tau_clamped(std::abs(a));
    const double fa = std::abs(f.evaluate(a));
    const double log_lhs =
        fa > 0 ? p * std::log(fa) - w.neg_log_density(p, std::abs(a)) : -kInf;

    // midpoint rule on a polar subgrid of D(a, rho), in log space
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(n_radial) * n_angular);
    const double dr = rho / n_radial;
    const double dth = 2.0 * M_PI / n_angular;
    for (int i = 0; i < n_radial; ++i) {
        const double r = (i + 0.5) * dr;
        for (int j = 0; j < n_angular; ++j) {
            const double th = (j + 0.5) * dth;
            const Complex u = a + std::polar(r, th);
            const double fu = std::abs(f.evaluate(u));
            if (fu == 0.0) continue;
            terms.push_back(p * std::log(fu) - w.neg_log_density(p, std::abs(u)) + std::log(r));
        }
    }
    const double log_integral = numerics::log_sum_exp(std::move(terms)) + std::log(dr * dth);
    const double log_mean = log_integral - 2.0 * std::log(rho);

    PointEstimate est{};
    est.lhs = std::exp(log_lhs);
    est.disc_mean = std::exp(log_mean);
    est.ratio = std::exp(log_lhs - log_mean);
    return est;
}

} // namespace focklab::covering
