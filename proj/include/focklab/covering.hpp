#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "focklab/functions.hpp"
#include "focklab/weights.hpp"

namespace focklab::covering {

/// Radial scale r -> t(r): exactly constant up to plateau_radius, strictly
/// decreasing beyond it. The greedy construction leans on this shape: the
/// grid point maximising t among the uncovered ones is the uncovered point
/// of smallest radius (ties broken by row-major grid index).
struct RadialScale {
    double plateau_radius = 0.0;
    std::function<double(double)> value;
};

/// t(z) = delta * tau_clamped(|z|).
RadialScale scaled_tau_profile(const RadialWeight& w, double delta);
double scaled_tau(const RadialWeight& w, double delta, Complex z);
RadialScale constant_scale(double t);

struct CoveringConfig {
    double r_max = 0.0;
    double grid_step = 0.0;
    double delta = 0.0;
    double c1_estimate = 0.0; // empirical Lipschitz constant of tau_clamped
    double m_tau = 0.0;       // min(1, 1/c1)/4
};

/// Estimate c1 on a radial grid, set m_tau, pick delta (halved until the
/// empirical 1/4-Lipschitz check of t passes) and grid_step = t(r_max)/8.
CoveringConfig make_config(const RadialWeight& w, double r_max, double delta_override = 0.0,
                           double step_override = 0.0);

struct CoveringResult {
    std::vector<Complex> centers;
    std::vector<double> radii; // t(z_j), non-increasing along the sequence
    int multiplicity_max = 0;  // filled in from a verification pass
    std::vector<long long> multiplicity_histogram;
};

/// Greedy covering of the grid on |z| <= r_max: repeatedly take the
/// uncovered grid point with maximal t, append it, mark its open disc
/// covered. Deterministic; ties broken by lowest row-major index.
/// Errors: LipschitzViolation if the empirical 1/4-Lipschitz premise fails
/// on the grid, GridTooCoarse if grid_step exceeds min t / 8.
CoveringResult build_covering(const RadialScale& t, const CoveringConfig& cfg);
CoveringResult build_covering(const RadialWeight& w, const CoveringConfig& cfg);

struct VerificationReport {
    bool separation_ok = false;       // |z_j - z_k| >= t(z_k) for j > k
    bool coverage_ok = false;         // every interior grid point covered
    bool triple_inclusion_ok = false; // sampled second-generation discs stay in 3x
    int multiplicity_max = 0;         // of the 3x-dilated discs, over the grid
    std::vector<long long> multiplicity_histogram;
    long long uncovered_interior_points = 0;
    long long separation_violations = 0;
    long long samples_checked = 0;
};

/// Re-derive everything from the centers list alone (so tampering with the
/// result is caught). Interior means |z| <= r_max - t(z): coverage near the
/// rim is a truncation artifact, not a covering defect. The multiplicity
/// accumulation partitions grid rows across n_threads; per-point counts are
/// independent of the partition, so any thread count gives identical output.
VerificationReport verify_covering(const CoveringResult& cov, const RadialScale& t,
                                   const CoveringConfig& cfg, int n_threads = 1,
                                   std::uint64_t seed = 1);
VerificationReport verify_covering(const CoveringResult& cov, const RadialWeight& w,
                                   const CoveringConfig& cfg, int n_threads = 1,
                                   std::uint64_t seed = 1);

/// Sample z in D(a, delta tau(a)) and check tau(a)/2 <= tau(z) <= 2 tau(a).
bool tau_doubling_check(const RadialWeight& w, double delta, Complex a, int n_samples,
                        std::uint64_t seed);

struct PointEstimate {
    double lhs;       // |f(a)|^p e^{-p phi(a)}
    double disc_mean; // (1/(delta tau(a))^2) * int over D(a, delta tau(a))
    double ratio;     // lhs / disc_mean
};

/// Subharmonic point-estimate data: the ratio stays bounded over samples,
/// which is what the disc-mean bound asserts up to its constant.
PointEstimate pointwise_estimate_check(const RadialWeight& w, double p,
                                       const EntireFunction& f, Complex a, double delta,
                                       int n_radial = 64, int n_angular = 128);

} // namespace focklab::covering
