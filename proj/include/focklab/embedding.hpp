#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "focklab/functions.hpp"
#include "focklab/weights.hpp"

namespace focklab::embedding {

struct Atom {
    Complex position;
    double mass = 0.0; // strictly positive
};

/// Finite positive measure as a list of weighted point masses.
struct DiscreteMeasure {
    std::vector<Atom> atoms;

    /// CSV columns x,y,mass; '#' comments and an optional header line.
    static DiscreteMeasure from_csv(std::istream& in);
    static DiscreteMeasure from_csv_file(const std::string& path);

    double total_mass() const;
    double max_radius() const;
    DiscreteMeasure scaled(double factor) const;
};

/// Square candidate grid: n x n points over [-radius, radius]^2.
struct CenterGrid {
    double radius = 0.0;
    int n = 0;
};

enum class EmbeddingVerdict { BoundedEvidence, CompactEvidence, Inconclusive };

struct CarlesonReport {
    double k_value = 0.0;
    double log_k_value = 0.0;
    Complex argmax_center;
    EmbeddingVerdict verdict = EmbeddingVerdict::Inconclusive;
};

/// Local quantity at a: tau(a)^{-2q/p} sum of m_i e^{q phi(zeta_i)} over
/// atoms inside D(a, delta tau(a)), accumulated in log space; tau is the
/// clamped scale. Atom positions are always included as candidate centers,
/// so no atom can fall between grid points.
CarlesonReport carleson_sup(const DiscreteMeasure& mu, const RadialWeight& w, double p,
                            double q, double delta, const CenterGrid& grid);

struct VanishingTrend {
    std::vector<double> shell_radius; // shell midpoints
    std::vector<double> shell_log_max;
    double vanish_radius = 0.0; // local quantity is identically 0 beyond this
    EmbeddingVerdict verdict = EmbeddingVerdict::Inconclusive;
};

CarlesonReport carleson_sup_default_grid(const DiscreteMeasure& mu, const RadialWeight& w,
                                         double p, double q, double delta, int grid_n = 160);

/// Shell maxima of the local quantity; compact-evidence when they decrease
/// to zero (always eventually exact zero for finitely many atoms).
VanishingTrend carleson_vanishing(const DiscreteMeasure& mu, const RadialWeight& w, double p,
                                  double q, double delta, const std::vector<double>& shells,
                                  int samples_per_shell = 96);

struct QlpNorm {
    double log_norm = 0.0;
    double norm = 0.0;
    double exponent = 0.0; // p/(p-q)
};

/// L^{p/(p-q)}(dm) norm of z -> tau(z)^{-2} * (local mass sum), for q < p,
/// by a 2D midpoint rule in log space.
QlpNorm carleson_qlp(const DiscreteMeasure& mu, const RadialWeight& w, double p, double q,
                     double delta, const CenterGrid& grid);

/// Grid sized so cells resolve the smallest local disc radius delta*tau over
/// the measure's support (cell <= delta tau / cells_per_disc).
CenterGrid qlp_default_grid(const DiscreteMeasure& mu, const RadialWeight& w, double delta,
                            double cells_per_disc = 4.0);

struct EmpiricalEmbedding {
    double ratio_max = 0.0;
    std::vector<double> ratios; // ||f||_{L^q(mu)} / ||f||_{F^phi_p} per sample
};

/// One-sided embedding-norm probe over >= 5 sample functions.
EmpiricalEmbedding embedding_empirical(const DiscreteMeasure& mu, const RadialWeight& w,
                                       double p, double q,
                                       const std::vector<EntireFunction>& sample_fns);

struct NonNestingTrend {
    std::vector<double> r_grid;
    std::vector<double> values; // tau(a)^{2(1-q/p)}
    bool strictly_increasing = false;
    double growth = 0.0; // last / first
};

/// tau(a)^{2(1-q/p)} along a radial grid; unbounded growth for q > p is the
/// witness that the spaces cannot nest.
NonNestingTrend nonnested_witness(const RadialWeight& w, double p, double q,
                                  const std::vector<double>& r_grid);

} // namespace focklab::embedding
