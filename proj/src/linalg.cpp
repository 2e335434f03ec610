#include "focklab/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "focklab/errors.hpp"

namespace focklab::linalg {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.n(); ++i)
        for (int j = 0; j < a.n(); ++j)
            if (i != j) s += std::norm(a.at(i, j));
    return std::sqrt(s);
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.n(); ++i)
        for (int j = 0; j < a.n(); ++j) s += std::norm(a.at(i, j));
    return std::sqrt(s);
}

} // namespace

Matrix gram(const Matrix& a) {
    const int n = a.n();
    // column nonzero patterns
    std::vector<std::vector<int>> rows_of(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (a.at(i, j) != Complex(0.0)) rows_of[static_cast<std::size_t>(j)].push_back(i);

    Matrix g(n);
    for (int j = 0; j < n; ++j) {
        for (int k = j; k < n; ++k) {
            Complex s(0.0);
            const auto& rj = rows_of[static_cast<std::size_t>(j)];
            const auto& rk = rows_of[static_cast<std::size_t>(k)];
            // merge the two sparse patterns
            std::size_t u = 0, v = 0;
            while (u < rj.size() && v < rk.size()) {
                if (rj[u] < rk[v]) ++u;
                else if (rj[u] > rk[v]) ++v;
                else {
                    s += std::conj(a.at(rj[u], j)) * a.at(rk[v], k);
                    ++u;
                    ++v;
                }
            }
            g.at(j, k) = s;
            if (k != j) g.at(k, j) = std::conj(s);
        }
    }
    return g;
}

std::vector<double> hermitian_eigenvalues(Matrix a, int max_sweeps) {
    const int n = a.n();
    if (n == 0) return {};
    const double scale = std::max(frobenius_norm(a), 1e-300);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= 1e-14 * scale) {
            std::vector<double> ev(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a.at(i, i).real();
            std::sort(ev.begin(), ev.end());
            return ev;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = a.at(p, q);
                const double g = std::abs(apq);
                if (g <= 1e-300) continue;
                const double app = a.at(p, p).real();
                const double aqq = a.at(q, q).real();
                // unitary 2x2 with phase u = apq/|apq| annihilating a_pq
                const double theta = 0.5 * std::atan2(2.0 * g, app - aqq);
                const double c = std::cos(theta), s = std::sin(theta);
                const Complex u = apq / g;
                const Complex ub = std::conj(u);
                for (int k = 0; k < n; ++k) {
                    const Complex akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp + ub * s * akq;
                    a.at(k, q) = -u * s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const Complex apk = a.at(p, k), aqk = a.at(q, k);
                    a.at(p, k) = c * apk + u * s * aqk;
                    a.at(q, k) = -ub * s * apk + c * aqk;
                }
                a.at(p, q) = Complex(0.0);
                a.at(q, p) = Complex(0.0);
                a.at(p, p) = Complex(a.at(p, p).real(), 0.0);
                a.at(q, q) = Complex(a.at(q, q).real(), 0.0);
            }
        }
    }
    raise("EigenFailure", "Jacobi eigensolver did not converge");
}

std::vector<double> singular_values(Matrix a, int max_sweeps) {
    const int n = a.n();
    if (n == 0) return {};
    const double scale = std::max(frobenius_norm(a), 1e-300);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0;
                Complex apq(0.0);
                for (int k = 0; k < n; ++k) {
                    app += std::norm(a.at(k, p));
                    aqq += std::norm(a.at(k, q));
                    apq += std::conj(a.at(k, p)) * a.at(k, q);
                }
                const double g = std::abs(apq);
                if (g <= 1e-15 * std::sqrt(app * aqq) || g <= 1e-300 * scale) continue;
                rotated = true;
                const double theta = 0.5 * std::atan2(2.0 * g, app - aqq);
                const double c = std::cos(theta), s = std::sin(theta);
                const Complex u = apq / g;
                const Complex ub = std::conj(u);
                for (int k = 0; k < n; ++k) {
                    const Complex akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp + ub * s * akq;
                    a.at(k, q) = -u * s * akp + c * akq;
                }
            }
        }
        if (!rotated) {
            std::vector<double> sv(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += std::norm(a.at(k, j));
                sv[static_cast<std::size_t>(j)] = std::sqrt(s);
            }
            std::sort(sv.begin(), sv.end(), std::greater<>());
            return sv;
        }
    }
    raise("EigenFailure", "one-sided Jacobi SVD did not converge");
}

} // namespace focklab::linalg
