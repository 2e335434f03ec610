#include "doctest.h"

#include <cmath>
#include <random>

#include "focklab/errors.hpp"
#include "focklab/linalg.hpp"

namespace la = focklab::linalg;
using la::Complex;

namespace {

la::Matrix random_banded(int n, int band, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    la::Matrix a(n);
    for (int j = 0; j < n; ++j)
        for (int i = j; i < std::min(n, j + band + 1); ++i)
            a.at(i, j) = Complex(u(rng), u(rng));
    return a;
}

} // namespace

TEST_SUITE_BEGIN("linalg");

TEST_CASE("hermitian eigenvalues of small closed forms") {
    la::Matrix a(2);
    a.at(0, 0) = 2.0;
    a.at(1, 1) = 1.0;
    a.at(0, 1) = Complex(0.0, 1.0);
    a.at(1, 0) = Complex(0.0, -1.0);
    // eigenvalues of [[2, i], [-i, 1]]: (3 +- sqrt(5))/2
    auto ev = la::hermitian_eigenvalues(a);
    CHECK(ev[0] == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));

    la::Matrix d(3);
    d.at(0, 0) = 3.0;
    d.at(1, 1) = -1.0;
    d.at(2, 2) = 0.5;
    auto ev3 = la::hermitian_eigenvalues(d);
    CHECK(ev3[0] == doctest::Approx(-1.0));
    CHECK(ev3[2] == doctest::Approx(3.0));
}

TEST_CASE("gram matches a dense product") {
    auto a = random_banded(12, 3, 5);
    auto g = la::gram(a);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            Complex s(0.0);
            for (int k = 0; k < 12; ++k) s += std::conj(a.at(k, i)) * a.at(k, j);
            CHECK(std::abs(g.at(i, j) - s) < 1e-13);
        }
}

TEST_CASE("singular values agree with sqrt of gram eigenvalues on 50x50") {
    for (unsigned seed : {1u, 2u}) {
        auto a = random_banded(50, 4, seed);
        auto sv = la::singular_values(a);
        auto ev = la::hermitian_eigenvalues(la::gram(a));
        REQUIRE(sv.size() == 50);
        // agreement to 1e-8 relative to the matrix scale; near-zero singular
        // values are only defined to about sqrt(eps)*sigma_max on the
        // eigenvalue route
        const double scale = std::max(sv.front(), 1.0);
        for (int i = 0; i < 50; ++i) {
            const double from_eig = std::sqrt(std::max(ev[static_cast<std::size_t>(49 - i)], 0.0));
            CHECK(std::abs(sv[static_cast<std::size_t>(i)] - from_eig) <= 2e-8 * scale);
        }
    }
}

TEST_CASE("trace is preserved by the eigensolver") {
    auto a = random_banded(20, 20, 11);
    // make it hermitian
    la::Matrix h(20);
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) h.at(i, j) = 0.5 * (a.at(i, j) + std::conj(a.at(j, i)));
    double tr = 0.0;
    for (int i = 0; i < 20; ++i) tr += h.at(i, i).real();
    auto ev = la::hermitian_eigenvalues(h);
    double sum = 0.0;
    for (double v : ev) sum += v;
    CHECK(sum == doctest::Approx(tr).epsilon(1e-11));
}

TEST_SUITE_END();
