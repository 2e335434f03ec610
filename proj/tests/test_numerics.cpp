#include "doctest.h"

#include <cmath>
#include <random>

#include "focklab/errors.hpp"
#include "focklab/numerics.hpp"
#include "oracles.hpp"

using focklab::EntireFunction;
using focklab::Error;
using focklab::RadialWeight;
namespace num = focklab::numerics;

namespace {
const num::LogIntegrand kUnit = [](double) { return 0.0; };
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

TEST_SUITE_BEGIN("numerics");

TEST_CASE("log_sum_exp is shift invariant") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-40.0, 10.0);
    std::vector<double> v(200);
    for (auto& x : v) x = u(rng);
    const double base = num::log_sum_exp(v);
    for (double shift : {500.0, -500.0}) {
        auto w = v;
        for (auto& x : w) x += shift;
        CHECK(num::log_sum_exp(w) - shift == doctest::Approx(base).epsilon(1e-12));
    }
    CHECK(num::log_sum_exp({}) == -kInf);
    CHECK(num::log_sum_exp({-kInf, -kInf}) == -kInf);
    CHECK(num::log_add(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
}

TEST_CASE("gaussian radial integrals have exact gamma values") {
    auto g = RadialWeight::gaussian();
    // int_0^inf s e^{-s^2} ds = 1/2
    auto r0 = num::radial_integral(kUnit, g, 2.0, 0.0, 0.0, 1e-10);
    CHECK(r0.log_value == doctest::Approx(std::log(0.5)).epsilon(1e-10));
    CHECK(r0.rel_error_estimate <= 1e-10);

    // int_0^inf s^{2n+1} e^{-s^2} ds = n!/2
    double log_fact = 0.0;
    for (int n = 1; n <= 8; ++n) {
        log_fact += std::log(static_cast<double>(n));
        auto rn = num::radial_integral(kUnit, g, 2.0, 0.0, 2.0 * n, 1e-10);
        CHECK(rn.log_value == doctest::Approx(log_fact - std::log(2.0)).epsilon(1e-9));
    }
}

TEST_CASE("power-weight moment matches the gamma closed form") {
    // int_0^inf s^3 e^{-2 s^3} ds = Gamma(4/3) / (3 * 2^{4/3})
    auto w = RadialWeight::power(3.0);
    auto r = num::radial_integral(kUnit, w, 2.0, 0.0, 2.0, 1e-10);
    const double expect = std::log(oracles::gamma_fn(4.0 / 3.0)) -
                          std::log(3.0) - (4.0 / 3.0) * std::log(2.0);
    CHECK(r.log_value == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("tail cut certificate holds") {
    auto g = RadialWeight::gaussian();
    auto r = num::radial_integral(kUnit, g, 2.0, 0.0, 4.0, 1e-10);
    // integrand s^5 e^{-s^2}: value at the cut must be <= 1e-30 of the max
    auto ls = [](double s) { return 5.0 * std::log(s) - s * s; };
    const double peak = ls(std::sqrt(2.5));
    CHECK(ls(r.r_cut) <= peak + std::log(1e-30));
    CHECK(r.n_evals > 0);
    CHECK(r.n_evals < 1000000);
}

TEST_CASE("splitting at an interior point does not change the value") {
    auto w = RadialWeight::power(3.0);
    for (double m : {0.7, 1.9}) {
        auto full = num::radial_integral(kUnit, w, 2.0, 0.0, 2.0, 1e-10);
        auto tail = num::radial_integral(kUnit, w, 2.0, m, 2.0, 1e-10);
        auto head = num::log_integrate(
            [&](double s) { return s <= 0 ? -kInf : 3.0 * std::log(s) - 2.0 * w.phi(s); }, 0.0,
            m, 1e-11);
        const double sum = num::log_add(head.log_value, tail.log_value);
        CHECK(sum == doctest::Approx(full.log_value).epsilon(1e-9));
    }
}

TEST_CASE("doubleexp integrals stay in log space") {
    auto d = RadialWeight::double_exponential();
    auto r = num::radial_integral(kUnit, d, 2.0, 0.0, 0.0, 1e-9);
    CHECK(std::isfinite(r.log_value));
    CHECK(r.rel_error_estimate < 1e-8);
    // log-integrand at r=2 is already ~ -2 e^{e^2}: deep underflow territory
    CHECK(d.neg_log_density(2.0, 2.0) > 14.0);
}

TEST_CASE("non-decaying integrands are reported") {
    auto w = RadialWeight::logarithmic(1.0); // s (1+s)^{-p a}: diverges for ap <= 2
    try {
        num::radial_integral(kUnit, w, 1.0, 0.0, 0.0, 1e-9);
        FAIL("expected NonDecayingTail");
    } catch (const Error& e) {
        CHECK(e.name() == "NonDecayingTail");
    }
}

TEST_CASE("tolerance range is validated") {
    auto g = RadialWeight::gaussian();
    CHECK_THROWS_AS(num::radial_integral(kUnit, g, 2.0, 0.0, 0.0, 1e-2), Error);
    CHECK_THROWS_AS(num::radial_integral(kUnit, g, 2.0, 0.0, 0.0, 1e-13), Error);
}

TEST_CASE("circle means of monomials are r^n for every q") {
    auto z3 = EntireFunction::monomial(3);
    for (double q : {0.5, 1.0, 2.0, 7.5, kInf}) {
        CHECK(num::circle_mean(z3, 0.5, q) == doctest::Approx(0.125).epsilon(1e-12));
        CHECK(num::circle_mean(z3, 2.0, q) == doctest::Approx(8.0).epsilon(1e-12));
    }
}

TEST_CASE("M_2(1, 1+z) = sqrt(2) and Parseval holds to 1e-10") {
    auto f = EntireFunction::parse("poly:1,1");
    CHECK(num::circle_mean(f, 1.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    auto g = EntireFunction::parse("exp_trunc:9");
    for (double r : {0.3, 1.0, 2.5, 4.0}) {
        const double m2 = num::circle_mean(g, r, 2.0);
        CHECK(m2 * m2 == doctest::Approx(g.parseval_m2_squared(r)).epsilon(1e-10));
    }
}

TEST_CASE("q=1 circle mean matches a dense literal trapezoid") {
    auto f = EntireFunction::parse("binom:4");
    const double dense = oracles::circle_mean_literal(f, 1.0, 1.0, 1 << 16);
    CHECK(num::circle_mean(f, 1.0, 1.0) == doctest::Approx(dense).epsilon(1e-9));
}

TEST_CASE("trapezoid mean at q=2 equals Parseval identically") {
    // the identity the brute-force oracles rely on
    auto f = EntireFunction::parse("poly:0.3,-1,2,0,5");
    for (double r : {0.5, 1.7, 3.2}) {
        const double lit = oracles::circle_mean_literal(f, r, 2.0, 4096);
        CHECK(lit * lit == doctest::Approx(oracles::m2_squared(f, r)).epsilon(1e-12));
    }
}

TEST_CASE("circle means are nondecreasing in r") {
    for (const char* spec : {"poly:1,-2,1", "exp_trunc:7", "binom:5"}) {
        auto f = EntireFunction::parse(spec);
        for (double q : {1.0, 2.0, kInf}) {
            double prev = 0.0;
            for (double r = 0.0; r < 4.0; r += 0.25) {
                const double cur = num::circle_mean(f, r, q);
                CHECK(cur >= prev - 1e-12 * std::max(1.0, prev));
                prev = cur;
            }
        }
    }
}

TEST_CASE("sup-norm circle mean refines toward the true maximum") {
    auto f = EntireFunction::parse("poly:1,1,-3,0.5");
    const double r = 1.7;
    double dense = 0.0;
    for (int j = 0; j < 200000; ++j)
        dense = std::max(dense, f.abs_at(r, 2.0 * M_PI * j / 200000));
    CHECK(num::circle_mean(f, r, kInf) == doctest::Approx(dense).epsilon(1e-6));
    CHECK(num::circle_mean(f, r, kInf) <= dense * (1.0 + 1e-9));
}

TEST_SUITE_END();
