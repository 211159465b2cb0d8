#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "nlop/special.hpp"

using namespace nlop;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("gamma: frozen closed forms") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
    CHECK(gamma_fn(-0.5) == doctest::Approx(-2.0 * std::sqrt(kPi)).epsilon(1e-13));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-13));
    // 49! spans most of the required range
    long double fact = 1.0L;
    for (int k = 2; k <= 49; ++k) fact *= k;
    CHECK(gamma_fn(50.0) == doctest::Approx(static_cast<double>(fact)).epsilon(1e-12));
    // half-integers by exact recurrence from Gamma(1/2)
    long double g = std::sqrt(std::numbers::pi_v<long double>);
    for (int k = 0; k < 20; ++k) g *= (0.5L + k);
    CHECK(gamma_fn(20.5) == doctest::Approx(static_cast<double>(g)).epsilon(1e-12));
}

TEST_CASE("gamma: recurrence and reflection properties") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ud(-9.7, 49.0);
    int tested = 0;
    while (tested < 500) {
        double x = ud(rng);
        if (std::abs(x - std::round(x)) < 1e-3 && x < 0.5) continue; // stay off poles
        double lhs = gamma_fn(x + 1.0);
        double rhs = x * gamma_fn(x);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), std::abs(rhs)));
        ++tested;
    }
    std::uniform_real_distribution<double> ur(0.05, 0.95);
    for (int i = 0; i < 200; ++i) {
        double x = ur(rng);
        double prod = gamma_fn(x) * gamma_fn(1.0 - x);
        CHECK(prod == doctest::Approx(kPi / std::sin(kPi * x)).epsilon(1e-12));
    }
}

TEST_CASE("gamma: pole inputs rejected") {
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-3.0), std::domain_error);
}

TEST_CASE("normalizing constants: closed-form values") {
    // A(2, 2-1) = Gamma(1/2) / (pi * 2 * Gamma(1/2)) = 1/(2 pi)
    CHECK(norm_const_pos(2, 1.0) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-13));
    // A(3, 2-1) = Gamma(1)/(pi^{3/2} * 2 * Gamma(1/2)) = 1/(2 pi^2)
    CHECK(norm_const_pos(3, 1.0) == doctest::Approx(1.0 / (2.0 * kPi * kPi)).epsilon(1e-13));
    // A(2, -1) = 2 Gamma(3/2) / (pi * |Gamma(-1/2)|) = 1/(2 pi)
    CHECK(norm_const_neg(2, 1.0) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-13));
    CHECK_THROWS_AS(norm_const_pos(2, 2.0), std::domain_error);
    CHECK_THROWS_AS(norm_const_neg(2, 0.0), std::domain_error);
}

TEST_CASE("normalizing constants: identity A(n,-s) = s(n+s-2) A(n,2-s)") {
    for (int n = 2; n <= 5; ++n)
        for (int i = 1; i <= 19; ++i) {
            double s = 0.1 * i;
            double lhs = norm_const_neg(n, s);
            double rhs = s * (n + s - 2.0) * norm_const_pos(n, s);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
        }
}

TEST_CASE("A(n,-s)/(s(2-s)): endpoint limits as resolved") {
    // s -> 0+ gives Gamma(n/2)/(4 pi^{n/2}); s -> 2- gives Gamma((n+2)/2)/pi^{n/2}.
    for (int n : {2, 3}) {
        double lim0 = gamma_fn(n / 2.0) / (4.0 * std::pow(kPi, n / 2.0));
        double lim2 = gamma_fn((n + 2.0) / 2.0) / std::pow(kPi, n / 2.0);
        double s0 = 1e-4, s2 = 2.0 - 1e-4;
        CHECK(norm_const_neg(n, s0) / (s0 * (2.0 - s0)) ==
              doctest::Approx(lim0).epsilon(1e-3));
        CHECK(norm_const_neg(n, s2) / (s2 * (2.0 - s2)) ==
              doctest::Approx(lim2).epsilon(1e-3));
    }
    // for n=2 the s->2 endpoint value is Gamma(2)/pi = 1/pi as quoted
    double s2 = 2.0 - 1e-4;
    CHECK(norm_const_neg(2, s2) / (s2 * (2.0 - s2)) ==
          doctest::Approx(1.0 / kPi).epsilon(1e-3));
}

TEST_CASE("A(n,-s)/(s(2-s)): positive and bounded across (0,2)") {
    for (int n : {2, 3}) {
        double lo = 1e300, hi = 0;
        for (int i = 0; i <= 400; ++i) {
            double s = 1e-4 + (2.0 - 2e-4) * i / 400.0;
            double v = norm_const_neg(n, s) / (s * (2.0 - s));
            CHECK(v > 0.0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(std::isfinite(hi / lo));
        CHECK(hi / lo < 100.0);
    }
}

TEST_CASE("M0: defining equality and smallness") {
    // substituting M0 into ((3 M0 - 3)/6)^{-n+(2-sigma)} gives exactly 1/2
    for (int n = 2; n <= 5; ++n)
        for (int i = 1; i <= 19; ++i) {
            double s = 0.1 * i;
            double m0 = compute_m0(n, s);
            CHECK(m0 > 1.0);
            CHECK(std::abs(m0_defining_value(n, s, m0) - 0.5) <= 1e-12);
        }
    CHECK(compute_m0(3, 1.0) == doctest::Approx(1.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-14));
    // n=2, sigma -> 2 tends to the same value
    CHECK(compute_m0(2, 2.0 - 1e-9) ==
          doctest::Approx(1.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-8));
    // n=3: bounded uniformly over the sigma grid by the value at sigma = 0.1
    double cap = 1.0 + 2.0 * std::pow(2.0, 1.0 / 1.1) + 1e-12;
    for (double s : {0.1, 1.0, 1.9}) CHECK(compute_m0(3, s) <= cap);
}

TEST_CASE("KernelParams validation") {
    CHECK_NOTHROW(KernelParams(2, 1.5, 1.0, 4.0));
    CHECK_THROWS_AS(KernelParams(1, 1.5, 1.0, 4.0), std::domain_error);
    CHECK_THROWS_AS(KernelParams(2, 2.5, 1.0, 4.0), std::domain_error);
    CHECK_THROWS_AS(KernelParams(2, 1.5, 2.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(KernelParams(2, 1.5, 1.0, 4.0, 1.5), std::domain_error); // eta > lambda
}

TEST_CASE("constants_for bundles the four values") {
    KernelParams p(3, 1.2, 1.0, 4.0);
    Constants c = constants_for(p);
    CHECK(c.a_pos == doctest::Approx(norm_const_pos(3, 1.2)));
    CHECK(c.a_neg == doctest::Approx(norm_const_neg(3, 1.2)));
    CHECK(c.a_neg_dual == doctest::Approx(norm_const_neg(3, 0.8)));
    CHECK(c.m0 == doctest::Approx(compute_m0(3, 1.2)));
    CHECK(sphere_area(2) == doctest::Approx(2.0 * kPi).epsilon(1e-13));
    CHECK(sphere_area(3) == doctest::Approx(4.0 * kPi).epsilon(1e-13));
}
