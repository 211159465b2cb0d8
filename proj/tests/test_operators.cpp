#include "doctest.h"

#include <cmath>
#include <numbers>

#include "nlop/operators.hpp"

using namespace nlop;

TEST_CASE("pucci_minus: normalized bump has D^sigma = Id at the center") {
    KernelParams p(2, 1.5, 1.0, 4.0);
    QuadratureSpec spec;
    spec.tol = 2.5e-3;
    // D^sigma bump(0) = -2.2943462279334 Id, so this field has D^sigma = Id
    ScalarField u = scale_field(bump_field(2), -1.0 / 2.2943462279334);
    auto r = pucci_minus(u, Point(0.0, 0.0), p, spec);
    CHECK(std::abs(r.value - p.n * p.lambda) <= r.err_bound + 1e-4);
    auto rp = pucci_plus(u, Point(0.0, 0.0), p, spec);
    CHECK(std::abs(rp.value - p.n * p.Lambda) <= rp.err_bound + 1e-4);
}

TEST_CASE("pucci duality and ellipticity sandwich on fields") {
    KernelParams p(2, 1.5, 1.0, 4.0);
    QuadratureSpec spec;
    spec.tol = 2.5e-3;
    ScalarField u = bump_field(2);
    ScalarField nu = scale_field(u, -1.0);
    for (double r : {0.0, 0.4, 0.8}) {
        Point x(r, 0.0);
        auto mm = pucci_minus(nu, x, p, spec);
        auto mp = pucci_plus(u, x, p, spec);
        CHECK(std::abs(mm.value + mp.value) <= 2.0 * (mm.err_bound + mp.err_bound));

        // members of the class pinch between the extremal values
        auto mmin = pucci_minus(u, x, p, spec);
        for (double a : {p.lambda, p.Lambda}) {
            double tr = a * mmin.dsigma.trace(); // A = a*Id is in S_{lambda,Lambda}
            CHECK(tr >= mmin.value - mmin.err_bound - 1e-9);
            CHECK(tr <= mp.value + mp.err_bound + 1e-9);
        }
    }
}

TEST_CASE("hessian_consistency: bump through both paths") {
    KernelParams p(2, 1.5, 1.0, 4.0);
    QuadratureSpec spec; // default tolerances; the report scales them internally
    ScalarField v = bump_field(2);
    for (double r : {0.0, 0.3, 0.6}) {
        Point x = Point::zero(2);
        x[0] = r;
        auto rep = hessian_consistency(v, x, p, spec);
        CHECK(rep.radial_path == (r > 0.05));
        CHECK(rep.discrepancy <= rep.combined_bound);
        CHECK(rep.relative <= 5e-3);
    }
    // the trivial field agrees identically
    ScalarField z = make_field(
        2, [](const Point&) { return 0.0; }, 0.0, 1.0, 0.0);
    auto repz = hessian_consistency(z, Point(0.3, 0.0), p, spec);
    CHECK(repz.lhs.max_abs() <= 1e-6);
    CHECK(repz.rhs.max_abs() <= 1e-6);
}

TEST_CASE("riesz_inf_ratio: trivial and bump inputs (n=3, sigma=1)") {
    KernelParams p(3, 1.0, 1.0, 4.0);
    QuadratureSpec spec;
    spec.tol = 1e-5;

    ScalarField z = make_field(
        3, [](const Point&) { return 0.0; }, 0.0, 1.0, 0.0);
    auto prof = std::make_shared<RadialProfile>(
        std::vector<double>{},
        std::vector<RadialPiece>{RadialPiece{[](double) { return 0.0; },
                                             [](double) { return 0.0; },
                                             [](double) { return 0.0; }}},
        false);
    ScalarField zr = make_radial_field(3, prof, 0.0, 1.0);
    auto r0 = riesz_inf_ratio(zr, 1.0, p, spec);
    CHECK(std::abs(r0.inf_inside) <= 1e-10);
    CHECK(std::abs(r0.inf_outside) <= 1e-10);
    CHECK(r0.holds);

    auto r1 = riesz_inf_ratio(scale_field(bump_field(3), -1.0), 1.0, p, spec);
    CHECK(r1.holds);
    // strict margin: the outside infimum is far above half the inside one
    CHECK(-r1.inf_outside <= 0.5 * (-0.5 * r1.inf_inside));

    auto r2 = riesz_inf_ratio(neg_plateau_field(3), 1.0, p, spec);
    CHECK(r2.holds);

    // positive field rejected
    CHECK_THROWS_AS(riesz_inf_ratio(bump_field(3), 1.0, p, spec), std::domain_error);
    // support violation rejected
    CHECK_THROWS_AS(riesz_inf_ratio(scale_field(bump_field(3), -1.0), 0.5, p, spec),
                    std::domain_error);
}

TEST_CASE("lp_norm_radial against closed forms") {
    // ||r^alpha||_p over B_1 in R^n: (omega/(alpha p + n))^{1/p}
    for (int n : {2, 3}) {
        double omega = sphere_area(n);
        for (double alpha : {0.5, -0.4}) {
            for (double pexp : {1.0, 1.4444444444444444, 2.0}) {
                double closed = std::pow(omega / (alpha * pexp + n), 1.0 / pexp);
                double got = lp_norm_radial(
                    [alpha](double r) { return std::pow(r, alpha); }, pexp, n, 1.0, {}, 96);
                CHECK(got == doctest::Approx(closed).epsilon(1e-8));
            }
        }
    }
    // bump: ||(1-r^2)^2||_{L^2(B_1)}^2 = pi/5 in n=2 (hand integral)
    double got = lp_norm_radial(
        [](double r) { return (1.0 - r * r) * (1.0 - r * r); }, 2.0, 2, 1.0, {}, 96);
    CHECK(got == doctest::Approx(std::sqrt(std::numbers::pi / 5.0)).epsilon(1e-10));
}

TEST_CASE("abp_ratio: sign conventions and domain checks") {
    KernelParams p(2, 1.5, 1.0, 4.0);
    QuadratureSpec spec;
    ScalarField u = bump_field(2); // u >= 0 everywhere
    ScalarField f = bump_field(2);
    auto rep = abp_ratio(u, f, 2.0, p, spec);
    CHECK(rep.lhs <= 0.0);
    CHECK(rep.ratio <= 0.0);
    CHECK(rep.f_norm == doctest::Approx(std::sqrt(std::numbers::pi / 5.0)).epsilon(1e-6));
    CHECK(rep.factor ==
          doctest::Approx(p.sigma * std::pow(compute_m0(2, 1.5), 2.0 - 2.0 / 2.0) /
                          (p.sigma - 2.0 / 2.0))
              .epsilon(1e-12));
    // p <= n/sigma rejected
    CHECK_THROWS_AS(abp_ratio(u, f, 1.3, p, spec), std::domain_error);
    // u negative outside B_1 rejected
    ScalarField bad = make_field(
        2, [](const Point& x) { return -x.norm2(); }, 100.0, 1e9, 2.0);
    CHECK_THROWS_AS(abp_ratio(bad, f, 2.0, p, spec), std::domain_error);
}
