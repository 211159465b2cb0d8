#include "doctest.h"

#include <cmath>

#include "nlop/fields.hpp"

using namespace nlop;

TEST_CASE("delta_second_diff basics") {
    // quadratic: delta = 2|y|^2
    ScalarField q = make_field(
        2, [](const Point& x) { return x.norm2(); }, 1e6, 1e6, 2.0);
    Point x(0.3, -0.7), y(0.2, 0.5);
    CHECK(delta_second_diff(q, x, y) == doctest::Approx(2.0 * y.norm2()).epsilon(1e-12));
    CHECK(delta_second_diff(q, x, y) ==
          doctest::Approx(delta_second_diff(q, x, -1.0 * y)).epsilon(1e-14));

    // affine cancels
    ScalarField a = make_field(
        2, [](const Point& x) { return 3.0 * x[0] - 2.0 * x[1] + 1.0; }, 1e6, 1e6, 0.0);
    CHECK(delta_second_diff(a, x, y) == doctest::Approx(0.0).epsilon(1e-13));

    // bump at the origin, y = (0.5, 0): 2((1-0.25)^2 - 1) = -0.875
    ScalarField b = bump_field(2);
    CHECK(delta_second_diff(b, Point(0.0, 0.0), Point(0.5, 0.0)) ==
          doctest::Approx(-0.875).epsilon(1e-13));
}

TEST_CASE("radial_hessian closed forms") {
    auto half_r2 = std::make_shared<RadialProfile>(
        std::vector<double>{},
        std::vector<RadialPiece>{RadialPiece{[](double r) { return 0.5 * r * r; },
                                             [](double r) { return r; },
                                             [](double) { return 1.0; }}},
        false);
    Point x(0.4, -1.1);
    SymMatrix h = radial_hessian(*half_r2, x);
    CHECK((h - SymMatrix::identity(2)).max_abs() <= 1e-13);

    auto lin = std::make_shared<RadialProfile>(
        std::vector<double>{},
        std::vector<RadialPiece>{RadialPiece{[](double r) { return r; },
                                             [](double) { return 1.0; },
                                             [](double) { return 0.0; }}},
        false);
    SymMatrix h2 = radial_hessian(*lin, x);
    double r = x.norm();
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) {
            double xij = x[i] * x[j] / (r * r);
            CHECK(h2(i, j) ==
                  doctest::Approx(((i == j ? 1.0 : 0.0) - xij) / r).epsilon(1e-12));
        }
    CHECK_THROWS_AS(radial_hessian(*lin, Point(0.0, 0.0)), std::domain_error);

    // against central finite differences of the bump
    ScalarField b = bump_field(2);
    Point z(0.35, 0.2);
    SymMatrix hb = radial_hessian(*b.radial, z);
    double fd = 1e-3;
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) {
            Point ei = Point::zero(2), ej = Point::zero(2);
            ei[i] = fd;
            ej[j] = fd;
            double num = (b(z + ei + ej) + b(z - ei - ej) - b(z + ei - ej) - b(z - ei + ej)) /
                         (4.0 * fd * fd);
            CHECK(hb(i, j) == doctest::Approx(num).epsilon(1e-5));
        }
}

TEST_CASE("RadialProfile: right-continuity and C1 check") {
    RadialProfile p({1.0}, {RadialPiece{[](double) { return 1.0; }, [](double) { return 0.0; },
                                        [](double) { return 0.0; }},
                            RadialPiece{[](double) { return 2.0; }, [](double) { return 0.0; },
                                        [](double) { return 0.0; }}});
    CHECK(p.phi(1.0) == 2.0); // right piece at the breakpoint
    CHECK(p.phi(0.999999) == 1.0);
    CHECK(p.c1_mismatch() == doctest::Approx(1.0));
    CHECK(bump_field(2).radial->c1_mismatch() <= 1e-14);
}

TEST_CASE("RadialTable interpolation and derivatives") {
    std::vector<double> r, f;
    for (int i = 0; i <= 400; ++i) {
        double t = 4.0 * i / 400.0;
        r.push_back(t);
        f.push_back(std::sin(t));
    }
    RadialTable tab(r, f);
    for (double t : {0.13, 1.7, 3.4}) {
        CHECK(tab(t) == doctest::Approx(std::sin(t)).epsilon(1e-7));
        CHECK(tab.deriv1(t) == doctest::Approx(std::cos(t)).epsilon(1e-4));
        CHECK(tab.deriv2(t) == doctest::Approx(-std::sin(t)).epsilon(2e-2));
    }
    CHECK(tab(5.0) == 0.0); // beyond the table

    // a kink is not smeared when declared
    std::vector<double> rk, fk;
    for (int i = 0; i <= 200; ++i) {
        double t = 2.0 * i / 200.0;
        rk.push_back(t);
        fk.push_back(std::abs(t - 1.0));
    }
    RadialTable ktab(rk, fk, {1.0});
    CHECK(ktab(0.995) == doctest::Approx(0.005).epsilon(1e-10));
    CHECK(ktab(1.005) == doctest::Approx(0.005).epsilon(1e-10));
}

TEST_CASE("mollify: exact on constants, range-preserving, converging") {
    ScalarField c = make_field(
        2, [](const Point&) { return 3.25; }, 3.25, 1e9, 0.0);
    ScalarField cm = mollify(c, 0.2);
    CHECK(cm(Point(0.4, -0.2)) == doctest::Approx(3.25).epsilon(1e-12));

    ScalarField steep = make_field(
        2, [](const Point& x) { return x.norm() < 0.5 ? 1.0 : 0.0; }, 1.0, 2.0,
        std::nullopt);
    ScalarField sm = mollify(steep, 0.3);
    for (double r : {0.3, 0.45, 0.5, 0.55, 0.7}) {
        double v = sm(Point(r, 0.0));
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-12);
    }

    ScalarField b = bump_field(2);
    double prev = 1e300;
    for (double eps : {0.1, 0.05, 0.025}) {
        ScalarField m = mollify(b, eps);
        double worst = 0;
        for (int i = 0; i <= 40; ++i) {
            Point x(1.3 * i / 40.0, 0.0);
            worst = std::max(worst, std::abs(m(x) - b(x)));
        }
        CHECK(worst < prev);
        prev = worst;
    }
    CHECK(prev <= 0.01);
    CHECK_THROWS_AS(mollify(b, 0.0), std::domain_error);
}

TEST_CASE("inf_convolution: zero field fixed point") {
    ScalarField z = make_field(
        2, [](const Point&) { return 0.0; }, 0.0, 1e9, 0.0);
    InfConvParams ip;
    ip.h = 0.1;
    ip.grid_step = 0.02;
    ip.search_radius = 0.2;
    auto ic = inf_convolution(z, ip);
    Point x(0.37, -0.21);
    CHECK(ic.u_h(x) == doctest::Approx(0.0));
    Point am = ic.argmin(x);
    CHECK((am - x).norm() <= 1e-14);
}

TEST_CASE("inf_convolution: quadratic closed form at grid resolution") {
    // u = |x|^2 truncated far away; u_h(x) = |x|^2/(1+2h) near the origin
    double R = 1.4;
    ScalarField q = make_field(
        2, [R](const Point& x) { return std::min(x.norm2(), R * R); }, R * R, 1e9, 2.0);
    InfConvParams ip;
    ip.h = 0.2;
    ip.grid_step = 0.005;
    ip.search_radius = 1.3; // covers the argmin ball for sup = R^2
    auto ic = inf_convolution(q, ip);
    for (double r : {0.0, 0.3, 0.7}) {
        Point x(r, 0.0);
        double expect = r * r / (1.0 + 2.0 * ip.h);
        double slack = (1.0 + 1.0 / (2.0 * ip.h)) * 2.0 * ip.grid_step * ip.grid_step;
        CHECK(std::abs(ic.u_h(x) - expect) <= slack);
    }
}

TEST_CASE("inf_convolution: u_h <= u, sup preserved, argmin bound") {
    ScalarField u = scale_field(bump_field(2), -1.0);
    InfConvParams ip;
    ip.h = 0.1;
    ip.grid_step = 0.01;
    auto ic = inf_convolution(u, ip);
    CHECK(ic.u_h.sup_bound == doctest::Approx(1.0));
    Halton hal(2, 5);
    for (int i = 0; i < 100; ++i) {
        Point x = hal.next_in_ball(1.4);
        double vh = ic.u_h(x);
        CHECK(vh <= u(x) + 1e-13);
        CHECK(std::abs(vh) <= 1.0 + 1e-13);
        Point am = ic.argmin(x);
        double bound = 4.0 * ip.h * u.sup_bound +
                       5.0 * ip.grid_step * std::sqrt(ip.h * u.sup_bound) +
                       2.0 * ip.grid_step * ip.grid_step;
        CHECK((am - x).norm2() <= bound);
    }
    // monotone toward u as h decreases
    InfConvParams ip2 = ip;
    ip2.h = 0.05;
    auto ic2 = inf_convolution(u, ip2);
    Halton hal2(2, 9);
    for (int i = 0; i < 50; ++i) {
        Point x = hal2.next_in_ball(1.2);
        CHECK(ic2.u_h(x) >= ic.u_h(x) - 1e-12);
    }
    // invariant: too small search radius is rejected
    InfConvParams bad = ip;
    bad.search_radius = 0.05;
    CHECK_THROWS_AS(inf_convolution(u, bad), std::domain_error);
    ScalarField unbounded = make_field(
        2, [](const Point& x) { return x.norm2(); },
        std::numeric_limits<double>::infinity(), 1e9, 2.0);
    CHECK_THROWS_AS(inf_convolution(unbounded, ip), std::domain_error);
}

TEST_CASE("radial_inf_convolution matches the grid search") {
    ScalarField u = scale_field(bump_field(2), -1.0);
    InfConvParams ip;
    ip.h = 0.1;
    ip.grid_step = 0.01;
    auto ic = inf_convolution(u, ip);
    auto prof = u.radial;
    RadialTable tab = radial_inf_convolution([prof](double t) { return prof->phi(t); }, 1.0,
                                             ip.h, 2e-3, 1e-2, 2.5);
    for (double r : {0.0, 0.2, 0.5, 0.85, 1.1, 1.6}) {
        double grid = ic.u_h(Point(r, 0.0));
        double rad = tab(r);
        CHECK(std::abs(grid - rad) <= 5e-4); // both are O(step^2/h) approximations
    }
}

TEST_CASE("semiconcavity of inf-convolutions") {
    InfConvParams ip;
    ip.h = 0.1;
    ip.grid_step = 0.01;

    ScalarField z = make_field(
        2, [](const Point&) { return 0.0; }, 0.0, 1e9, 0.0);
    InfConvParams ipz = ip;
    ipz.search_radius = 0.1;
    auto icz = inf_convolution(z, ipz);
    auto repz = semiconcavity_check(icz.u_h, ip.h, ip.grid_step, 500, 3, 1.0);
    CHECK(repz.violations == 0);
    CHECK(repz.max_violation <= 1e-12);

    // Lipschitz cone, truncated to stay bounded
    ScalarField cone = make_field(
        2, [](const Point& x) { return -std::min(x.norm(), 2.0); }, 2.0, 1e9,
        std::nullopt);
    auto icc = inf_convolution(cone, ip);
    auto repc = semiconcavity_check(icc.u_h, ip.h, ip.grid_step, 1500, 17, 1.5);
    CHECK(repc.violations == 0);

    ScalarField dip = scale_field(bump_field(2), -1.0);
    auto icd = inf_convolution(dip, ip);
    auto repd = semiconcavity_check(icd.u_h, ip.h, ip.grid_step, 1500, 23, 1.2);
    CHECK(repd.violations == 0);
}

TEST_CASE("scale_field keeps metadata consistent") {
    ScalarField b = bump_field(3);
    ScalarField nb = scale_field(b, -2.0);
    CHECK(nb.sup_bound == doctest::Approx(2.0));
    CHECK(nb(Point(0.0, 0.0, 0.0)) == doctest::Approx(-2.0));
    CHECK(*nb.c11 == doctest::Approx(16.0));
    REQUIRE(static_cast<bool>(nb.radial));
    CHECK(nb.radial->phi(0.5) == doctest::Approx(-2.0 * b.radial->phi(0.5)));
}
