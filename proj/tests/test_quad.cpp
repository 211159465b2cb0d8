#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "nlop/quad.hpp"

using namespace nlop;

namespace {

// Brute-force oracle for D^sigma u at x: log-uniform trapezoid in t times a
// dense uniform circle/sphere grid. Independent of the production rule
// (different node family, no error machinery).
SymMatrix brute_hessian(const ScalarField& u, const Point& x, const KernelParams& p,
                        double ri, double ro, int nt, int na) {
    const int n = p.n;
    const double A = norm_const_neg(n, p.sigma);
    SymMatrix acc(n);
    double ux = u(x);
    std::vector<Point> dirs;
    std::vector<double> ws;
    if (n == 2) {
        for (int j = 0; j < na; ++j) {
            double th = 2.0 * std::numbers::pi * (j + 0.5) / na;
            dirs.push_back(Point(std::cos(th), std::sin(th)));
            ws.push_back(2.0 * std::numbers::pi / na);
        }
    } else {
        int mt = na, mp = 2 * na;
        for (int k = 0; k < mt; ++k) {
            double c = -1.0 + 2.0 * (k + 0.5) / mt;
            double s = std::sqrt(1.0 - c * c);
            for (int j = 0; j < mp; ++j) {
                double ph = 2.0 * std::numbers::pi * (j + 0.5) / mp;
                dirs.push_back(Point(s * std::cos(ph), s * std::sin(ph), c));
                ws.push_back((2.0 / mt) * (2.0 * std::numbers::pi / mp));
            }
        }
    }
    double dlog = std::log(ro / ri) / nt;
    for (int k = 0; k < nt; ++k) {
        double t = ri * std::exp((k + 0.5) * dlog);
        double wt = t * dlog; // dt = t dlog t
        for (size_t d = 0; d < dirs.size(); ++d) {
            Point y = t * dirs[d];
            double delta = u(x + y) + u(x - y) - 2.0 * ux;
            double c = 0.5 * A * delta * std::pow(t, -1.0 - p.sigma) * wt * ws[d];
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) acc.add(i, j, c * dirs[d][i] * dirs[d][j]);
        }
    }
    // closed-form tail of the -2u(x) moment beyond ro (u compact, ro past it)
    for (int i = 0; i < n; ++i)
        acc.add(i, i, -ux * A * sphere_area(n) * std::pow(ro, -p.sigma) / (p.sigma * n));
    return acc;
}

} // namespace

TEST_CASE("riesz_potential: zero, sign, and radial oracle") {
    KernelParams p(2, 1.5, 1.0, 4.0);
    QuadratureSpec spec;
    spec.tol = 1e-7;
    ScalarField z = make_field(
        2, [](const Point&) { return 0.0; }, 0.0, 1.0, 0.0);
    CHECK(std::abs(riesz_potential(z, Point(0.3, 0.1), p, spec).value) <= 1e-12);

    // frozen 1-D radial oracle: P_bump(0) = A(2,1/2) * 2pi * 64/45
    ScalarField b = bump_field(2);
    auto p0 = riesz_potential(b, Point(0.0, 0.0), p, spec);
    CHECK(p0.value == doctest::Approx(0.67980628975804).epsilon(1e-6));
    CHECK(std::abs(p0.value - 0.67980628975804) <= p0.err_bound + 1e-9);
    auto p05 = riesz_potential(b, Point(0.5, 0.0), p, spec);
    CHECK(p05.value == doctest::Approx(0.43143823991077).epsilon(1e-6));

    // non-positive input gives non-positive potential
    ScalarField nb = scale_field(b, -1.0);
    for (double r : {0.0, 0.4, 0.9, 1.5, 3.0})
        CHECK(riesz_potential(nb, Point(r, 0.0), p, spec).value <= 1e-12);

    ScalarField open = make_field(
        2, [](const Point&) { return 1.0; }, 1.0,
        std::numeric_limits<double>::infinity(), 0.0);
    CHECK_THROWS_AS(riesz_potential(open, Point(0.0, 0.0), p, spec), std::domain_error);
}

TEST_CASE("riesz_potential: generic sphere rule agrees with the radial path") {
    KernelParams p(2, 1.5, 1.0, 4.0);
    QuadratureSpec spec;
    spec.tol = 1e-6;
    ScalarField b = bump_field(2);
    ScalarField generic = make_field(
        2, [b](const Point& x) { return b(x); }, 1.0, 1.0, 8.0);
    for (double r : {0.2, 0.7, 1.4}) {
        Point x(r, 0.05);
        auto a = riesz_potential(b, x, p, spec);
        auto g = riesz_potential(generic, x, p, spec);
        CHECK(std::abs(a.value - g.value) <= a.err_bound + g.err_bound + 1e-9);
    }
}

TEST_CASE("fractional_hessian: isotropy at the center and frozen value") {
    KernelParams p(2, 1.5, 1.0, 4.0);
    QuadratureSpec spec;
    spec.tol = 2.5e-3; // the certified floor for sigma-order kernels sits near 1e-3
    ScalarField b = bump_field(2);
    ScalarField generic = make_field(
        2, [b](const Point& x) { return b(x); }, 1.0, 1.0, 8.0);
    auto h = fractional_hessian(generic, Point(0.0, 0.0), p, spec);
    CHECK(std::abs(h.value(0, 1)) <= h.err_bound);
    CHECK(std::abs(h.value(0, 0) - h.value(1, 1)) <= 2.0 * h.err_bound);
    // hand-derived closed form: A(2,-3/2) * pi * (-64/15) on the diagonal
    double frozen = -2.2943462279334;
    CHECK(std::abs(h.value(0, 0) - frozen) <= h.err_bound + 1e-6);

    // unknown C^{1,1} seminorm is rejected
    ScalarField nameless = make_field(
        2, [b](const Point& x) { return b(x); }, 1.0, 1.0, std::nullopt);
    CHECK_THROWS_AS(fractional_hessian(nameless, Point(0.0, 0.0), p, spec),
                    std::domain_error);
    // unreachable tolerance is reported, not fudged
    QuadratureSpec absurd;
    absurd.tol = 1e-14;
    CHECK_THROWS_AS(fractional_hessian(generic, Point(0.0, 0.0), p, absurd),
                    accuracy_error);
}

TEST_CASE("fractional_hessian: affine part contributes nothing") {
    KernelParams p(2, 1.5, 1.0, 4.0);
    QuadratureSpec spec;
    spec.tol = 2.5e-3;
    ScalarField b = bump_field(2);
    ScalarField plain = make_field(
        2, [b](const Point& x) { return b(x); }, 1.0, 1.0, 8.0);
    const double a0 = 1e-3, a1 = -7e-4;
    const double cut = 500.0;
    ScalarField shifted = make_field(
        2,
        [b, a0, a1, cut](const Point& x) {
            if (x.norm() > cut) return 0.0;
            return b(x) + a0 * x[0] + a1 * x[1];
        },
        1.0 + cut * (std::abs(a0) + std::abs(a1)), cut, 8.0);
    Point x(0.2, -0.1);
    auto h1 = fractional_hessian(plain, x, p, spec);
    auto h2 = fractional_hessian(shifted, x, p, spec);
    CHECK((h1.value - h2.value).max_abs() <= 3.0 * (h1.err_bound + h2.err_bound));
}

TEST_CASE("fractional_hessian: brute-force oracle at 10x resolution") {
    KernelParams p(2, 1.5, 1.0, 4.0);
    QuadratureSpec spec;
    spec.tol = 2.5e-3;
    ScalarField b = bump_field(2);
    ScalarField generic = make_field(
        2, [b](const Point& x) { return b(x); }, 1.0, 1.0, 8.0);
    Point x(0.0, 0.0);
    auto h = fractional_hessian(generic, x, p, spec);
    SymMatrix oracle = brute_hessian(generic, x, p, 1e-9, 1.5, 4000, 720);
    CHECK((h.value - oracle).max_abs() <= 3.0 * h.err_bound);
}

TEST_CASE("fractional_hessian: kernel positivity") {
    // delta(u,0,y) = 2 min(|y|^2, R^2) >= 0, so Tr D^sigma u(0) >= -err
    KernelParams p(2, 1.3, 1.0, 4.0);
    QuadratureSpec spec;
    spec.tol = 1e-3;
    double R = 2.0;
    ScalarField q = make_field(
        2, [R](const Point& x) { return std::min(x.norm2(), R * R); }, R * R, 1e9, 2.0);
    q.far_bound = [R](double) { return R * R; };
    auto h = fractional_hessian(q, Point(0.0, 0.0), p, spec);
    CHECK(h.value.trace() >= -h.err_bound);
}

TEST_CASE("radial_reduce_hessian agrees with the full quadrature") {
    std::mt19937_64 rng(19);
    std::normal_distribution<double> g;
    for (int n : {2, 3}) {
        KernelParams p(n, n == 2 ? 1.3 : 1.5, 1.0, 4.0);
        QuadratureSpec spec;
        spec.tol = 2.5e-3;
        ScalarField b = bump_field(n);
        ScalarField generic = make_field(
            n, [b](const Point& x) { return b(x); }, 1.0, 1.0, 8.0);
        for (int rep = 0; rep < (n == 2 ? 6 : 4); ++rep) {
            Point x = Point::zero(n);
            double nn = 0;
            for (int i = 0; i < n; ++i) {
                x[i] = g(rng);
                nn += x[i] * x[i];
            }
            double scale = (0.1 + 0.8 * rep / 5.0) / std::sqrt(nn);
            for (int i = 0; i < n; ++i) x[i] *= scale;
            auto fast = radial_reduce_hessian(b, x, p, spec);
            auto full = fractional_hessian(generic, x, p, spec);
            CHECK((fast.value - full.value).max_abs() <=
                  fast.err_bound + full.err_bound);
            // xhat is an eigenvector of the reduced result
            double r = x.norm();
            std::vector<double> hx(static_cast<size_t>(n), 0.0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    hx[static_cast<size_t>(i)] += fast.value(i, j) * x[j] / r;
            double er = 0;
            for (int i = 0; i < n; ++i) er += hx[static_cast<size_t>(i)] * x[i] / r;
            for (int i = 0; i < n; ++i)
                CHECK(std::abs(hx[static_cast<size_t>(i)] - er * x[i] / r) <= 1e-12);
        }
        CHECK_THROWS_AS(radial_reduce_hessian(generic, Point::zero(n), p, spec),
                        std::domain_error);
    }
}

TEST_CASE("scaling law D^sigma u_s(x) = s^sigma (D^sigma u)(sx)") {
    KernelParams p(2, 1.4, 1.0, 4.0);
    QuadratureSpec spec;
    spec.tol = 5e-4;
    ScalarField b = bump_field(2);
    const double s = 2.0;
    auto prof = b.radial;
    auto scaled_prof = std::make_shared<RadialProfile>(
        std::vector<double>{1.0 / s},
        std::vector<RadialPiece>{
            RadialPiece{[prof, s](double r) { return prof->phi(s * r); },
                        [prof, s](double r) { return s * prof->dphi(s * r); },
                        [prof, s](double r) { return s * s * prof->ddphi(s * r); }},
            RadialPiece{[](double) { return 0.0; }, [](double) { return 0.0; },
                        [](double) { return 0.0; }}},
        false);
    ScalarField us = make_radial_field(2, scaled_prof, 1.0, 1.0 / s);
    Point x(0.21, 0.1);
    auto lhs = radial_reduce_hessian(us, x, p, spec);
    auto rhs = radial_reduce_hessian(b, s * x, p, spec);
    double factor = std::pow(s, p.sigma);
    CHECK((lhs.value - factor * rhs.value).max_abs() <=
          lhs.err_bound + factor * rhs.err_bound + 1e-9);
}

TEST_CASE("fractional_laplacian_dual: constants, symmetrization, radial path") {
    KernelParams p(2, 1.5, 1.0, 4.0);
    QuadratureSpec spec;
    spec.tol = 1e-3;

    ScalarField c = make_field(
        2, [](const Point&) { return 0.7; }, 0.7,
        std::numeric_limits<double>::infinity(), 0.0);
    c.far_bound = [](double) { return 0.7; };
    auto dc = fractional_laplacian_dual(c, Point(0.4, 0.0), p, spec);
    CHECK(std::abs(dc.value) <= spec.tol);

    ScalarField b = bump_field(2);
    for (double r : {0.0, 0.35, 0.8}) {
        auto d = fractional_laplacian_dual(b, Point(r, 0.0), p, spec);
        CHECK(std::abs(d.value - d.one_sided) <= 2.0 * d.err_bound);
    }
    // generic path sees the same numbers as the radial reduction
    ScalarField generic = make_field(
        2, [b](const Point& x) { return b(x); }, 1.0, 1.0, 8.0);
    for (double r : {0.3, 0.9}) {
        auto a = fractional_laplacian_dual(b, Point(r, 0.0), p, spec);
        auto g = fractional_laplacian_dual(generic, Point(r, 0.0), p, spec);
        CHECK(std::abs(a.value - g.value) <= a.err_bound + g.err_bound);
        CHECK(std::abs(g.value - g.one_sided) <= 2.0 * g.err_bound);
    }
}

TEST_CASE("refinement convergence: doubling stays within the reported bound") {
    KernelParams p(2, 1.5, 1.0, 4.0);
    ScalarField b = bump_field(2);
    Point x(0.3, 0.0);

    QuadratureSpec coarse;
    coarse.tol = 5e-3;
    coarse.radial_levels = 8;
    coarse.angular_points = 16;
    QuadratureSpec fine = coarse;
    fine.radial_levels = 16;
    fine.angular_points = 32;

    auto h1 = radial_reduce_hessian(b, x, p, coarse);
    auto h2 = radial_reduce_hessian(b, x, p, fine);
    CHECK((h1.value - h2.value).max_abs() <= h1.err_bound);

    auto d1 = fractional_laplacian_dual(b, x, p, coarse);
    auto d2 = fractional_laplacian_dual(b, x, p, fine);
    CHECK(std::abs(d1.value - d2.value) <= d1.err_bound);

    auto r1 = riesz_potential(b, x, p, coarse);
    auto r2 = riesz_potential(b, x, p, fine);
    CHECK(std::abs(r1.value - r2.value) <= r1.err_bound);
}

TEST_CASE("riesz_potential_field: table with far-field metadata") {
    KernelParams p(2, 1.5, 1.0, 4.0);
    QuadratureSpec spec;
    spec.tol = 1e-7;
    ScalarField v = scale_field(bump_field(2), -1.0);
    ScalarField P = riesz_potential_field(v, p, spec, 20.0, 400);
    REQUIRE(static_cast<bool>(P.radial));
    REQUIRE(static_cast<bool>(P.far_bound));
    // table against direct evaluation
    for (double r : {0.0, 0.5, 1.3, 4.0}) {
        double direct = riesz_potential(v, Point(r, 0.0), p, spec).value;
        CHECK(P(Point(r, 0.0)) == doctest::Approx(direct).epsilon(1e-5));
        CHECK(P(Point(r, 0.0)) <= 1e-12); // non-positive input
    }
    // far bound really bounds the tail values
    for (double r : {3.0, 8.0, 15.0})
        CHECK(std::abs(P(Point(r, 0.0))) <= P.far_bound(r) * (1.0 + 1e-6) + 1e-12);
    CHECK(P.far_bound(10.0) < 0.1);
}

TEST_CASE("QuadratureSpec validation") {
    QuadratureSpec s;
    CHECK_NOTHROW(s.validate(2));
    QuadratureSpec bad = s;
    bad.radial_levels = 4;
    CHECK_THROWS_AS(bad.validate(2), std::domain_error);
    bad = s;
    bad.angular_points = 4;
    CHECK_THROWS_AS(bad.validate(2), std::domain_error);
    bad = s;
    bad.angular_points = 20;
    CHECK_NOTHROW(bad.validate(2));
    CHECK_THROWS_AS(bad.validate(3), std::domain_error); // needs >= 26 on the sphere
    bad = s;
    bad.r_outer = 1e-5;
    CHECK_THROWS_AS(bad.validate(2), std::domain_error);
}
