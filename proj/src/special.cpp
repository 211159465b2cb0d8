#include "nlop/special.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "nlop/geometry.hpp"

namespace nlop {

namespace {

// Lanczos approximation, g = 7, 9 terms. Evaluated in long double so the
// final double result keeps ~15 correct digits across [-10, 50].
long double lanczos_gamma(long double x) {
    static const long double g = 7.0L;
    static const long double coef[9] = {
        0.99999999999980993L,  676.5203681218851L,   -1259.1392167224028L,
        771.32342877765313L,   -176.61502916214059L, 12.507343278686905L,
        -0.13857109526572012L, 9.9843695780195716e-6L, 1.5056327351493116e-7L};
    // x >= 0.5 assumed here.
    x -= 1.0L;
    long double a = coef[0];
    for (int i = 1; i < 9; ++i) a += coef[i] / (x + static_cast<long double>(i));
    long double t = x + g + 0.5L;
    return std::sqrt(2.0L * std::numbers::pi_v<long double>) *
           std::pow(t, x + 0.5L) * std::exp(-t) * a;
}

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

} // namespace

double sin_pi(double x) {
    // Reduce to |r| <= 1/2 exactly in floating point, then flip sign by parity.
    double k = std::nearbyint(x);
    double r = x - k;
    double s = std::sin(std::numbers::pi * r);
    return (static_cast<long long>(k) % 2 == 0) ? s : -s;
}

double gamma_fn(double x) {
    if (is_nonpositive_integer(x))
        throw std::domain_error("gamma_fn: pole at non-positive integer");
    if (x < 0.5) {
        // Reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x)).
        return std::numbers::pi / (sin_pi(x) * static_cast<double>(lanczos_gamma(1.0L - static_cast<long double>(x))));
    }
    return static_cast<double>(lanczos_gamma(static_cast<long double>(x)));
}

double norm_const_pos(int n, double sigma) {
    if (n < 2) throw std::domain_error("norm_const_pos: n must be >= 2");
    if (!(sigma > 0.0 && sigma < 2.0))
        throw std::domain_error("norm_const_pos: sigma must lie in (0,2)");
    double num = gamma_fn((n + sigma - 2.0) / 2.0);
    double den = std::pow(std::numbers::pi, n / 2.0) * std::pow(2.0, 2.0 - sigma) *
                 gamma_fn((2.0 - sigma) / 2.0);
    return num / den;
}

double norm_const_neg(int n, double s) {
    if (n < 2) throw std::domain_error("norm_const_neg: n must be >= 2");
    if (!(s > 0.0 && s < 2.0))
        throw std::domain_error("norm_const_neg: s must lie in (0,2)");
    // |Gamma(-s/2)| = Gamma(1-s/2) / (s/2) for s in (0,2).
    double abs_gamma = gamma_fn(1.0 - s / 2.0) / (s / 2.0);
    return std::pow(2.0, s) * gamma_fn((n + s) / 2.0) /
           (std::pow(std::numbers::pi, n / 2.0) * abs_gamma);
}

double compute_m0(int n, double sigma) {
    if (n < 2) throw std::domain_error("compute_m0: n must be >= 2");
    if (!(sigma > 0.0 && sigma < 2.0))
        throw std::domain_error("compute_m0: sigma must lie in (0,2)");
    return 1.0 + 2.0 * std::pow(2.0, 1.0 / (n - 2.0 + sigma));
}

double m0_defining_value(int n, double sigma, double m0) {
    return std::pow((3.0 * m0 - 3.0) / 6.0, -static_cast<double>(n) + (2.0 - sigma));
}

double sphere_area(int n) {
    return 2.0 * std::pow(std::numbers::pi, n / 2.0) / gamma_fn(n / 2.0);
}

Constants constants_for(const KernelParams& p) {
    p.validate();
    Constants c;
    c.a_pos = norm_const_pos(p.n, p.sigma);
    c.a_neg = norm_const_neg(p.n, p.sigma);
    c.a_neg_dual = norm_const_neg(p.n, 2.0 - p.sigma);
    c.m0 = compute_m0(p.n, p.sigma);
    return c;
}

void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<size_t>(m), 0.0);
    weights.assign(static_cast<size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
        // Chebyshev initial guess, Newton on P_m.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<size_t>(i)] = x;
        weights[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

} // namespace nlop
