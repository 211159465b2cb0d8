#pragma once

#include <stdexcept>

namespace nlop {

// Kernel data shared by every nonlocal operator: dimension, order, ellipticity
// bounds and the optional lower matrix cutoff eta used by the approximating
// extremal operator.
struct KernelParams {
    int n = 2;
    double sigma = 1.5;
    double lambda = 1.0;
    double Lambda = 4.0;
    double eta = 0.0;

    KernelParams() = default;
    KernelParams(int n_, double sigma_, double lambda_, double Lambda_, double eta_ = 0.0)
        : n(n_), sigma(sigma_), lambda(lambda_), Lambda(Lambda_), eta(eta_) {
        validate();
    }

    void validate() const {
        if (n < 2) throw std::domain_error("KernelParams: n must be >= 2");
        if (!(sigma > 0.0 && sigma < 2.0))
            throw std::domain_error("KernelParams: sigma must lie in (0,2)");
        if (!(lambda > 0.0) || !(Lambda >= lambda))
            throw std::domain_error("KernelParams: need 0 < lambda <= Lambda");
        if (!(eta >= 0.0 && eta <= lambda))
            throw std::domain_error("KernelParams: need 0 <= eta <= lambda");
    }
};

// Gamma function on the real line, poles excluded. Relative error well below
// 1e-12 on [-10, 50].
double gamma_fn(double x);

// sin(pi*x) with exact argument reduction; accurate for large |x|.
double sin_pi(double x);

// Normalizing constant A(n, 2-sigma) = Gamma((n+sigma-2)/2) /
// (pi^{n/2} 2^{2-sigma} Gamma((2-sigma)/2)), for n >= 2, sigma in (0,2).
double norm_const_pos(int n, double sigma);

// Normalizing constant A(n, -s) = 2^s Gamma((n+s)/2) / (pi^{n/2} |Gamma(-s/2)|)
// for s in (0,2). |Gamma(-s/2)| is evaluated as Gamma(1-s/2)/(s/2), which is
// stable at both ends of the interval. Serves both A(n,-sigma) and
// A(n,-(2-sigma)).
double norm_const_neg(int n, double s);

// Smallest M0 > 1 with ((3 M0 - 3)/6)^{-n+(2-sigma)} = 1/2,
// i.e. M0 = 1 + 2 * 2^{1/(n-2+sigma)}.
double compute_m0(int n, double sigma);

// Left-hand side of the M0 inequality, for substitution checks.
double m0_defining_value(int n, double sigma, double m0);

// Surface measure of the unit sphere in R^n.
double sphere_area(int n);

struct Constants {
    double a_pos;      // A(n, 2-sigma)
    double a_neg;      // A(n, -sigma)
    double a_neg_dual; // A(n, -(2-sigma))
    double m0;
};

Constants constants_for(const KernelParams& p);

} // namespace nlop
