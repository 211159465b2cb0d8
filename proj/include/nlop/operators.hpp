#pragma once

#include "nlop/quad.hpp"

namespace nlop {

// Extremal operator applied to a field at a point: the quadrature fractional
// Hessian composed with the exact extremal-trace program. The value error is
// the matrix entrywise bound weighted by sum_ij |argopt_ij|.
struct PucciFieldResult {
    double value = 0;
    double err_bound = 0;
    SymMatrix dsigma;     // D^sigma u(x)
    double dsigma_err = 0;
};

PucciFieldResult pucci_minus(const ScalarField& u, const Point& x, const KernelParams& p,
                             const QuadratureSpec& spec);
PucciFieldResult pucci_plus(const ScalarField& u, const Point& x, const KernelParams& p,
                            const QuadratureSpec& spec);

// Consistency of [D^2 P]_sigma with D^sigma v, P the Riesz potential of v.
// D^2 P comes from Richardson-extrapolated central differences (1-D radial
// differences when v is radial); D^sigma v from the quadrature.
struct HessianConsistencyReport {
    SymMatrix lhs;  // [D^2 P(x)]_sigma
    SymMatrix rhs;  // D^sigma v(x)
    double discrepancy = 0;      // Frobenius
    double relative = 0;         // discrepancy / max(1e-30, ||rhs||_F)
    double combined_bound = 0;   // certified quadrature + FD error (Frobenius)
    bool radial_path = false;
};

HessianConsistencyReport hessian_consistency(const ScalarField& v, const Point& x,
                                             const KernelParams& p, const QuadratureSpec& spec);

// Quantities of the Riesz-potential infimum relation for non-positive v
// supported in B_r: -inf_{outside B_{M0 r}} P <= -(1/2) inf_{B_{M0 r}} P.
struct RieszInfReport {
    double m0 = 0;
    double inf_inside = 0;
    double inf_outside = 0;
    double slack = 0; // tolerance granted to the inequality (sampling + quadrature)
    bool holds = false;
    int samples = 0;
};

RieszInfReport riesz_inf_ratio(const ScalarField& v, double r, const KernelParams& p,
                               const QuadratureSpec& spec);

// ABP-type ratio report: LHS = -inf over sampled B_1 of u, the L^p norm of
// f^+ over B_1, the explicit factor sigma M0^{2-n/p}/(sigma - n/p), and the
// dimensionless ratio. Data only; the theorem's constant is non-constructive.
struct AbpReport {
    double p_exponent = 0;
    double m0 = 0;
    double lhs = 0;
    double f_norm = 0;
    double factor = 0;
    double ratio = 0;
    int samples = 0;
};

AbpReport abp_ratio(const ScalarField& u, const ScalarField& f_plus, double p_exponent,
                    const KernelParams& p, const QuadratureSpec& spec);

// L^p norm over the ball B_R of a radial non-negative integrand given as a
// pointwise evaluator; 1-D quadrature with surface-measure weight. Segment
// edges let callers split at known kinks.
double lp_norm_radial(const std::function<double(double)>& f_abs, double p_exponent, int n,
                      double R, const std::vector<double>& edges, int points_per_segment = 64);

} // namespace nlop
