#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nlop/operators.hpp"

namespace nlop {

// Parameters of the critical-exponent family: tau = (sigma+1)/(sigma+n),
// p0 = n*tau. The construction needs sigma in (sqrt(n), 2) (so p0 > n/sigma),
// n in {2,3}, and Lambda >= (1+sigma)*lambda so that
// lambda(n+sigma) xhat (x) xhat lies in the ellipticity class.
struct CounterexampleParams {
    int n = 2;
    double sigma = 1.6;
    double lambda = 1.0;
    double Lambda = 4.0;
    int N = 16;

    double tau() const { return (sigma + 1.0) / (sigma + n); }
    double p0() const { return n * tau(); }
    KernelParams kernel() const { return KernelParams(n, sigma, lambda, Lambda, 0.0); }
    void validate() const;
};

// The piecewise profile phi_N: flat on [0,1/N), the log branch on [1/N,1-tau),
// the parabolic branch on [1-tau,1), zero beyond. phi' and phi'' are the
// closed-form branch derivatives; phi on the log branch is the antiderivative
// of phi' anchored so the profile is C^1 with phi(1) = 0.
RadialProfile phi_profile(const CounterexampleParams& cp);

// psi(r) = min{(1-r)/(tau^2 (1-tau)^{(1-tau)/tau}), 1/(tau r^{(1-tau)/tau})}
// on (0,1], zero for r > 1; non-increasing.
double psi(double r, double tau);

// c of the -u_N(0) >= c log(N/4) lower bound:
// (A(n,-(2-sigma))/2) * integral over B_1 \ B_{1/2} of psi(|y|)|y|^{sigma-n-1}.
double eq54_constant(int n, double sigma);

// P_N(x) = phi_N(|x|) as a field.
ScalarField p_n_field(const CounterexampleParams& cp);

// u_N(x), the (2-sigma)-order fractional Laplacian of P_N, by quadrature.
DualResult u_n_eval(const Point& x, const CounterexampleParams& cp, const QuadratureSpec& spec);

// u_N tabulated on [0, table_r_max] with far-field decay metadata; suitable
// as quadrature input for D^sigma u_N.
ScalarField u_n_field(const CounterexampleParams& cp, const QuadratureSpec& spec,
                      double table_r_max = 16.0, int table_points = 1100);

// M^- u_N at radius r, quadrature-free: radial Hessian of phi_N, the A_sigma
// map, and the exact extremal-trace program.
double mminus_u_n(double r, const CounterexampleParams& cp);

// [D^2 P_N(r e1)]_sigma, analytic.
SymMatrix d2pn_sigma(double r, const CounterexampleParams& cp);

// Analytic [D^2 P_N]_sigma against the quadrature D^sigma u_N at radius r;
// u_N supplied as a tabulated field (reusable across radii).
HessianConsistencyReport u_n_consistency(double r, const CounterexampleParams& cp,
                                         const ScalarField& u_n, const QuadratureSpec& spec);

struct CERow {
    int N = 0;
    double A = 0;       // -u_N(0)
    double A_bound = 0; // c log(N/4)
    double B = 0;       // ||(M^- u_N)^+||_{p0}(B_1)
    double B_bound = 0; // lambda(n+sigma) (|dB_1| log((1-tau)N))^{1/p0}
    double C = 0;       // A / B
    double D = 0;       // ||u_N||_inf
    double E = 0;       // ||[D^2 P_N]_sigma||_{p0}(B_{1/2})
    double F = 0;       // E / (B' + D), B' = ||M^- u_N||_{p0}(B_1)
    double A_err = 0;
    double B_prime = 0;
    bool flagged = false;
    std::string flag_msg;
};

struct CEReport {
    int n = 0;
    double sigma = 0, lambda = 0, Lambda = 0;
    double tau = 0, p0 = 0;
    double psi_c = 0; // the eq. (5.4) constant
    std::vector<CERow> rows;
    double c_exponent = 0;      // fitted growth exponent of C in log((1-tau)N)
    double f_exponent = 0;      // fitted growth exponent of F
    double c_exponent_ref = 0;  // 1 - 1/p0
    double f_exponent_ref = 0;  // 1/p0
};

// One row per N (shared n, sigma, lambda, Lambda); accuracy failures flag the
// row and the run continues.
CEReport run_report(const std::vector<CounterexampleParams>& ladder,
                    const QuadratureSpec& spec);

// CSV with the documented column set, 14 significant digits, '.' decimal.
void write_ce_csv(const CEReport& rep, std::ostream& os);

} // namespace nlop
