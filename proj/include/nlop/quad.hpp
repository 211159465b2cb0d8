#pragma once

#include "nlop/fields.hpp"
#include "nlop/matrixcore.hpp"
#include "nlop/special.hpp"

namespace nlop {

// Controls for the singular-integral quadratures. The radial grid is
// geometric between r_inner and r_outer (radial_levels segments per e-fold,
// 4-point Gauss-Legendre per segment); zeros mean "resolve from the field and
// tolerance". Reported error bounds are
//   discretization estimate + near-origin bound + tail bound + rounding floor,
// each analytic except the discretization estimate (fine-vs-coarse).
struct QuadratureSpec {
    double r_inner = 1e-4;
    double r_outer = 0;     // 0 = auto from the tail bound
    int radial_levels = 16; // geometric segments per e-fold
    int angular_points = 0; // 0 = auto (n=2: 64 on the circle, n=3: ~200 on the sphere)
    double tol = 1e-4;

    void validate(int n) const;
    int resolved_angular(int n) const;
};

struct QuadResult {
    SymMatrix value;
    double err_bound; // entrywise
};

struct ScalarQuadResult {
    double value = 0;
    double err_bound = 0;
};

struct DualResult {
    double value = 0;     // symmetrized quadrature
    double one_sided = 0; // same nodes, one-sided integrand (cross-check)
    double err_bound = 0;
};

// D^sigma u(x) = (A(n,-sigma)/2) * integral of delta(u,x,y) (y ox y)/|y|^{n+2+sigma}.
QuadResult fractional_hessian(const ScalarField& u, const Point& x, const KernelParams& p,
                              const QuadratureSpec& spec);

// (A(n,-(2-sigma))/2) * integral of -delta(P,x,y)/|y|^{n+(2-sigma)}; recovers v
// from its Riesz potential P.
DualResult fractional_laplacian_dual(const ScalarField& P, const Point& x,
                                     const KernelParams& p, const QuadratureSpec& spec);

// Riesz potential P(x) = A(n,2-sigma) * integral of v(y)/|x-y|^{n-(2-sigma)};
// requires compactly supported v.
ScalarQuadResult riesz_potential(const ScalarField& v, const Point& x, const KernelParams& p,
                                 const QuadratureSpec& spec);

// Fast path for radial u: D^sigma u(x) is diagonal in the {xhat, tangential}
// frame, so a 2-D (t, theta) quadrature suffices. Throws for non-radial input.
QuadResult radial_reduce_hessian(const ScalarField& u, const Point& x, const KernelParams& p,
                                 const QuadratureSpec& spec);

// Tabulated Riesz potential of a radial compactly supported v, with far-field
// decay bound and estimated local C^{1,1} data attached.
ScalarField riesz_potential_field(const ScalarField& v, const KernelParams& p,
                                  const QuadratureSpec& spec, double table_r_max,
                                  int table_points);

} // namespace nlop
