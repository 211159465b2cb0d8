#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "nlop/errors.hpp"
#include "nlop/geometry.hpp"
#include "nlop/matrixcore.hpp"

namespace nlop {

// One smooth piece of a radial function: value and first two derivatives.
struct RadialPiece {
    std::function<double(double)> phi;
    std::function<double(double)> dphi;
    std::function<double(double)> ddphi;
};

// Piecewise radial data (phi, phi', phi'') on [0, inf). Pieces are indexed by
// the breakpoints; evaluation at a breakpoint uses the right piece
// (right-continuity; the jump set of phi'' is Lebesgue-null so integrals do
// not depend on the convention).
class RadialProfile {
  public:
    RadialProfile(std::vector<double> breakpoints, std::vector<RadialPiece> pieces,
                  bool monotone = false);

    double phi(double r) const { return piece(r).phi(r); }
    double dphi(double r) const { return piece(r).dphi(r); }
    double ddphi(double r) const { return piece(r).ddphi(r); }

    const std::vector<double>& breakpoints() const { return breaks_; }
    bool monotone() const { return monotone_; }

    // Max mismatch of phi and dphi across interior breakpoints (C^1 check).
    double c1_mismatch() const;

    // Sampled sup over [lo,hi] of max(|phi''|, |phi'/r|), i.e. an operator-norm
    // bound for the radial Hessian on the window. Estimate, not a certificate.
    double hessian_bound(double lo, double hi, int samples_per_piece = 64) const;

  private:
    const RadialPiece& piece(double r) const;

    std::vector<double> breaks_;
    std::vector<RadialPiece> pieces_;
    bool monotone_;
};

// Radial function tabulated on an increasing grid, with optional interior
// kink locations; cubic Lagrange interpolation never straddles a kink.
// Evaluates to 0 beyond the last node.
class RadialTable {
  public:
    RadialTable(std::vector<double> r, std::vector<double> f,
                std::vector<double> kinks = {});

    double operator()(double r) const;
    double deriv1(double r) const;
    double deriv2(double r) const;

    double r_max() const { return r_.back(); }
    double max_abs() const;
    const std::vector<double>& nodes() const { return r_; }
    const std::vector<double>& values() const { return f_; }

  private:
    void stencil(double r, int& i0, int& count) const;

    std::vector<double> r_, f_;
    std::vector<double> kinks_;
    std::vector<size_t> seg_of_; // segment id per node
};

// Evaluable function on R^n with the analytic metadata the quadratures need.
struct ScalarField {
    int dim = 2;
    std::function<double(const Point&)> eval;
    double sup_bound = 0.0;
    double support_radius = std::numeric_limits<double>::infinity();
    std::optional<double> c11; // L with |delta(u,x,y)| <= L|y|^2
    // Local refinement of c11 near a point: L on the ball B_r(x).
    std::function<double(const Point&, double)> c11_local;
    // Monotone bound R -> sup_{|x| >= R} |u|; enables tail control for fields
    // with unbounded support.
    std::function<double(double)> far_bound;
    // Absolute pointwise evaluation noise (0 = double rounding only). Tabulated
    // fields carry their build tolerance here; second differences of such
    // fields are meaningless below this amplitude and the quadratures account
    // for it in their certified bounds.
    double eval_noise = 0.0;
    std::shared_ptr<const RadialProfile> radial;

    double operator()(const Point& x) const { return eval(x); }

    // Best available C^{1,1} bound near x at scale r; throws if none known.
    double c11_near(const Point& x, double r) const;
};

// u(x+y) + u(x-y) - 2u(x).
double delta_second_diff(const ScalarField& u, const Point& x, const Point& y);

// Hessian of x -> phi(|x|):
//   phi''(r) xhat (x) xhat + (phi'(r)/r) (Id - xhat (x) xhat),  r = |x| > 0.
SymMatrix radial_hessian(const RadialProfile& p, const Point& x);

// Field builders -----------------------------------------------------------

ScalarField make_field(int dim, std::function<double(const Point&)> eval, double sup_bound,
                       double support_radius,
                       std::optional<double> c11 = std::nullopt);

ScalarField make_radial_field(int dim, std::shared_ptr<const RadialProfile> profile,
                              double sup_bound, double support_radius);

// Radial field backed by a table; c11_local is estimated from the
// interpolant's derivatives (sampled, with margin).
ScalarField make_table_field(int dim, std::shared_ptr<const RadialTable> table,
                             double support_radius = std::numeric_limits<double>::infinity());

// C^{1,1} bump (1-|x|^2)_+^2 as a radial field (sup 1, support 1, c11 = 8).
ScalarField bump_field(int dim);

// s * u with metadata scaled accordingly (radial profile preserved).
ScalarField scale_field(const ScalarField& u, double s);

// Smooth non-positive "indicator approximant" of B_1: -1 on [0,1/2], quintic
// ramp to 0 at r=1.
ScalarField neg_plateau_field(int dim);

// Mollification ------------------------------------------------------------

// Convolution with eps^{-n} bump(./eps), bump the normalized
// exp(-1/(1-|z|^2)) on B_1. Quadrature weights are normalized discretely, so
// constants are reproduced exactly and values stay inside [min u, max u].
ScalarField mollify(const ScalarField& u, double eps);

// Inf-convolution -----------------------------------------------------------

struct InfConvParams {
    double h = 0.1;
    double epsilon = 0.05;     // mollification radius used by callers
    double search_radius = 0;  // 0 = auto: 2 sqrt(h sup|u|) + 3 grid_step
    double grid_step = 0.01;
};

struct InfConvResult {
    ScalarField u_h;
    std::function<Point(const Point&)> argmin;
};

// u_h(x) = min over the offset grid of u(y) + |x-y|^2/(2h); exhaustive search
// over the ball of radius search_radius (the argmin bound |x*-x|^2 <=
// 4h sup|u| localizes it). Throws resolution_error from eval if the argmin
// lands on the search boundary.
InfConvResult inf_convolution(const ScalarField& u, const InfConvParams& params);

// Exact 1-D reduction for radial u: the minimizing y aligns with x, so
// u_h(|x|) = min_{t>=0} phi(t) + (r-t)^2/(2h). Returns u_h tabulated on
// [0, r_max] with step table_step; the inner grid search uses search_step.
RadialTable radial_inf_convolution(const std::function<double(double)>& phi, double sup_bound,
                                   double h, double search_step, double table_step,
                                   double r_max);

struct SemiconcavityReport {
    int samples = 0;
    int violations = 0;
    double max_violation = 0; // max of delta - |y|^2/h over samples
    double tol = 0;
};

// Checks delta(u_h, x, y) <= |y|^2/h + tol at random x in B_{x_radius} and
// lattice steps y (|y| up to ~3 grid_step, so the shared-argmin bound applies
// up to grid rounding). tol defaults to 2 grid_step^2 / h.
SemiconcavityReport semiconcavity_check(const ScalarField& u_h, double h, double grid_step,
                                        int samples, uint64_t seed, double x_radius);

} // namespace nlop
