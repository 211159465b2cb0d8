#include "nlop/quad.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>

namespace nlop {

void QuadratureSpec::validate(int n) const {
    if (!(tol > 0)) throw std::domain_error("QuadratureSpec: tol must be positive");
    if (!(r_inner > 0)) throw std::domain_error("QuadratureSpec: r_inner must be positive");
    if (r_outer > 0 && r_outer <= r_inner)
        throw std::domain_error("QuadratureSpec: need r_inner < r_outer");
    if (radial_levels < 8) throw std::domain_error("QuadratureSpec: radial_levels >= 8");
    int ap = resolved_angular(n);
    if (n == 2 && ap < 8) throw std::domain_error("QuadratureSpec: angular_points >= 8 (n=2)");
    if (n >= 3 && ap < 26) throw std::domain_error("QuadratureSpec: angular_points >= 26 (n=3)");
}

int QuadratureSpec::resolved_angular(int n) const {
    if (angular_points > 0) return angular_points;
    return n == 2 ? 64 : 200;
}

namespace {

struct RadialRule {
    std::vector<double> t, w;
};

// Geometric segments, fixed-order GL per segment. An optional focus window
// [wlo, whi] is additionally subdivided linearly (for integrands concentrated
// on a thin shell, e.g. evaluation points outside a compact support).
RadialRule geometric_radial(double r0, double r1, int levels_per_efold, double wlo = -1.0,
                            double whi = -1.0) {
    RadialRule rule;
    if (r1 <= r0) return rule;
    int segs = std::max(1, static_cast<int>(std::ceil(levels_per_efold * std::log(r1 / r0))));
    std::vector<double> cuts;
    cuts.reserve(static_cast<size_t>(segs) + 1);
    double q = std::pow(r1 / r0, 1.0 / segs);
    double a = r0;
    cuts.push_back(r0);
    for (int s = 1; s < segs; ++s) {
        a *= q;
        cuts.push_back(a);
    }
    cuts.push_back(r1);
    if (whi > wlo && whi > r0 && wlo < r1) {
        double lo = std::max(wlo, r0), hi = std::min(whi, r1);
        int wsegs = std::max(4, levels_per_efold);
        for (int s = 0; s <= wsegs; ++s) cuts.push_back(lo + (hi - lo) * s / wsegs);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [](double x, double y) { return y - x < 1e-12 * y; }),
                   cuts.end());
    }
    for (size_t s = 0; s + 1 < cuts.size(); ++s) {
        double mid = 0.5 * (cuts[s] + cuts[s + 1]), half = 0.5 * (cuts[s + 1] - cuts[s]);
        if (half <= 0) continue;
        for (int k = 0; k < 4; ++k) {
            rule.t.push_back(mid + half * kGL4Nodes[static_cast<size_t>(k)]);
            rule.w.push_back(half * kGL4Weights[static_cast<size_t>(k)]);
        }
    }
    return rule;
}

struct SphereRule {
    std::vector<Point> dir;
    std::vector<double> w; // sums to |S^{n-1}|
};

SphereRule full_sphere(int n, int target_points) {
    SphereRule rule;
    if (n == 2) {
        int m = std::max(8, target_points);
        if (m % 2) ++m;
        for (int j = 0; j < m; ++j) {
            double th = 2.0 * std::numbers::pi * (j + 0.5) / m;
            rule.dir.push_back(Point(std::cos(th), std::sin(th)));
            rule.w.push_back(2.0 * std::numbers::pi / m);
        }
    } else if (n == 3) {
        int mt = std::max(4, static_cast<int>(std::ceil(std::sqrt(target_points / 2.0))));
        int mp = 2 * mt;
        std::vector<double> cn, cw;
        gauss_legendre(mt, cn, cw);
        for (int k = 0; k < mt; ++k) {
            double c = cn[static_cast<size_t>(k)];
            double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            for (int j = 0; j < mp; ++j) {
                double ph = 2.0 * std::numbers::pi * (j + 0.5) / mp;
                rule.dir.push_back(Point(s * std::cos(ph), s * std::sin(ph), c));
                rule.w.push_back(cw[static_cast<size_t>(k)] * 2.0 * std::numbers::pi / mp);
            }
        }
    } else {
        throw std::domain_error("quadrature: dimension must be 2 or 3");
    }
    return rule;
}

// Ring rule for radial reductions: nodes c = cos(theta) with weights such
// that sum w f(c) approximates int_0^pi f(cos th) sin^{n-2}th dth, and
// `factor` = |S^{n-2}| completes the sphere measure.
struct PolarRule {
    std::vector<double> c, w;
    double factor;
};

PolarRule polar_rule(int n, int m) {
    PolarRule rule;
    if (n == 2) {
        std::vector<double> xn, xw;
        gauss_legendre(m, xn, xw);
        for (int k = 0; k < m; ++k) {
            double th = 0.5 * std::numbers::pi * (xn[static_cast<size_t>(k)] + 1.0);
            rule.c.push_back(std::cos(th));
            rule.w.push_back(0.5 * std::numbers::pi * xw[static_cast<size_t>(k)]);
        }
        rule.factor = 2.0;
    } else if (n == 3) {
        gauss_legendre(m, rule.c, rule.w);
        rule.factor = 2.0 * std::numbers::pi;
    } else {
        throw std::domain_error("quadrature: dimension must be 2 or 3");
    }
    return rule;
}

int polar_points(int n, int angular_points) {
    return n == 2 ? std::max(16, angular_points / 2)
                  : std::max(16, static_cast<int>(std::ceil(std::sqrt(angular_points / 2.0))));
}

// Inner cutoff choice: near(ri) = c_near*ri^p_near grows with ri, the
// evaluation-noise amplification noise(ri) = c_noise*ri^{-p_noise} shrinks
// with it. `start` (the spec default) is kept when it already meets the
// share; otherwise the cutoff floats in either direction, up to a hard cap,
// toward the largest radius meeting the share, or the unconstrained minimizer
// when the share is unattainable.
struct InnerCut {
    double ri, near_bound, noise_bound;
};

InnerCut pick_r_inner(double start, double c_near, double p_near, double c_noise,
                      double p_noise, double share) {
    constexpr double kHardCap = 0.05;
    auto total = [&](double r) {
        return c_near * std::pow(r, p_near) + c_noise * std::pow(r, -p_noise);
    };
    InnerCut cut;
    if (total(start) <= share) {
        cut.ri = start;
    } else {
        double rstar = std::pow(c_noise * p_noise / (c_near * p_near), 1.0 / (p_near + p_noise));
        rstar = std::min(rstar, kHardCap);
        if (total(rstar) <= share) {
            // largest feasible radius in [rstar, kHardCap]
            double lo = rstar, hi = kHardCap;
            for (int it = 0; it < 80; ++it) {
                double mid = std::sqrt(lo * hi);
                if (total(mid) <= share)
                    lo = mid;
                else
                    hi = mid;
            }
            cut.ri = lo;
        } else {
            cut.ri = rstar;
        }
    }
    cut.near_bound = c_near * std::pow(cut.ri, p_near);
    cut.noise_bound = c_noise * std::pow(cut.ri, -p_noise);
    return cut;
}

// Inner cutoff with a C^{1,1} window consistent with the chosen radius: when
// the cutoff floats above the requested window the curvature bound is refit
// on the enlarged window before being trusted.
InnerCut choose_inner(const ScalarField& u, const Point& x, double start, double coef_half,
                      double ord, double omega, double share) {
    double amp = std::max({u.eval_noise, DBL_EPSILON * u.sup_bound, 1e-30});
    double c_noise = coef_half * 4.0 * amp * omega / ord;
    double window = start;
    InnerCut cut{start, 0, 0};
    for (int it = 0; it < 4; ++it) {
        double L = u.c11_near(x, window);
        double c_near = coef_half * L * omega / (2.0 - ord);
        cut = pick_r_inner(start, c_near, 2.0 - ord, c_noise, ord, share);
        if (cut.ri <= window * (1.0 + 1e-9)) break;
        window = cut.ri;
    }
    if (cut.ri < window) {
        double L = u.c11_near(x, cut.ri);
        cut.near_bound = coef_half * L * omega / (2.0 - ord) * std::pow(cut.ri, 2.0 - ord);
    }
    return cut;
}

struct TailCut {
    double ro;
    double exact_factor;   // integral of the kernel moment over |y| > ro
    double residual_bound; // everything except the -2u(x) moment
};

// order > 0 is the kernel decay exponent (sigma for the Hessian, 2-sigma for
// the dual). The -2u(x) part of delta is integrated in closed form beyond ro;
// only u(x+y) + u(x-y) needs bounding out there.
TailCut pick_r_outer(const ScalarField& u, const Point& x, double coef_half, double order,
                     double omega, double share, double spec_ro, double lo_floor) {
    double xr = x.norm();
    auto residual = [&](double ro) {
        if (std::isfinite(u.support_radius) && ro >= xr + u.support_radius) return 0.0;
        double far = u.far_bound ? u.far_bound(std::max(0.0, ro - xr)) : u.sup_bound;
        return coef_half * 2.0 * far * omega * std::pow(ro, -order) / order;
    };
    TailCut cut;
    if (spec_ro > 0) {
        cut.ro = spec_ro;
    } else if (std::isfinite(u.support_radius)) {
        cut.ro = std::max(lo_floor, xr + u.support_radius + 1.0);
    } else {
        double ro = std::max(lo_floor, 2.0 * xr + 2.0);
        while (residual(ro) > share && ro < 1e7) ro *= 2.0;
        cut.ro = ro;
    }
    cut.exact_factor = omega * std::pow(cut.ro, -order) / order;
    cut.residual_bound = residual(cut.ro);
    return cut;
}

bool is_radial(const ScalarField& u) { return static_cast<bool>(u.radial); }

} // namespace

QuadResult fractional_hessian(const ScalarField& u, const Point& x, const KernelParams& p,
                              const QuadratureSpec& spec) {
    p.validate();
    spec.validate(p.n);
    if (!std::isfinite(u.sup_bound))
        throw std::domain_error("fractional_hessian: u must be bounded");
    const int n = p.n;
    const double sigma = p.sigma;
    const double A = norm_const_neg(n, sigma);
    const double omega = sphere_area(n);
    const double tol = spec.tol;

    InnerCut inner = choose_inner(u, x, spec.r_inner, 0.5 * A, sigma, omega, tol / 4.0);
    TailCut tail = pick_r_outer(u, x, 0.5 * A, sigma, omega, tol / 4.0, spec.r_outer,
                                4.0 * inner.ri);
    double fixed = inner.near_bound + inner.noise_bound + tail.residual_bound;
    if (fixed > tol)
        throw accuracy_error("fractional_hessian: truncation bounds exceed tolerance");

    const double ux = u(x);
    auto integrate = [&](int levels, int ap) {
        SphereRule sph = full_sphere(n, ap);
        RadialRule rad = geometric_radial(inner.ri, tail.ro, levels);
        std::vector<double> kern(rad.t.size());
        for (size_t k = 0; k < rad.t.size(); ++k)
            kern[k] = std::pow(rad.t[k], -1.0 - sigma) * rad.w[k];
        SymMatrix acc(n);
        for (size_t d = 0; d < sph.dir.size(); ++d) {
            const Point& dir = sph.dir[d];
            double ring = 0;
            SymMatrix dd = SymMatrix::outer(std::span<const double>(dir.c.data(),
                                                                    static_cast<size_t>(n)));
            for (size_t k = 0; k < rad.t.size(); ++k) {
                Point y = rad.t[k] * dir;
                double delta = u(x + y) + u(x - y) - 2.0 * ux;
                ring += delta * kern[k];
            }
            double c = 0.5 * A * ring * sph.w[d];
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) acc.add(i, j, c * dd(i, j));
        }
        return acc;
    };

    int levels = spec.radial_levels;
    int ap = spec.resolved_angular(n);
    SymMatrix prev = integrate(levels, ap);
    for (int iter = 0; iter < 4; ++iter) {
        SymMatrix fine = integrate(2 * levels, 2 * ap);
        double est = (fine - prev).max_abs();
        double err = est + fixed;
        if (err <= tol || iter == 3) {
            if (err > tol) throw accuracy_error("fractional_hessian: tolerance unreachable");
            // closed-form tail moment of -2u(x)
            for (int i = 0; i < n; ++i)
                fine.add(i, i, -ux * A * tail.exact_factor / n);
            return QuadResult{fine, err};
        }
        prev = fine;
        levels *= 2;
        ap *= 2;
    }
    throw accuracy_error("fractional_hessian: tolerance unreachable");
}

namespace {

// Radial-frame Hessian data of x -> phi(|x|) at radius r, with the sampled
// modulus of its variation over the window [r - ri, r + ri] (plus the frame
// rotation seen off the axis). Drives the second-order near-origin moment and
// its remainder bound.
struct NearOriginModel {
    double h_r, h_t; // radial / tangential second-derivative values at r
    double modulus;  // sup of |D^2 u(z) - D^2 u(x)| over the window, estimated
};

NearOriginModel near_origin_model(const RadialProfile& prof, double r, double ri) {
    NearOriginModel m{};
    if (r <= 0.0) {
        double probe = std::max(1e-12, 0.25 * ri);
        m.h_r = m.h_t = prof.ddphi(probe);
    } else {
        m.h_r = prof.ddphi(r);
        m.h_t = prof.dphi(r) / r;
    }
    double lo = std::max(0.0, r - ri), hi = r + ri;
    double dev = 0;
    const int samples = 48;
    for (int k = 0; k <= samples; ++k) {
        double rho = lo + (hi - lo) * (k + 0.35) / (samples + 0.7);
        if (rho <= 0.0) continue;
        dev = std::max(dev, std::abs(prof.ddphi(rho) - m.h_r));
        dev = std::max(dev, std::abs(prof.dphi(rho) / rho - m.h_t));
    }
    double rotation = (r > 0.0) ? 2.0 * (ri / r) * (std::abs(m.h_r) + std::abs(m.h_t)) : 0.0;
    m.modulus = 1.25 * dev + rotation;
    return m;
}

} // namespace

QuadResult radial_reduce_hessian(const ScalarField& u, const Point& x, const KernelParams& p,
                                 const QuadratureSpec& spec) {
    p.validate();
    spec.validate(p.n);
    if (!is_radial(u)) throw std::domain_error("radial_reduce_hessian: field is not radial");
    const int n = p.n;
    const double sigma = p.sigma;
    const double A = norm_const_neg(n, sigma);
    const double omega = sphere_area(n);
    const double tol = spec.tol;
    const double r = x.norm();
    const auto& prof = *u.radial;

    // Inner cutoff: the second-order Taylor moment over B_ri is added in
    // closed form, so only its remainder (local modulus of D^2 u) and the
    // evaluation-noise amplification compete. Scan for the best cutoff.
    const double amp = std::max({u.eval_noise, DBL_EPSILON * u.sup_bound, 1e-30});
    const double c_noise = 0.5 * A * 4.0 * amp * omega / sigma;
    const double c_rem = 0.5 * A * omega / (2.0 - sigma);
    const double ri_max = (r > 0.0) ? std::min(0.05, 0.5 * r) : 0.05;
    double ri = std::min(spec.r_inner, ri_max);
    NearOriginModel model = near_origin_model(prof, r, ri);
    {
        double best_total = c_rem * model.modulus * std::pow(ri, 2.0 - sigma) +
                            c_noise * std::pow(ri, -sigma);
        double cand = ri_max;
        for (int k = 0; k < 48 && cand > 1e-12; ++k, cand *= 0.7) {
            NearOriginModel mc = near_origin_model(prof, r, cand);
            double total = c_rem * mc.modulus * std::pow(cand, 2.0 - sigma) +
                           c_noise * std::pow(cand, -sigma);
            if (total < best_total) {
                best_total = total;
                ri = cand;
                model = mc;
            }
        }
    }
    double near_rem = c_rem * model.modulus * std::pow(ri, 2.0 - sigma);
    double noise_bound = c_noise * std::pow(ri, -sigma);

    TailCut tail = pick_r_outer(u, x, 0.5 * A, sigma, omega, tol / 4.0, spec.r_outer,
                                4.0 * ri);
    double fixed = near_rem + noise_bound + tail.residual_bound;
    if (fixed > tol)
        throw accuracy_error("radial_reduce_hessian: truncation bounds exceed tolerance");

    // closed-form second-order moment of the omitted core B_ri
    double trH = model.h_r + (n - 1) * model.h_t;
    double moment = 0.5 * A * std::pow(ri, 2.0 - sigma) / (2.0 - sigma) * omega /
                    (n * (n + 2.0));
    double near_er = moment * (trH + 2.0 * model.h_r);
    double near_et = moment * (trH + 2.0 * model.h_t);

    const double ur = prof.phi(r);
    // e_r, e_t: radial and tangential eigenvalues of the integral.
    auto integrate = [&](int levels, int mpol, double& e_r, double& e_t) {
        RadialRule rad = geometric_radial(ri, tail.ro, levels);
        if (r == 0.0) {
            double s = 0;
            for (size_t k = 0; k < rad.t.size(); ++k) {
                double t = rad.t[k];
                double delta = 2.0 * (prof.phi(t) - ur);
                s += delta * std::pow(t, -1.0 - sigma) * rad.w[k];
            }
            e_r = e_t = 0.5 * A * (omega / n) * s;
            return;
        }
        PolarRule pol = polar_rule(n, mpol);
        double sr = 0, st = 0;
        for (size_t k = 0; k < rad.t.size(); ++k) {
            double t = rad.t[k];
            double kern = std::pow(t, -1.0 - sigma) * rad.w[k];
            for (size_t a = 0; a < pol.c.size(); ++a) {
                double c = pol.c[a];
                double rp = std::sqrt(r * r + t * t + 2.0 * r * t * c);
                double rm = std::sqrt(r * r + t * t - 2.0 * r * t * c);
                double delta = prof.phi(rp) + prof.phi(rm) - 2.0 * ur;
                double w = pol.w[a] * kern;
                sr += delta * c * c * w;
                st += delta * (1.0 - c * c) / (n - 1) * w;
            }
        }
        e_r = 0.5 * A * pol.factor * sr;
        e_t = 0.5 * A * pol.factor * st;
    };

    int levels = spec.radial_levels;
    int mpol = polar_points(n, spec.resolved_angular(n));
    double er0, et0, er1, et1;
    integrate(levels, mpol, er0, et0);
    for (int iter = 0; iter < 4; ++iter) {
        integrate(2 * levels, 2 * mpol, er1, et1);
        double est = std::abs(er1 - er0) + std::abs(et1 - et0);
        double err = est + fixed;
        if (err <= tol || iter == 3) {
            if (err > tol)
                throw accuracy_error("radial_reduce_hessian: tolerance unreachable");
            double tail_term = -ur * A * tail.exact_factor / n;
            er1 += tail_term + near_er;
            et1 += tail_term + near_et;
            SymMatrix out(n);
            if (r == 0.0) {
                for (int i = 0; i < n; ++i) out.set(i, i, er1);
            } else {
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        double xij = x[i] * x[j] / (r * r);
                        out.set(i, j, er1 * xij + et1 * ((i == j ? 1.0 : 0.0) - xij));
                    }
            }
            return QuadResult{out, err};
        }
        er0 = er1;
        et0 = et1;
        levels *= 2;
        mpol *= 2;
    }
    throw accuracy_error("radial_reduce_hessian: tolerance unreachable");
}

DualResult fractional_laplacian_dual(const ScalarField& P, const Point& x,
                                     const KernelParams& p, const QuadratureSpec& spec) {
    p.validate();
    spec.validate(p.n);
    if (!std::isfinite(P.sup_bound))
        throw std::domain_error("fractional_laplacian_dual: P must be bounded");
    const int n = p.n;
    const double s = 2.0 - p.sigma; // order of the dual operator
    const double A = norm_const_neg(n, s);
    const double omega = sphere_area(n);
    const double tol = spec.tol;
    const double r = x.norm();

    InnerCut inner = choose_inner(P, x, spec.r_inner, 0.5 * A, s, omega, tol / 4.0);
    TailCut tail = pick_r_outer(P, x, 0.5 * A, s, omega, tol / 4.0, spec.r_outer, 4.0 * inner.ri);
    double fixed = inner.near_bound + inner.noise_bound + tail.residual_bound;
    if (fixed > tol)
        throw accuracy_error("fractional_laplacian_dual: truncation bounds exceed tolerance");

    const double px = P(x);
    const bool radial = is_radial(P);
    // P(x +- y) lives on a thin shell of |y| when x sits outside the support
    double wlo = -1.0, whi = -1.0;
    if (std::isfinite(P.support_radius) && r > P.support_radius) {
        wlo = r - P.support_radius;
        whi = r + P.support_radius;
    }

    auto integrate = [&](int levels, int angp, double& sym, double& one) {
        RadialRule rad = geometric_radial(inner.ri, tail.ro, levels, wlo, whi);
        sym = 0;
        one = 0;
        if (radial && r == 0.0) {
            const auto& prof = *P.radial;
            double acc = 0;
            for (size_t k = 0; k < rad.t.size(); ++k) {
                double t = rad.t[k];
                acc += 2.0 * (px - prof.phi(t)) * std::pow(t, -1.0 - s) * rad.w[k];
            }
            sym = 0.5 * A * omega * acc;
            one = sym;
            return;
        }
        if (radial) {
            const auto& prof = *P.radial;
            PolarRule pol = polar_rule(n, polar_points(n, angp));
            double accs = 0, acco = 0;
            for (size_t k = 0; k < rad.t.size(); ++k) {
                double t = rad.t[k];
                double kern = std::pow(t, -1.0 - s) * rad.w[k];
                for (size_t a = 0; a < pol.c.size(); ++a) {
                    double c = pol.c[a];
                    double pp = prof.phi(std::sqrt(r * r + t * t + 2.0 * r * t * c));
                    double pm = prof.phi(std::sqrt(r * r + t * t - 2.0 * r * t * c));
                    accs += (2.0 * px - pp - pm) * pol.w[a] * kern;
                    acco += 2.0 * (px - pp) * pol.w[a] * kern;
                }
            }
            sym = 0.5 * A * pol.factor * accs;
            one = 0.5 * A * pol.factor * acco;
            return;
        }
        SphereRule sph = full_sphere(n, angp);
        double accs = 0, acco = 0;
        for (size_t d = 0; d < sph.dir.size(); ++d) {
            double rs = 0, ro_ = 0;
            for (size_t k = 0; k < rad.t.size(); ++k) {
                Point y = rad.t[k] * sph.dir[d];
                double kern = std::pow(rad.t[k], -1.0 - s) * rad.w[k];
                double pp = P(x + y), pm = P(x - y);
                rs += (2.0 * px - pp - pm) * kern;
                ro_ += 2.0 * (px - pp) * kern;
            }
            accs += rs * sph.w[d];
            acco += ro_ * sph.w[d];
        }
        sym = 0.5 * A * accs;
        one = 0.5 * A * acco;
    };

    int levels = spec.radial_levels;
    int ap = spec.resolved_angular(n);
    double s0, o0, s1, o1;
    integrate(levels, ap, s0, o0);
    for (int iter = 0; iter < 4; ++iter) {
        integrate(2 * levels, 2 * ap, s1, o1);
        double est = std::abs(s1 - s0);
        double err = est + fixed;
        if (err <= tol || iter == 3) {
            if (err > tol)
                throw accuracy_error("fractional_laplacian_dual: tolerance unreachable");
            double tail_term = A * px * tail.exact_factor; // (A/2) * 2 P(x) * moment
            return DualResult{s1 + tail_term, o1 + tail_term, err};
        }
        s0 = s1;
        o0 = o1;
        levels *= 2;
        ap *= 2;
    }
    throw accuracy_error("fractional_laplacian_dual: tolerance unreachable");
}

ScalarQuadResult riesz_potential(const ScalarField& v, const Point& x, const KernelParams& p,
                                 const QuadratureSpec& spec) {
    p.validate();
    spec.validate(p.n);
    if (!std::isfinite(v.support_radius))
        throw std::domain_error("riesz_potential: v must be compactly supported");
    const int n = p.n;
    const double sigma = p.sigma;
    const double A2 = norm_const_pos(n, sigma);
    const double omega = sphere_area(n);
    const double tol = spec.tol;
    const double r = x.norm();
    const double T = r + v.support_radius;

    // integrand v(x+t th) t^{1-sigma}: no cancellation, plain sup bound near 0
    double c_near = A2 * v.sup_bound * omega / (2.0 - sigma);
    double ri = spec.r_inner;
    if (c_near * std::pow(ri, 2.0 - sigma) > tol / 4.0)
        ri = std::pow(tol / (4.0 * c_near), 1.0 / (2.0 - sigma));
    double near_bound = c_near * std::pow(ri, 2.0 - sigma);
    // outside the support the integrand vanishes below t = |x| - supp
    if (r - v.support_radius > ri) {
        ri = r - v.support_radius;
        near_bound = 0.0;
    }

    const bool radial = is_radial(v);
    auto integrate = [&](int levels, int angp) {
        RadialRule rad = geometric_radial(ri, T, levels);
        double acc = 0;
        if (radial) {
            const auto& prof = *v.radial;
            if (r == 0.0) {
                for (size_t k = 0; k < rad.t.size(); ++k)
                    acc += prof.phi(rad.t[k]) * std::pow(rad.t[k], 1.0 - sigma) * rad.w[k];
                return A2 * omega * acc;
            }
            PolarRule pol = polar_rule(n, polar_points(n, angp));
            for (size_t k = 0; k < rad.t.size(); ++k) {
                double t = rad.t[k];
                double kern = std::pow(t, 1.0 - sigma) * rad.w[k];
                for (size_t a = 0; a < pol.c.size(); ++a) {
                    double rp = std::sqrt(r * r + t * t + 2.0 * r * t * pol.c[a]);
                    acc += prof.phi(rp) * pol.w[a] * kern;
                }
            }
            return A2 * pol.factor * acc;
        }
        SphereRule sph = full_sphere(n, angp);
        for (size_t d = 0; d < sph.dir.size(); ++d) {
            double ray = 0;
            for (size_t k = 0; k < rad.t.size(); ++k)
                ray += v(x + rad.t[k] * sph.dir[d]) * std::pow(rad.t[k], 1.0 - sigma) * rad.w[k];
            acc += ray * sph.w[d];
        }
        return A2 * acc;
    };

    int levels = spec.radial_levels;
    int ap = spec.resolved_angular(n);
    double prev = integrate(levels, ap);
    for (int iter = 0; iter < 4; ++iter) {
        double fine = integrate(2 * levels, 2 * ap);
        double err = std::abs(fine - prev) + near_bound;
        if (err <= tol || iter == 3) {
            if (err > tol) throw accuracy_error("riesz_potential: tolerance unreachable");
            return ScalarQuadResult{fine, err};
        }
        prev = fine;
        levels *= 2;
        ap *= 2;
    }
    throw accuracy_error("riesz_potential: tolerance unreachable");
}

ScalarField riesz_potential_field(const ScalarField& v, const KernelParams& p,
                                  const QuadratureSpec& spec, double table_r_max,
                                  int table_points) {
    if (!is_radial(v)) throw std::domain_error("riesz_potential_field: v must be radial");
    p.validate();
    const double supp = v.support_radius;
    // dense nodes across the support, geometric into the far field
    std::vector<double> radii;
    int dense = std::max(16, (3 * table_points) / 4);
    double dense_max = std::min(1.5 * supp, table_r_max);
    for (int i = 0; i <= dense; ++i)
        radii.push_back(dense_max * i / dense);
    if (dense_max < table_r_max * (1.0 - 1e-12)) {
        int rest = std::max(8, table_points - dense);
        double q = std::pow(table_r_max / dense_max, 1.0 / rest);
        double rr = dense_max;
        for (int i = 0; i < rest; ++i) {
            rr = (i + 1 == rest) ? table_r_max : rr * q;
            if (rr > radii.back() * (1.0 + 1e-12)) radii.push_back(rr);
        }
    }
    std::vector<double> vals(radii.size());
    double worst_err = 0;
    for (size_t i = 0; i < radii.size(); ++i) {
        Point x = Point::zero(v.dim);
        x[0] = radii[i];
        auto res = riesz_potential(v, x, p, spec);
        vals[i] = res.value;
        worst_err = std::max(worst_err, res.err_bound);
    }
    auto table = std::make_shared<RadialTable>(std::move(radii), std::move(vals));
    ScalarField P = make_table_field(v.dim, table);
    P.eval_noise = worst_err;

    // |P(x)| <= A(n,2-sigma) ||v||_1 (|x| - supp)^{-(n-2+sigma)} past the support
    double omega = sphere_area(p.n);
    double l1 = 0;
    {
        RadialRule rad = geometric_radial(1e-6 * supp, supp, 24);
        for (size_t k = 0; k < rad.t.size(); ++k)
            l1 += std::abs(v(Point(rad.t[k], 0.0))) * std::pow(rad.t[k], p.n - 1.0) * rad.w[k];
        l1 *= omega;
    }
    double a2 = norm_const_pos(p.n, p.sigma);
    double decay = p.n - 2.0 + p.sigma;
    double sup_table = table->max_abs();
    P.sup_bound = sup_table;
    P.far_bound = [a2, l1, supp, decay, sup_table](double R) {
        if (R <= supp + 0.5) return sup_table;
        return std::min(sup_table, a2 * l1 * std::pow(R - supp, -decay));
    };
    return P;
}

} // namespace nlop
