#include "nlop/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nlop {

RadialProfile::RadialProfile(std::vector<double> breakpoints, std::vector<RadialPiece> pieces,
                             bool monotone)
    : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)), monotone_(monotone) {
    if (pieces_.size() != breaks_.size() + 1)
        throw std::domain_error("RadialProfile: need one more piece than breakpoints");
    if (!std::is_sorted(breaks_.begin(), breaks_.end()))
        throw std::domain_error("RadialProfile: breakpoints must be ascending");
}

const RadialPiece& RadialProfile::piece(double r) const {
    size_t k = static_cast<size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), r) -
                                   breaks_.begin());
    return pieces_[k];
}

double RadialProfile::c1_mismatch() const {
    double worst = 0;
    for (size_t k = 0; k < breaks_.size(); ++k) {
        double b = breaks_[k];
        worst = std::max(worst, std::abs(pieces_[k].phi(b) - pieces_[k + 1].phi(b)));
        worst = std::max(worst, std::abs(pieces_[k].dphi(b) - pieces_[k + 1].dphi(b)));
    }
    return worst;
}

double RadialProfile::hessian_bound(double lo, double hi, int samples_per_piece) const {
    lo = std::max(lo, 0.0);
    if (hi <= lo) hi = lo + 1e-12;
    double bound = 0;
    // Sample each piece-overlap separately so jumps are not smeared.
    std::vector<double> edges{lo};
    for (double b : breaks_)
        if (b > lo && b < hi) edges.push_back(b);
    edges.push_back(hi);
    for (size_t s = 0; s + 1 < edges.size(); ++s) {
        double a = edges[s], b = edges[s + 1];
        for (int i = 0; i <= samples_per_piece; ++i) {
            double r = a + (b - a) * (i + 0.25) / (samples_per_piece + 0.5);
            if (r <= 0) continue;
            bound = std::max(bound, std::abs(ddphi(r)));
            bound = std::max(bound, std::abs(dphi(r)) / r);
        }
    }
    return 1.25 * bound; // sampling margin
}

RadialTable::RadialTable(std::vector<double> r, std::vector<double> f, std::vector<double> kinks)
    : r_(std::move(r)), f_(std::move(f)), kinks_(std::move(kinks)) {
    if (r_.size() != f_.size() || r_.size() < 2)
        throw std::domain_error("RadialTable: need matching node/value arrays");
    for (size_t i = 1; i < r_.size(); ++i)
        if (!(r_[i] > r_[i - 1]))
            throw std::domain_error("RadialTable: nodes must be strictly ascending");
    seg_of_.resize(r_.size());
    for (size_t i = 0; i < r_.size(); ++i) {
        seg_of_[i] = static_cast<size_t>(
            std::upper_bound(kinks_.begin(), kinks_.end(), r_[i]) - kinks_.begin());
    }
}

void RadialTable::stencil(double r, int& i0, int& count) const {
    const int n = static_cast<int>(r_.size());
    int hi = static_cast<int>(std::lower_bound(r_.begin(), r_.end(), r) - r_.begin());
    int i = std::clamp(hi - 1, 0, n - 2); // r in [r_i, r_{i+1}] roughly
    size_t seg = static_cast<size_t>(
        std::upper_bound(kinks_.begin(), kinks_.end(), r) - kinks_.begin());
    // Expand to 4 nodes inside the same segment.
    int lo = i, up = i + 1;
    auto same = [&](int k) { return k >= 0 && k < n && seg_of_[static_cast<size_t>(k)] == seg; };
    if (!same(lo) && same(up)) lo = up;
    if (!same(up) && same(lo)) up = lo;
    while (up - lo + 1 < 4 && (same(lo - 1) || same(up + 1))) {
        if (same(lo - 1)) --lo;
        if (up - lo + 1 < 4 && same(up + 1)) ++up;
    }
    i0 = lo;
    count = up - lo + 1;
}

double RadialTable::operator()(double r) const {
    if (r >= r_.back()) return 0.0;
    if (r <= r_.front()) r = r_.front();
    int i0, m;
    stencil(r, i0, m);
    // Lagrange interpolation on the stencil.
    double s = 0;
    for (int a = 0; a < m; ++a) {
        double l = 1.0;
        for (int b = 0; b < m; ++b) {
            if (a == b) continue;
            l *= (r - r_[static_cast<size_t>(i0 + b)]) /
                 (r_[static_cast<size_t>(i0 + a)] - r_[static_cast<size_t>(i0 + b)]);
        }
        s += l * f_[static_cast<size_t>(i0 + a)];
    }
    return s;
}

double RadialTable::deriv1(double r) const {
    if (r >= r_.back()) return 0.0;
    if (r <= r_.front()) r = r_.front();
    int i0, m;
    stencil(r, i0, m);
    double s = 0;
    for (int a = 0; a < m; ++a) {
        double dl = 0;
        for (int c = 0; c < m; ++c) {
            if (c == a) continue;
            double term = 1.0 / (r_[static_cast<size_t>(i0 + a)] - r_[static_cast<size_t>(i0 + c)]);
            for (int b = 0; b < m; ++b) {
                if (b == a || b == c) continue;
                term *= (r - r_[static_cast<size_t>(i0 + b)]) /
                        (r_[static_cast<size_t>(i0 + a)] - r_[static_cast<size_t>(i0 + b)]);
            }
            dl += term;
        }
        s += dl * f_[static_cast<size_t>(i0 + a)];
    }
    return s;
}

double RadialTable::deriv2(double r) const {
    if (r >= r_.back()) return 0.0;
    if (r <= r_.front()) r = r_.front();
    int i0, m;
    stencil(r, i0, m);
    if (m < 3) return 0.0;
    double s = 0;
    for (int a = 0; a < m; ++a) {
        double d2l = 0;
        for (int c = 0; c < m; ++c) {
            if (c == a) continue;
            for (int e = 0; e < m; ++e) {
                if (e == a || e == c) continue;
                double term = 1.0 /
                              ((r_[static_cast<size_t>(i0 + a)] - r_[static_cast<size_t>(i0 + c)]) *
                               (r_[static_cast<size_t>(i0 + a)] - r_[static_cast<size_t>(i0 + e)]));
                for (int b = 0; b < m; ++b) {
                    if (b == a || b == c || b == e) continue;
                    term *= (r - r_[static_cast<size_t>(i0 + b)]) /
                            (r_[static_cast<size_t>(i0 + a)] - r_[static_cast<size_t>(i0 + b)]);
                }
                d2l += term;
            }
        }
        s += d2l * f_[static_cast<size_t>(i0 + a)];
    }
    return s;
}

double RadialTable::max_abs() const {
    double m = 0;
    for (double v : f_) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::c11_near(const Point& x, double r) const {
    if (c11_local) return c11_local(x, r);
    if (c11) return *c11;
    throw std::domain_error("ScalarField: C^{1,1} seminorm unknown near evaluation point");
}

double delta_second_diff(const ScalarField& u, const Point& x, const Point& y) {
    return u(x + y) + u(x - y) - 2.0 * u(x);
}

SymMatrix radial_hessian(const RadialProfile& p, const Point& x) {
    double r = x.norm();
    if (r <= 0.0) throw std::domain_error("radial_hessian: x must be nonzero");
    const int n = x.dim;
    double dd = p.ddphi(r);
    double dr = p.dphi(r) / r;
    SymMatrix h(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double xij = x[i] * x[j] / (r * r);
            h.set(i, j, dd * xij + dr * ((i == j ? 1.0 : 0.0) - xij));
        }
    return h;
}

ScalarField make_field(int dim, std::function<double(const Point&)> eval, double sup_bound,
                       double support_radius, std::optional<double> c11) {
    ScalarField f;
    f.dim = dim;
    f.eval = std::move(eval);
    f.sup_bound = sup_bound;
    f.support_radius = support_radius;
    f.c11 = c11;
    return f;
}

ScalarField make_radial_field(int dim, std::shared_ptr<const RadialProfile> profile,
                              double sup_bound, double support_radius) {
    ScalarField f;
    f.dim = dim;
    f.radial = profile;
    f.eval = [profile](const Point& x) { return profile->phi(x.norm()); };
    f.sup_bound = sup_bound;
    f.support_radius = support_radius;
    f.c11_local = [profile](const Point& x, double r) {
        return profile->hessian_bound(x.norm() - r, x.norm() + r);
    };
    return f;
}

ScalarField make_table_field(int dim, std::shared_ptr<const RadialTable> table,
                             double support_radius) {
    auto profile = std::make_shared<RadialProfile>(
        std::vector<double>{},
        std::vector<RadialPiece>{RadialPiece{
            [table](double r) { return (*table)(r); },
            [table](double r) { return table->deriv1(r); },
            [table](double r) { return table->deriv2(r); }}},
        false);
    ScalarField f = make_radial_field(dim, profile, table->max_abs(), support_radius);
    // Curvature estimate sampled at cell midpoints: the interpolant's second
    // derivative is well behaved there, while stencil switches at the nodes
    // would contaminate a naive sweep.
    f.c11_local = [table](const Point& x, double w) {
        const auto& nodes = table->nodes();
        double lo = std::max(nodes.front(), x.norm() - w);
        double hi = std::min(nodes.back(), x.norm() + w);
        size_t i0 = static_cast<size_t>(
            std::lower_bound(nodes.begin(), nodes.end(), lo) - nodes.begin());
        double bound = 0.0;
        bool any = false;
        for (size_t i = i0; i + 1 < nodes.size() && nodes[i] <= hi; ++i) {
            double mid = 0.5 * (nodes[i] + nodes[i + 1]);
            bound = std::max(bound, std::abs(table->deriv2(mid)));
            if (mid > 1e-12) bound = std::max(bound, std::abs(table->deriv1(mid)) / mid);
            any = true;
        }
        if (!any) {
            double mid = std::clamp(x.norm(), nodes.front(), nodes.back());
            bound = std::abs(table->deriv2(mid));
            if (mid > 1e-12) bound = std::max(bound, std::abs(table->deriv1(mid)) / mid);
        }
        return 1.25 * bound;
    };
    return f;
}

ScalarField bump_field(int dim) {
    auto profile = std::make_shared<RadialProfile>(
        std::vector<double>{1.0},
        std::vector<RadialPiece>{
            RadialPiece{[](double r) {
                            double t = 1.0 - r * r;
                            return t * t;
                        },
                        [](double r) { return -4.0 * r * (1.0 - r * r); },
                        [](double r) { return 12.0 * r * r - 4.0; }},
            RadialPiece{[](double) { return 0.0; }, [](double) { return 0.0; },
                        [](double) { return 0.0; }}},
        false);
    ScalarField f = make_radial_field(dim, profile, 1.0, 1.0);
    f.c11 = 8.0;
    return f;
}

ScalarField scale_field(const ScalarField& u, double s) {
    ScalarField f = u;
    auto inner = u.eval;
    f.eval = [inner, s](const Point& x) { return s * inner(x); };
    f.sup_bound = std::abs(s) * u.sup_bound;
    f.eval_noise = std::abs(s) * u.eval_noise;
    if (u.c11) f.c11 = std::abs(s) * *u.c11;
    if (u.c11_local) {
        auto loc = u.c11_local;
        double as = std::abs(s);
        f.c11_local = [loc, as](const Point& x, double r) { return as * loc(x, r); };
    }
    if (u.far_bound) {
        auto far = u.far_bound;
        double as = std::abs(s);
        f.far_bound = [far, as](double R) { return as * far(R); };
    }
    if (u.radial) {
        auto prof = u.radial;
        std::vector<RadialPiece> pieces;
        for (size_t k = 0; k < prof->breakpoints().size() + 1; ++k)
            pieces.push_back(RadialPiece{[prof, s](double r) { return s * prof->phi(r); },
                                         [prof, s](double r) { return s * prof->dphi(r); },
                                         [prof, s](double r) { return s * prof->ddphi(r); }});
        f.radial = std::make_shared<RadialProfile>(std::vector<double>(prof->breakpoints()),
                                                   std::move(pieces),
                                                   prof->monotone() && s >= 0);
    }
    return f;
}

ScalarField neg_plateau_field(int dim) {
    // -1 on [0, 1/2], quintic smoothstep up to 0 at r = 1.
    auto ramp = [](double r) {
        double t = std::clamp(2.0 * r - 1.0, 0.0, 1.0);
        return -1.0 + t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
    };
    auto dramp = [](double r) {
        double t = std::clamp(2.0 * r - 1.0, 0.0, 1.0);
        return 2.0 * 30.0 * t * t * (1.0 - t) * (1.0 - t);
    };
    auto ddramp = [](double r) {
        double t = std::clamp(2.0 * r - 1.0, 0.0, 1.0);
        return 4.0 * 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
    };
    auto profile = std::make_shared<RadialProfile>(
        std::vector<double>{0.5, 1.0},
        std::vector<RadialPiece>{
            RadialPiece{[](double) { return -1.0; }, [](double) { return 0.0; },
                        [](double) { return 0.0; }},
            RadialPiece{ramp, dramp, ddramp},
            RadialPiece{[](double) { return 0.0; }, [](double) { return 0.0; },
                        [](double) { return 0.0; }}},
        false);
    ScalarField f = make_radial_field(dim, profile, 1.0, 1.0);
    f.c11 = 240.0;
    return f;
}

namespace {

struct MollifierRule {
    std::vector<Point> nodes;   // in the unit ball
    std::vector<double> weights; // bump-weighted quadrature weights, sum = 1
};

MollifierRule mollifier_rule(int dim) {
    MollifierRule rule;
    auto bump = [](double r2) {
        return (r2 < 1.0) ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
    };
    std::vector<double> gr, gw;
    gauss_legendre(24, gr, gw);
    if (dim == 2) {
        const int m_th = 32;
        for (size_t i = 0; i < gr.size(); ++i) {
            double t = 0.5 * (gr[i] + 1.0); // radius in (0,1)
            double wt = 0.5 * gw[i] * t;    // jacobian t dt
            for (int j = 0; j < m_th; ++j) {
                double th = 2.0 * std::numbers::pi * (j + 0.5) / m_th;
                Point z(t * std::cos(th), t * std::sin(th));
                rule.nodes.push_back(z);
                rule.weights.push_back(wt * (2.0 * std::numbers::pi / m_th) * bump(t * t));
            }
        }
    } else if (dim == 3) {
        std::vector<double> cn, cw;
        gauss_legendre(12, cn, cw);
        const int m_ph = 24;
        for (size_t i = 0; i < gr.size(); ++i) {
            double t = 0.5 * (gr[i] + 1.0);
            double wt = 0.5 * gw[i] * t * t;
            for (size_t k = 0; k < cn.size(); ++k) {
                double cth = cn[k], sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
                for (int j = 0; j < m_ph; ++j) {
                    double ph = 2.0 * std::numbers::pi * (j + 0.5) / m_ph;
                    Point z(t * sth * std::cos(ph), t * sth * std::sin(ph), t * cth);
                    rule.nodes.push_back(z);
                    rule.weights.push_back(wt * cw[k] * (2.0 * std::numbers::pi / m_ph) *
                                           bump(t * t));
                }
            }
        }
    } else {
        throw std::domain_error("mollify: dim must be 2 or 3");
    }
    double total = 0;
    for (double w : rule.weights) total += w;
    for (double& w : rule.weights) w /= total;
    return rule;
}

} // namespace

ScalarField mollify(const ScalarField& u, double eps) {
    if (!(eps > 0)) throw std::domain_error("mollify: epsilon must be positive");
    auto rule = std::make_shared<MollifierRule>(mollifier_rule(u.dim));
    ScalarField base = u;
    ScalarField f;
    f.dim = u.dim;
    f.eval = [base, rule, eps](const Point& x) {
        double s = 0;
        for (size_t k = 0; k < rule->nodes.size(); ++k)
            s += rule->weights[k] * base(x - eps * rule->nodes[k]);
        return s;
    };
    f.sup_bound = u.sup_bound;
    f.support_radius = (std::isfinite(u.support_radius)) ? u.support_radius + eps
                                                         : u.support_radius;
    f.eval_noise = u.eval_noise; // convex weights cannot amplify it
    f.c11 = u.c11; // |delta(u_eps)| <= sup_z |delta(u, .-z)|
    if (u.c11_local) {
        auto inner = u.c11_local;
        f.c11_local = [inner, eps](const Point& x, double r) { return inner(x, r + eps); };
    }
    if (u.far_bound) {
        auto inner = u.far_bound;
        f.far_bound = [inner, eps](double R) { return inner(std::max(0.0, R - eps)); };
    }
    return f;
}

namespace {

struct InfConvData {
    ScalarField u;
    double h;
    double search_radius;
    double grid_step;
    std::vector<Point> offsets; // includes the origin

    struct Best {
        double value;
        Point offset;
    };

    Best minimize(const Point& x) const {
        double best = u(x); // offset 0, penalty 0
        Point boff = Point::zero(x.dim);
        for (const Point& o : offsets) {
            double v = u(x + o) + o.norm2() / (2.0 * h);
            if (v < best) {
                best = v;
                boff = o;
            }
        }
        if (boff.norm() > search_radius - 0.75 * grid_step)
            throw resolution_error("inf_convolution: argmin on search boundary");
        return Best{best, boff};
    }
};

} // namespace

InfConvResult inf_convolution(const ScalarField& u, const InfConvParams& params) {
    if (!(params.h > 0)) throw std::domain_error("inf_convolution: h must be positive");
    if (!std::isfinite(u.sup_bound))
        throw std::domain_error("inf_convolution: u must be bounded");
    auto data = std::make_shared<InfConvData>();
    data->u = u;
    data->h = params.h;
    data->grid_step = params.grid_step;
    double r = params.search_radius > 0
                   ? params.search_radius
                   : 2.0 * std::sqrt(params.h * u.sup_bound) + 3.0 * params.grid_step;
    // the argmin ball must fit inside the search region
    if (r < 2.0 * std::sqrt(params.h * u.sup_bound) + params.grid_step)
        throw std::domain_error("inf_convolution: search_radius below the argmin bound");
    data->search_radius = r;
    const double g = params.grid_step;
    const int K = static_cast<int>(std::ceil(r / g));
    for (int i = -K; i <= K; ++i)
        for (int j = -K; j <= K; ++j) {
            if (u.dim == 2) {
                Point o(i * g, j * g);
                if (o.norm() <= r) data->offsets.push_back(o);
            } else {
                for (int k = -K; k <= K; ++k) {
                    Point o(i * g, j * g, k * g);
                    if (o.norm() <= r) data->offsets.push_back(o);
                }
            }
        }

    InfConvResult res;
    res.u_h.dim = u.dim;
    res.u_h.eval = [data](const Point& x) { return data->minimize(x).value; };
    res.u_h.sup_bound = u.sup_bound;
    res.u_h.support_radius = std::isfinite(u.support_radius)
                                 ? u.support_radius + data->search_radius
                                 : u.support_radius;
    res.argmin = [data](const Point& x) { return x + data->minimize(x).offset; };
    return res;
}

RadialTable radial_inf_convolution(const std::function<double(double)>& phi, double sup_bound,
                                   double h, double search_step, double table_step,
                                   double r_max) {
    if (!(h > 0) || !(search_step > 0) || !(table_step > 0))
        throw std::domain_error("radial_inf_convolution: positive steps required");
    double reach = 2.0 * std::sqrt(h * sup_bound) + 3.0 * search_step;
    std::vector<double> rs, fs;
    for (double r = 0.0; r <= r_max + 0.5 * table_step; r += table_step) {
        double lo = std::max(0.0, r - reach);
        double hi = r + reach;
        double best = phi(r);
        for (double t = lo; t <= hi + 0.5 * search_step; t += search_step) {
            double v = phi(t) + (r - t) * (r - t) / (2.0 * h);
            best = std::min(best, v);
        }
        rs.push_back(r);
        fs.push_back(best);
    }
    return RadialTable(std::move(rs), std::move(fs));
}

SemiconcavityReport semiconcavity_check(const ScalarField& u_h, double h, double grid_step,
                                        int samples, uint64_t seed, double x_radius) {
    SemiconcavityReport rep;
    rep.samples = samples;
    rep.tol = 2.0 * grid_step * grid_step / h;
    Halton hal(u_h.dim, 10 + seed % 97);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> step(-2, 2);
    for (int s = 0; s < samples; ++s) {
        Point x = hal.next_in_ball(x_radius);
        Point y = Point::zero(u_h.dim);
        bool nonzero = false;
        for (int d = 0; d < u_h.dim; ++d) {
            int k = step(rng);
            y[d] = k * grid_step;
            nonzero = nonzero || (k != 0);
        }
        if (!nonzero) y[0] = grid_step;
        double viol = delta_second_diff(u_h, x, y) - y.norm2() / h;
        rep.max_violation = std::max(rep.max_violation, viol);
        if (viol > rep.tol) ++rep.violations;
    }
    return rep;
}

} // namespace nlop
