#include "nlop/matrixcore.hpp"

#include <algorithm>
#include <cmath>

namespace nlop {

double SymMatrix::frobenius() const {
    double s = 0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            double v = (*this)(i, j);
            s += v * v;
        }
    return std::sqrt(s);
}

double SymMatrix::max_abs() const {
    double m = 0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
    if (o.n_ != n_) throw std::domain_error("SymMatrix: dimension mismatch");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
    if (o.n_ != n_) throw std::domain_error("SymMatrix: dimension mismatch");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
    for (double& v : a_) v *= s;
    return *this;
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

double trace_product(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw std::domain_error("trace_product: dimension mismatch");
    double s = 0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) s += a(i, j) * b(j, i);
    return s;
}

EigenSym eigen_sym(const SymMatrix& m) {
    const int n = m.dim();
    std::vector<double> a(static_cast<size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[static_cast<size_t>(i + n * j)] = m(i, j);
    std::vector<double> v(static_cast<size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i + n * i)] = 1.0;

    auto at = [&](std::vector<double>& w, int i, int j) -> double& {
        return w[static_cast<size_t>(i + n * j)];
    };

    double scale = m.max_abs();
    if (scale == 0.0) scale = 1.0;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += at(a, p, q) * at(a, p, q);
        if (std::sqrt(off) < 1e-15 * scale) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = at(a, p, q);
                if (std::abs(apq) < 1e-18 * scale) continue;
                double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = at(a, k, p), akq = at(a, k, q);
                    at(a, k, p) = c * akp - s * akq;
                    at(a, k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = at(a, p, k), aqk = at(a, q, k);
                    at(a, p, k) = c * apk - s * aqk;
                    at(a, q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = at(v, k, p), vkq = at(v, k, q);
                    at(v, k, p) = c * vkp - s * vkq;
                    at(v, k, q) = s * vkp + c * vkq;
                }
            }
    }

    EigenSym e;
    e.n = n;
    e.values.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) e.values[static_cast<size_t>(i)] = at(a, i, i);
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return e.values[static_cast<size_t>(i)] < e.values[static_cast<size_t>(j)];
    });
    EigenSym out;
    out.n = n;
    out.values.resize(static_cast<size_t>(n));
    out.vectors.resize(static_cast<size_t>(n * n));
    for (int j = 0; j < n; ++j) {
        int src = order[static_cast<size_t>(j)];
        out.values[static_cast<size_t>(j)] = e.values[static_cast<size_t>(src)];
        for (int i = 0; i < n; ++i)
            out.vectors[static_cast<size_t>(i + n * j)] = at(v, i, src);
    }
    return out;
}

SymMatrix a_sigma_map(const SymMatrix& a, const KernelParams& p) {
    if (a.dim() != p.n) throw std::domain_error("a_sigma_map: dimension mismatch");
    SymMatrix r = a;
    r *= p.sigma;
    double t = a.trace();
    for (int i = 0; i < a.dim(); ++i) r.add(i, i, t);
    r *= 1.0 / (p.n + p.sigma);
    return r;
}

bool in_class(const SymMatrix& a, const KernelParams& p, double tol) {
    if (a.dim() != p.n) return false;
    auto ea = eigen_sym(a);
    if (ea.values.front() < p.eta - tol) return false;
    auto es = eigen_sym(a_sigma_map(a, p));
    return es.values.front() >= p.lambda - tol && es.values.back() <= p.Lambda + tol;
}

namespace {

struct DiagLP {
    int n;
    double eta, lo, hi, sigma; // lo = lambda(n+sigma), hi = Lambda(n+sigma)

    bool feasible(std::span<const double> a, double tol) const {
        double s = 0;
        for (int i = 0; i < n; ++i) {
            if (a[static_cast<size_t>(i)] < eta - tol) return false;
            s += a[static_cast<size_t>(i)];
        }
        for (int i = 0; i < n; ++i) {
            double g = sigma * a[static_cast<size_t>(i)] + s;
            if (g < lo - tol || g > hi + tol) return false;
        }
        return true;
    }
};

DiagLP make_lp(const KernelParams& p) {
    p.validate();
    if (p.n > 6) throw std::domain_error("pucci_extremal_trace: n > 6 not supported");
    return DiagLP{p.n, p.eta, p.lambda * (p.n + p.sigma), p.Lambda * (p.n + p.sigma), p.sigma};
}

// Solve the k x k system rows*x = rhs by Gaussian elimination; false if singular.
bool solve_dense(std::vector<double> m, std::vector<double> rhs, int k,
                 std::vector<double>& x) {
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(m[static_cast<size_t>(r * k + col)]) >
                std::abs(m[static_cast<size_t>(piv * k + col)]))
                piv = r;
        if (std::abs(m[static_cast<size_t>(piv * k + col)]) < 1e-12) return false;
        if (piv != col) {
            for (int c = 0; c < k; ++c)
                std::swap(m[static_cast<size_t>(col * k + c)], m[static_cast<size_t>(piv * k + c)]);
            std::swap(rhs[static_cast<size_t>(col)], rhs[static_cast<size_t>(piv)]);
        }
        double d = m[static_cast<size_t>(col * k + col)];
        for (int r = col + 1; r < k; ++r) {
            double f = m[static_cast<size_t>(r * k + col)] / d;
            if (f == 0.0) continue;
            for (int c = col; c < k; ++c)
                m[static_cast<size_t>(r * k + c)] -= f * m[static_cast<size_t>(col * k + c)];
            rhs[static_cast<size_t>(r)] -= f * rhs[static_cast<size_t>(col)];
        }
    }
    x.assign(static_cast<size_t>(k), 0.0);
    for (int r = k - 1; r >= 0; --r) {
        double s = rhs[static_cast<size_t>(r)];
        for (int c = r + 1; c < k; ++c)
            s -= m[static_cast<size_t>(r * k + c)] * x[static_cast<size_t>(c)];
        x[static_cast<size_t>(r)] = s / m[static_cast<size_t>(r * k + r)];
    }
    return true;
}

// Enumerate the vertices of the feasible polytope {a_i >= eta,
// lo <= sigma a_i + sum_j a_j <= hi} and report the best objective.
bool enumerate_vertices(const DiagLP& lp, std::span<const double> d, bool maximize,
                        std::vector<double>& best_a, double& best_val) {
    const int n = lp.n;
    const int m = 3 * n; // constraint rows: a_i = eta, sigma a_i + S = lo, = hi
    std::vector<int> pick(static_cast<size_t>(n));
    std::vector<double> rows, rhs, a;
    bool found = false;
    double tol = 1e-9 * std::max(1.0, lp.hi);

    std::vector<int> stack;
    stack.reserve(static_cast<size_t>(n));
    // iterative combination enumeration over C(m, n)
    std::vector<int> comb(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) comb[static_cast<size_t>(i)] = i;
    for (;;) {
        rows.assign(static_cast<size_t>(n * n), 0.0);
        rhs.assign(static_cast<size_t>(n), 0.0);
        for (int r = 0; r < n; ++r) {
            int c = comb[static_cast<size_t>(r)];
            int which = c / n;   // 0: a_i = eta, 1: = lo, 2: = hi
            int i = c % n;
            if (which == 0) {
                rows[static_cast<size_t>(r * n + i)] = 1.0;
                rhs[static_cast<size_t>(r)] = lp.eta;
            } else {
                for (int j = 0; j < n; ++j) rows[static_cast<size_t>(r * n + j)] = 1.0;
                rows[static_cast<size_t>(r * n + i)] += lp.sigma;
                rhs[static_cast<size_t>(r)] = (which == 1) ? lp.lo : lp.hi;
            }
        }
        if (solve_dense(rows, rhs, n, a) && lp.feasible(a, tol)) {
            double val = 0;
            for (int i = 0; i < n; ++i) val += a[static_cast<size_t>(i)] * d[static_cast<size_t>(i)];
            if (!found || (maximize ? val > best_val : val < best_val)) {
                best_val = val;
                best_a = a;
                found = true;
            }
        }
        // next combination
        int k = n - 1;
        while (k >= 0 && comb[static_cast<size_t>(k)] == m - n + k) --k;
        if (k < 0) break;
        ++comb[static_cast<size_t>(k)];
        for (int j = k + 1; j < n; ++j)
            comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
    }
    return found;
}

} // namespace

PucciResult pucci_extremal_trace(const SymMatrix& d, const KernelParams& p, ExtremalSign sign) {
    if (d.dim() != p.n) throw std::domain_error("pucci_extremal_trace: dimension mismatch");
    if (sign == ExtremalSign::plus) {
        // M^+(D) = -M^-(-D); keeps duality exact to the last bit.
        SymMatrix neg = d;
        neg *= -1.0;
        PucciResult r = pucci_extremal_trace(neg, p, ExtremalSign::minus);
        r.value = -r.value;
        return r;
    }
    DiagLP lp = make_lp(p);
    EigenSym e = eigen_sym(d);
    std::vector<double> best_a;
    double best_val = 0;
    if (!enumerate_vertices(lp, e.values, /*maximize=*/false, best_a, best_val))
        throw std::domain_error("pucci_extremal_trace: empty constraint set");
    SymMatrix argopt(p.n);
    for (int i = 0; i < p.n; ++i)
        for (int j = i; j < p.n; ++j) {
            double s = 0;
            for (int k = 0; k < p.n; ++k)
                s += best_a[static_cast<size_t>(k)] * e.vec(i, k) * e.vec(j, k);
            argopt.set(i, j, s);
        }
    return PucciResult{best_val, argopt};
}

std::vector<double> haar_orthogonal(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> q(static_cast<size_t>(n * n));
    for (double& v : q) v = gauss(rng);
    // Gram-Schmidt on columns.
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < j; ++k) {
            double dp = 0;
            for (int i = 0; i < n; ++i)
                dp += q[static_cast<size_t>(i * n + j)] * q[static_cast<size_t>(i * n + k)];
            for (int i = 0; i < n; ++i)
                q[static_cast<size_t>(i * n + j)] -= dp * q[static_cast<size_t>(i * n + k)];
        }
        double nrm = 0;
        for (int i = 0; i < n; ++i) {
            double v = q[static_cast<size_t>(i * n + j)];
            nrm += v * v;
        }
        nrm = std::sqrt(nrm);
        for (int i = 0; i < n; ++i) q[static_cast<size_t>(i * n + j)] /= nrm;
    }
    return q;
}

SymMatrix conjugated(const SymMatrix& a, const std::vector<double>& q) {
    const int n = a.dim();
    // B = Q^T A Q with Q row-major.
    std::vector<double> aq(static_cast<size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int k = 0; k < n; ++k) s += a(i, k) * q[static_cast<size_t>(k * n + j)];
            aq[static_cast<size_t>(i * n + j)] = s;
        }
    SymMatrix b(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0;
            for (int k = 0; k < n; ++k)
                s += q[static_cast<size_t>(k * n + i)] * aq[static_cast<size_t>(k * n + j)];
            b.set(i, j, s);
        }
    return b;
}

double pucci_oracle_sample(const SymMatrix& d, const KernelParams& p, ExtremalSign sign,
                           int trials, uint64_t seed) {
    if (trials < 1) throw std::domain_error("pucci_oracle_sample: trials must be >= 1");
    DiagLP lp = make_lp(p);
    const int n = p.n;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // Strictly interior point of the diagonal polytope.
    std::vector<double> center(static_cast<size_t>(n), 0.5 * (p.lambda + p.Lambda));
    const double amax = lp.hi / (1.0 + lp.sigma); // implied upper bound on a_i

    std::vector<double> a(static_cast<size_t>(n));
    double best = 0;
    bool have = false;
    const bool maximize = (sign == ExtremalSign::plus);

    for (int t = 0; t < trials; ++t) {
        bool extreme = (t % 2 == 1);
        bool ok = false;
        if (!extreme) {
            for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
                for (int i = 0; i < n; ++i)
                    a[static_cast<size_t>(i)] = lp.eta + (amax - lp.eta) * unif(rng);
                ok = lp.feasible(a, 0.0);
            }
        }
        if (!ok) {
            // Corner proposal pulled back into the polytope along the segment
            // to the interior point; feasibility follows from convexity.
            for (int i = 0; i < n; ++i)
                a[static_cast<size_t>(i)] = (unif(rng) < 0.5) ? lp.eta : amax;
            double tmax = 1.0;
            double s_c = 0, s_a = 0;
            for (int i = 0; i < n; ++i) {
                s_c += center[static_cast<size_t>(i)];
                s_a += a[static_cast<size_t>(i)];
            }
            for (int i = 0; i < n; ++i) {
                double gc = lp.sigma * center[static_cast<size_t>(i)] + s_c;
                double ga = lp.sigma * a[static_cast<size_t>(i)] + s_a;
                double dg = ga - gc;
                if (dg > 0 && gc + dg > lp.hi) tmax = std::min(tmax, (lp.hi - gc) / dg);
                if (dg < 0 && gc + dg < lp.lo) tmax = std::min(tmax, (lp.lo - gc) / dg);
            }
            double tt = tmax * std::pow(unif(rng), 0.25);
            for (int i = 0; i < n; ++i)
                a[static_cast<size_t>(i)] = center[static_cast<size_t>(i)] +
                                            tt * (a[static_cast<size_t>(i)] - center[static_cast<size_t>(i)]);
        }
        std::vector<double> q = haar_orthogonal(n, rng);
        // Tr(Q diag(a) Q^T D) = sum_i a_i * (q_i . D q_i)
        double val = 0;
        for (int i = 0; i < n; ++i) {
            double qd = 0;
            for (int r = 0; r < n; ++r) {
                double dr = 0;
                for (int c = 0; c < n; ++c) dr += d(r, c) * q[static_cast<size_t>(c * n + i)];
                qd += q[static_cast<size_t>(r * n + i)] * dr;
            }
            val += a[static_cast<size_t>(i)] * qd;
        }
        if (!have || (maximize ? val > best : val < best)) {
            best = val;
            have = true;
        }
    }
    return best;
}

} // namespace nlop
