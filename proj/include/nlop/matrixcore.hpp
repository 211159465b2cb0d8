#pragma once

#include <random>
#include <span>
#include <vector>

#include "nlop/special.hpp"

namespace nlop {

// Dense symmetric n x n matrix, upper triangle stored packed so symmetry is
// structural, not a runtime promise.
class SymMatrix {
  public:
    explicit SymMatrix(int n) : n_(n), a_(static_cast<size_t>(n * (n + 1) / 2), 0.0) {
        if (n < 1) throw std::domain_error("SymMatrix: dimension must be positive");
    }

    static SymMatrix identity(int n) {
        SymMatrix m(n);
        for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
        return m;
    }

    static SymMatrix diag(std::span<const double> d) {
        SymMatrix m(static_cast<int>(d.size()));
        for (int i = 0; i < m.n_; ++i) m.set(i, i, d[static_cast<size_t>(i)]);
        return m;
    }

    static SymMatrix outer(std::span<const double> v) {
        SymMatrix m(static_cast<int>(v.size()));
        for (int i = 0; i < m.n_; ++i)
            for (int j = i; j < m.n_; ++j)
                m.set(i, j, v[static_cast<size_t>(i)] * v[static_cast<size_t>(j)]);
        return m;
    }

    int dim() const { return n_; }

    double operator()(int i, int j) const { return a_[idx(i, j)]; }
    void set(int i, int j, double v) { a_[idx(i, j)] = v; }
    void add(int i, int j, double v) { a_[idx(i, j)] += v; }

    double trace() const {
        double t = 0;
        for (int i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius() const;
    double max_abs() const;

    SymMatrix& operator+=(const SymMatrix& o);
    SymMatrix& operator-=(const SymMatrix& o);
    SymMatrix& operator*=(double s);

  private:
    size_t idx(int i, int j) const {
        if (i > j) std::swap(i, j);
        return static_cast<size_t>(i * n_ - i * (i - 1) / 2 + (j - i));
    }

    int n_;
    std::vector<double> a_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(double s, SymMatrix a);

// Tr(A * B) for symmetric A, B.
double trace_product(const SymMatrix& a, const SymMatrix& b);

// Eigendecomposition of a symmetric matrix: values ascending, vec(i,j) is
// component i of the eigenvector for values[j].
struct EigenSym {
    int n;
    std::vector<double> values;
    std::vector<double> vectors; // column-major: vectors[i + n*j]

    double vec(int i, int j) const { return vectors[static_cast<size_t>(i + n * j)]; }
};

// Cyclic Jacobi; for the small dimensions used here it converges to machine
// precision in a handful of sweeps.
EigenSym eigen_sym(const SymMatrix& a);

// A_sigma = (sigma*A + Tr(A)*Id) / (n + sigma).
SymMatrix a_sigma_map(const SymMatrix& a, const KernelParams& p);

// Membership in S_{lambda,Lambda} with the optional A >= eta*Id constraint:
// A >= eta*Id and lambda*Id <= A_sigma <= Lambda*Id, eigenvalue checks at
// fixed tolerance.
bool in_class(const SymMatrix& a, const KernelParams& p, double tol = 1e-10);

enum class ExtremalSign { minus, plus };

struct PucciResult {
    double value;
    SymMatrix argopt;
};

// Extremal trace inf/sup_{A in S_{lambda,Lambda}, A >= eta*Id} Tr(A*D).
//
// The class is invariant under orthogonal conjugation and convex; in the
// eigenbasis of D, replacing A by its diagonal part is an average of
// sign-flip conjugations E A E, so it stays in the class and leaves Tr(A*D)
// unchanged. The optimum is therefore attained at A diagonal in D's
// eigenbasis and reduces to a linear program in the diagonal a_i:
//     opt sum_i a_i d_i
//     s.t. a_i >= eta,
//          lambda(n+sigma) <= sigma a_i + sum_j a_j <= Lambda(n+sigma).
// Solved exactly by exhaustive vertex enumeration (n <= 6).
PucciResult pucci_extremal_trace(const SymMatrix& d, const KernelParams& p, ExtremalSign sign);

// Independent sampling oracle: best Tr(A*D) over `trials` random feasible A
// (random orthogonal conjugations of random feasible diagonals). For the
// minus sign the result is always >= the exact extremal value.
double pucci_oracle_sample(const SymMatrix& d, const KernelParams& p, ExtremalSign sign,
                           int trials, uint64_t seed);

// Haar-distributed orthogonal matrix, row-major n x n.
std::vector<double> haar_orthogonal(int n, std::mt19937_64& rng);

// Q^T A Q for dense row-major Q.
SymMatrix conjugated(const SymMatrix& a, const std::vector<double>& q);

} // namespace nlop
