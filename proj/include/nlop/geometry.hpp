#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

namespace nlop {

// Point in R^n, n <= 3. Unused coordinates stay zero.
struct Point {
    int dim = 2;
    std::array<double, 3> c{0.0, 0.0, 0.0};

    Point() = default;
    Point(double x, double y) : dim(2), c{x, y, 0.0} {}
    Point(double x, double y, double z) : dim(3), c{x, y, z} {}
    static Point zero(int n) {
        Point p;
        p.dim = n;
        return p;
    }

    double operator[](int i) const { return c[static_cast<size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<size_t>(i)]; }

    double norm2() const { return c[0] * c[0] + c[1] * c[1] + c[2] * c[2]; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Point operator+(const Point& a, const Point& b) {
    assert(a.dim == b.dim);
    Point r = a;
    for (int i = 0; i < a.dim; ++i) r.c[static_cast<size_t>(i)] += b[i];
    return r;
}

inline Point operator-(const Point& a, const Point& b) {
    assert(a.dim == b.dim);
    Point r = a;
    for (int i = 0; i < a.dim; ++i) r.c[static_cast<size_t>(i)] -= b[i];
    return r;
}

inline Point operator*(double s, const Point& a) {
    Point r = a;
    for (int i = 0; i < a.dim; ++i) r.c[static_cast<size_t>(i)] *= s;
    return r;
}

inline double dot(const Point& a, const Point& b) {
    assert(a.dim == b.dim);
    double s = 0;
    for (int i = 0; i < a.dim; ++i) s += a[i] * b[i];
    return s;
}

// Deterministic low-discrepancy sequence in [0,1)^dim (Halton, bases 2/3/5).
class Halton {
  public:
    explicit Halton(int dim, uint64_t skip = 20) : dim_(dim), index_(skip) {}

    std::array<double, 3> next() {
        static constexpr int bases[3] = {2, 3, 5};
        std::array<double, 3> u{0, 0, 0};
        ++index_;
        for (int d = 0; d < dim_; ++d) {
            uint64_t i = index_;
            double f = 1.0, x = 0.0;
            while (i > 0) {
                f /= bases[d];
                x += f * static_cast<double>(i % static_cast<uint64_t>(bases[d]));
                i /= static_cast<uint64_t>(bases[d]);
            }
            u[static_cast<size_t>(d)] = x;
        }
        return u;
    }

    // Next point of the sequence mapped into the ball of given radius (rejection).
    Point next_in_ball(double radius) {
        for (;;) {
            auto u = next();
            Point p = Point::zero(dim_);
            double n2 = 0;
            for (int d = 0; d < dim_; ++d) {
                p[d] = 2.0 * u[static_cast<size_t>(d)] - 1.0;
                n2 += p[d] * p[d];
            }
            if (n2 <= 1.0) return radius * p;
        }
    }

  private:
    int dim_;
    uint64_t index_;
};

// Fixed 4-point Gauss-Legendre nodes/weights on [-1,1].
inline constexpr std::array<double, 4> kGL4Nodes = {
    -0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
inline constexpr std::array<double, 4> kGL4Weights = {
    0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};

// Gauss-Legendre nodes/weights on [-1,1] for small fixed orders (computed by
// Newton iteration on Legendre polynomials; deterministic).
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace nlop
