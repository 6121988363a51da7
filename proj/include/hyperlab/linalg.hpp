#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace hyperlab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

// Row-major 2x2 real matrix.
struct Mat2 {
    double a = 1.0, b = 0.0;
    double c = 0.0, d = 1.0;

    static Mat2 identity() { return {1, 0, 0, 1}; }
    static Mat2 diag(double u, double v) { return {u, 0, 0, v}; }

    Vec2 apply(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }

    double trace() const { return a + d; }
    double det() const { return a * d - b * c; }

    Mat2 inverse() const {
        double dt = det();
        if (std::abs(dt) < 1e-300) throw std::domain_error("Mat2: singular");
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
};

// Real eigenvalues of a 2x2 matrix, sorted by |lambda| ascending.
// Throws if the discriminant is negative beyond rounding noise (the
// catalog systems all have real spectra).
inline std::array<double, 2> real_eigenvalues(const Mat2& m) {
    double tr = m.trace(), dt = m.det();
    double disc = tr * tr - 4.0 * dt;
    if (disc < 0.0) {
        if (disc < -1e-9 * (1.0 + tr * tr)) throw std::domain_error("complex eigenvalues");
        disc = 0.0;
    }
    double s = std::sqrt(disc);
    double l1 = (tr - s) / 2.0, l2 = (tr + s) / 2.0;
    if (std::abs(l1) > std::abs(l2)) std::swap(l1, l2);
    return {l1, l2};
}

// Solve m * x = rhs by Cramer's rule.
inline Vec2 solve2(const Mat2& m, const Vec2& rhs) {
    double dt = m.det();
    if (std::abs(dt) < 1e-14) throw std::domain_error("solve2: singular system");
    return {(rhs.x * m.d - rhs.y * m.b) / dt, (m.a * rhs.y - m.c * rhs.x) / dt};
}

// Integer 2x2 matrices, used for exact work with toral automorphisms.
struct IMat2 {
    long long a = 1, b = 0;
    long long c = 0, d = 1;

    static IMat2 identity() { return {1, 0, 0, 1}; }

    IMat2 operator*(const IMat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    IMat2 operator-(const IMat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }

    long long det() const { return a * d - b * c; }
    Mat2 to_mat2() const { return {double(a), double(b), double(c), double(d)}; }
};

inline IMat2 ipow(IMat2 m, int n) {
    IMat2 r = IMat2::identity();
    for (int i = 0; i < n; ++i) r = r * m;
    return r;
}

} // namespace hyperlab
