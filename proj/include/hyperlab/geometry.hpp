#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include "hyperlab/linalg.hpp"
#include "hyperlab/symbolic_point.hpp"

namespace hyperlab {

enum class SpaceKind { circle, torus2, square, shiftspace };

// One-dimensional systems live on `double`, planar ones on Vec2, and shift
// systems on SymbolicPoint.
using Point = std::variant<double, Vec2, SymbolicPoint>;

inline double wrap01(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;
    return r;
}

// Signed representative of a - b on the circle, in [-1/2, 1/2). Computed on
// the raw difference so that nearby dyadic inputs stay exact (the +-1
// adjustments are exact by Sterbenz).
inline double wrap_diff(double a, double b) {
    double d = a - b;
    if (d < -0.5 || d >= 0.5) {
        d -= std::floor(d);
        if (d >= 0.5) d -= 1.0;
    }
    return d;
}

inline double circle_dist(double a, double b) { return std::abs(wrap_diff(a, b)); }

inline double as_1d(const Point& p) {
    if (auto* v = std::get_if<double>(&p)) return *v;
    throw std::invalid_argument("expected a 1-d point");
}

inline Vec2 as_2d(const Point& p) {
    if (auto* v = std::get_if<Vec2>(&p)) return *v;
    throw std::invalid_argument("expected a 2-d point");
}

inline const SymbolicPoint& as_sym(const Point& p) {
    if (auto* v = std::get_if<SymbolicPoint>(&p)) return *v;
    throw std::invalid_argument("expected a shift-space point");
}

struct PhaseSpace {
    SpaceKind kind = SpaceKind::circle;

    int dims() const { return (kind == SpaceKind::circle) ? 1 : 2; }
    bool wraps() const { return kind == SpaceKind::circle || kind == SpaceKind::torus2; }

    double diameter() const {
        switch (kind) {
            case SpaceKind::circle: return 0.5;
            case SpaceKind::torus2: return std::sqrt(2.0) / 2.0;
            case SpaceKind::square: return std::sqrt(2.0);
            case SpaceKind::shiftspace: return 1.0;
        }
        return 0.0;
    }

    double distance(const Point& p, const Point& q) const {
        switch (kind) {
            case SpaceKind::circle:
                return circle_dist(as_1d(p), as_1d(q));
            case SpaceKind::torus2: {
                Vec2 a = as_2d(p), b = as_2d(q);
                return std::hypot(wrap_diff(a.x, b.x), wrap_diff(a.y, b.y));
            }
            case SpaceKind::square: {
                Vec2 a = as_2d(p), b = as_2d(q);
                return std::hypot(a.x - b.x, a.y - b.y);
            }
            case SpaceKind::shiftspace:
                return shift_distance(as_sym(p), as_sym(q));
        }
        return 0.0;
    }
};

inline std::string point_str(const Point& p) {
    std::ostringstream os;
    os.precision(17);
    if (auto* v = std::get_if<double>(&p)) {
        os << *v;
    } else if (auto* v = std::get_if<Vec2>(&p)) {
        os << "(" << v->x << ", " << v->y << ")";
    } else {
        os << as_sym(p).str();
    }
    return os.str();
}

// Canonical ordering used wherever output must be deterministic.
inline bool point_less(const Point& p, const Point& q) {
    if (p.index() != q.index()) return p.index() < q.index();
    if (auto* v = std::get_if<double>(&p)) return *v < as_1d(q);
    if (auto* v = std::get_if<Vec2>(&p)) {
        Vec2 b = as_2d(q);
        if (v->x != b.x) return v->x < b.x;
        return v->y < b.y;
    }
    return as_sym(p).str() < as_sym(q).str();
}

} // namespace hyperlab
