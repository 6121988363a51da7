#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperlab/geometry.hpp"
#include "hyperlab/rational.hpp"

namespace hyperlab {

// sin(2*pi*x) with exact zeros at the half-integers and full relative
// accuracy near every zero (signed range reduction plus the sin(pi - t)
// symmetry). Box corners and catalog fixed points are dyadic, so corner
// images and displacements stay exact where exactness matters.
inline double sin2pi(double x) {
    double r = x - std::round(x);  // [-0.5, 0.5], exact for tiny and near-integer x
    double a = std::abs(r);
    if (a == 0.0 || a == 0.5) return 0.0;
    if (r == 0.25) return 1.0;
    if (r == -0.25) return -1.0;
    if (a <= 0.25) return std::sin(2.0 * M_PI * r);
    double s = r > 0 ? 1.0 : -1.0;
    return s * std::sin(2.0 * M_PI * (0.5 - a));
}

inline double cos2pi(double x) {
    double r = x - std::round(x);
    double a = std::abs(r);
    if (a == 0.0) return 1.0;
    if (a == 0.5) return -1.0;
    if (a == 0.25) return 0.0;
    if (a < 0.25) return std::cos(2.0 * M_PI * r);
    return -std::cos(2.0 * M_PI * (0.5 - a));
}

// x -> x + amp * sin(2*pi*freq*x) on the circle.
struct CircleFactor {
    double amp = 0.1;
    int freq = 1;

    double eval(double x) const { return wrap01(x + amp * sin2pi(double(freq) * x)); }
    double displacement(double x) const { return amp * sin2pi(double(freq) * x); }
    double deriv(double x) const { return 1.0 + amp * 2.0 * M_PI * freq * cos2pi(double(freq) * x); }
    double lipschitz() const { return 1.0 + amp * 2.0 * M_PI * freq; }

    // Monotone (deriv > 0 for amp * 2*pi*freq < 1), so Newton from y = x converges.
    double inverse(double x) const {
        double y = x;
        for (int it = 0; it < 80; ++it) {
            double err = wrap_diff(eval(y), x);
            if (std::abs(err) < 1e-15) break;
            y = wrap01(y - err / deriv(y));
        }
        return y;
    }
};

using Deriv = std::variant<double, Mat2>;

struct CatalogSystem {
    std::string id;
    PhaseSpace space;
    double lipschitz = 1.0;
    std::map<std::string, double> params;

    std::function<std::optional<Point>(const Point&)> map;
    std::function<std::optional<Point>(const Point&)> inverse;
    std::function<std::optional<Deriv>(const Point&)> derivative;

    // Set for the smooth product systems; used for exact per-axis work.
    std::optional<CircleFactor> factor_x, factor_y;
};

namespace horseshoe_model {

constexpr double kLowStrip = 0.2;   // H0: y in [0, 1/5]
constexpr double kHighStrip = 0.8;  // H1: y in [4/5, 1]

inline std::optional<Point> eval(const Point& p) {
    Vec2 v = as_2d(p);
    if (v.x < 0.0 || v.x > 1.0 || v.y < 0.0 || v.y > 1.0) return std::nullopt;
    if (v.y <= kLowStrip) return Point(Vec2{v.x / 5.0, 5.0 * v.y});
    if (v.y >= kHighStrip) return Point(Vec2{v.x / 5.0 + 0.8, 5.0 * v.y - 4.0});
    return std::nullopt;
}

inline std::optional<Point> inverse(const Point& p) {
    Vec2 v = as_2d(p);
    if (v.y < 0.0 || v.y > 1.0) return std::nullopt;
    if (v.x >= 0.0 && v.x <= kLowStrip) return Point(Vec2{5.0 * v.x, v.y / 5.0});
    if (v.x >= kHighStrip && v.x <= 1.0) return Point(Vec2{5.0 * v.x - 4.0, v.y / 5.0 + 0.8});
    return std::nullopt;
}

// Strip digit of a point on (or near) the invariant set.
inline int strip_of(const Vec2& v) { return v.y >= 0.5 ? 1 : 0; }

// Exact coordinates of the point with itinerary s (symbols 0/1):
//   y0 = (4/5) * sum_{k>=0} s_k 5^{-k},  x0 = (4/5) * sum_{k>=1} s_{-k} 5^{1-k}.
// Eventually periodic tails make both geometric series rational.
inline Rat y_series(const SymbolicPoint& s) {
    long long T = std::max(s.core_end(), 0LL);
    if (T > 48) throw std::invalid_argument("horseshoe itinerary too deep for exact arithmetic");
    Rat head(0);
    for (long long k = 0; k < T; ++k)
        if (s.at(k)) head += Rat(1, pow5(int(k)).num());
    int p = int(s.right.size());
    Rat block(0);
    for (int j = 0; j < p; ++j)
        if (s.at(T + j)) block += Rat(1, pow5(j).num());
    Rat tail = block * Rat(pow5(p).num(), pow5(p).num() - 1) / pow5(int(T));
    return Rat(4, 5) * (head + tail);
}

inline Rat x_series(const SymbolicPoint& s) {
    long long H = std::max(1LL, 1 - s.core_start);
    if (H > 48) throw std::invalid_argument("horseshoe itinerary too deep for exact arithmetic");
    Rat head(0);
    for (long long k = 1; k < H; ++k)
        if (s.at(-k)) head += Rat(pow5(1).num(), pow5(int(k)).num());  // 5^{1-k}
    int q = int(s.left.size());
    Rat block(0);
    for (int j = 0; j < q; ++j)
        if (s.at(-(H + j))) block += Rat(1, pow5(j).num());
    Rat tail = block * Rat(pow5(q).num(), pow5(q).num() - 1) * Rat(pow5(1).num(), pow5(int(H)).num());
    return Rat(4, 5) * (head + tail);
}

inline std::pair<Rat, Rat> point_of_itinerary(const SymbolicPoint& s) {
    for (int v : s.left) if (v != 0 && v != 1) throw std::invalid_argument("itinerary symbols must be 0/1");
    for (int v : s.core) if (v != 0 && v != 1) throw std::invalid_argument("itinerary symbols must be 0/1");
    for (int v : s.right) if (v != 0 && v != 1) throw std::invalid_argument("itinerary symbols must be 0/1");
    return {x_series(s), y_series(s)};
}

// Exact image of a point on the invariant set.
inline std::pair<Rat, Rat> eval_exact(const Rat& x, const Rat& y) {
    const Rat fifth(1, 5);
    if (y <= fifth) return {x * fifth, Rat(5) * y};
    if (y >= Rat(4, 5)) return {x * fifth + Rat(4, 5), Rat(5) * y - Rat(4)};
    throw std::domain_error("horseshoe eval_exact: point outside the strips");
}

} // namespace horseshoe_model

namespace detail {

inline void check_params(const std::map<std::string, double>& given,
                         const std::map<std::string, double>& allowed) {
    for (const auto& [k, v] : given) {
        (void)v;
        if (!allowed.count(k)) throw std::invalid_argument("unknown parameter: " + k);
    }
}

inline double param_or(const std::map<std::string, double>& p, const std::string& k, double dflt) {
    auto it = p.find(k);
    return it == p.end() ? dflt : it->second;
}

inline CatalogSystem make_product(const std::string& id, CircleFactor f) {
    CatalogSystem s;
    s.id = id;
    s.space = {SpaceKind::torus2};
    s.factor_x = f;
    s.factor_y = f;
    s.lipschitz = f.lipschitz();
    s.map = [f](const Point& p) -> std::optional<Point> {
        Vec2 v = as_2d(p);
        return Point(Vec2{f.eval(v.x), f.eval(v.y)});
    };
    s.inverse = [f](const Point& p) -> std::optional<Point> {
        Vec2 v = as_2d(p);
        return Point(Vec2{f.inverse(v.x), f.inverse(v.y)});
    };
    s.derivative = [f](const Point& p) -> std::optional<Deriv> {
        Vec2 v = as_2d(p);
        return Deriv(Mat2::diag(f.deriv(v.x), f.deriv(v.y)));
    };
    return s;
}

} // namespace detail

inline const IMat2 kCatMatrix{2, 1, 1, 1};

// Catalog:
//   cat         (x,y) -> (2x+y, x+y) mod 1 on the 2-torus
//   north_south x -> x + a sin(2 pi x) mod 1 on the circle (a = 0.1)
//   grad2       north_south x north_south on the 2-torus
//   grad4       (x -> x + b sin(4 pi x)) squared on the 2-torus (b = 0.05)
//   horseshoe   partial affine map on [0,1]^2 with strips of height 1/5
//   full_shift  left shift on binary bi-infinite sequences
inline CatalogSystem build_system(const std::string& id,
                                  const std::map<std::string, double>& params = {}) {
    CatalogSystem s;
    s.id = id;
    s.params = params;

    if (id == "cat") {
        detail::check_params(params, {});
        s.space = {SpaceKind::torus2};
        // operator norm of the (symmetric) matrix: (3 + sqrt 5)/2
        s.lipschitz = (3.0 + std::sqrt(5.0)) / 2.0;
        s.map = [](const Point& p) -> std::optional<Point> {
            Vec2 v = as_2d(p);
            return Point(Vec2{wrap01(2.0 * v.x + v.y), wrap01(v.x + v.y)});
        };
        s.inverse = [](const Point& p) -> std::optional<Point> {
            Vec2 v = as_2d(p);
            return Point(Vec2{wrap01(v.x - v.y), wrap01(-v.x + 2.0 * v.y)});
        };
        s.derivative = [](const Point&) -> std::optional<Deriv> {
            return Deriv(Mat2{2, 1, 1, 1});
        };
        return s;
    }

    if (id == "north_south") {
        detail::check_params(params, {{"amplitude", 0.0}});
        double a = detail::param_or(params, "amplitude", 0.1);
        if (a <= 0.0 || a >= 1.0 / (2.0 * M_PI))
            throw std::invalid_argument("north_south amplitude out of range (0, 1/2pi)");
        CircleFactor f{a, 1};
        s.space = {SpaceKind::circle};
        s.factor_x = f;
        s.lipschitz = f.lipschitz();
        s.map = [f](const Point& p) -> std::optional<Point> { return Point(f.eval(as_1d(p))); };
        s.inverse = [f](const Point& p) -> std::optional<Point> { return Point(f.inverse(as_1d(p))); };
        s.derivative = [f](const Point& p) -> std::optional<Deriv> { return Deriv(f.deriv(as_1d(p))); };
        return s;
    }

    if (id == "grad2") {
        detail::check_params(params, {{"amplitude", 0.0}});
        double a = detail::param_or(params, "amplitude", 0.1);
        if (a <= 0.0 || a >= 1.0 / (2.0 * M_PI))
            throw std::invalid_argument("grad2 amplitude out of range (0, 1/2pi)");
        auto sys = detail::make_product(id, CircleFactor{a, 1});
        sys.params = params;
        return sys;
    }

    if (id == "grad4") {
        detail::check_params(params, {{"amplitude", 0.0}});
        double b = detail::param_or(params, "amplitude", 0.05);
        if (b <= 0.0 || b >= 1.0 / (4.0 * M_PI))
            throw std::invalid_argument("grad4 amplitude out of range (0, 1/4pi)");
        auto sys = detail::make_product(id, CircleFactor{b, 2});
        sys.params = params;
        return sys;
    }

    if (id == "horseshoe") {
        detail::check_params(params, {});
        s.space = {SpaceKind::square};
        s.lipschitz = 5.0;
        s.map = horseshoe_model::eval;
        s.inverse = horseshoe_model::inverse;
        s.derivative = [](const Point& p) -> std::optional<Deriv> {
            Vec2 v = as_2d(p);
            if (v.y <= horseshoe_model::kLowStrip || v.y >= horseshoe_model::kHighStrip)
                return Deriv(Mat2::diag(0.2, 5.0));
            return std::nullopt;
        };
        return s;
    }

    if (id == "full_shift") {
        detail::check_params(params, {});
        s.space = {SpaceKind::shiftspace};
        s.lipschitz = 2.0;
        s.map = [](const Point& p) -> std::optional<Point> { return Point(as_sym(p).shifted(1)); };
        s.inverse = [](const Point& p) -> std::optional<Point> { return Point(as_sym(p).shifted(-1)); };
        s.derivative = [](const Point&) -> std::optional<Deriv> { return std::nullopt; };
        return s;
    }

    throw std::invalid_argument("unknown system id: " + id);
}

struct OrbitResult {
    std::vector<Point> points;
    std::optional<int> escape_index;  // index whose image left the domain

    bool ok() const { return !escape_index.has_value(); }
};

// (x, f(x), ..., f^n(x)); inverse iterates when n < 0.
inline OrbitResult iterate_orbit(const CatalogSystem& sys, const Point& x, int n) {
    OrbitResult r;
    r.points.push_back(x);
    const auto& step = (n >= 0) ? sys.map : sys.inverse;
    int count = std::abs(n);
    for (int i = 0; i < count; ++i) {
        auto next = step(r.points.back());
        if (!next) {
            r.escape_index = i;
            return r;
        }
        r.points.push_back(*next);
    }
    return r;
}

inline Point apply_n(const CatalogSystem& sys, const Point& x, int n) {
    OrbitResult r = iterate_orbit(sys, x, n);
    if (!r.ok()) throw std::domain_error("orbit left the domain at index " + std::to_string(*r.escape_index));
    return r.points.back();
}

struct EigenData {
    std::vector<double> eigenvalues;  // sorted by |lambda| ascending
    Point source_point;
    int source_period = 1;

    bool hyperbolic() const {
        for (double l : eigenvalues)
            if (std::abs(std::abs(l) - 1.0) < 1e-9) return false;
        return true;
    }
};

struct PeriodicPoint {
    Point point;
    int period = 1;  // minimal
    EigenData eigen;
};

// Derivative of f^k along the orbit of p (2-d systems), or the scalar chain
// product for circle maps.
inline Deriv derivative_of_power(const CatalogSystem& sys, const Point& p, int k) {
    Point x = p;
    if (sys.space.dims() == 1) {
        double prod = 1.0;
        for (int i = 0; i < k; ++i) {
            auto d = sys.derivative(x);
            if (!d) throw std::domain_error("derivative undefined along orbit");
            prod *= std::get<double>(*d);
            x = apply_n(sys, x, 1);
        }
        return prod;
    }
    Mat2 prod = Mat2::identity();
    for (int i = 0; i < k; ++i) {
        auto d = sys.derivative(x);
        if (!d) throw std::domain_error("derivative undefined along orbit");
        prod = std::get<Mat2>(*d) * prod;
        x = apply_n(sys, x, 1);
    }
    return prod;
}

inline EigenData eigen_at(const CatalogSystem& sys, const Point& p, int period) {
    EigenData e;
    e.source_point = p;
    e.source_period = period;
    if (sys.space.kind == SpaceKind::shiftspace) return e;
    Deriv d = derivative_of_power(sys, p, period);
    if (auto* v = std::get_if<double>(&d)) {
        e.eigenvalues = {*v};
    } else {
        auto ev = real_eigenvalues(std::get<Mat2>(d));
        e.eigenvalues = {ev[0], ev[1]};
    }
    return e;
}

namespace detail {

inline double wrapped_displacement_norm(const CatalogSystem& sys, const Point& x, int k) {
    Point y = apply_n(sys, x, k);
    return sys.space.distance(x, y);
}

// Grid-seeded damped Newton for f^k(x) = x on circle / torus products.
inline std::vector<Point> newton_periodic(const CatalogSystem& sys, int k) {
    const int grid = 64;
    const int max_iter = 30;
    std::vector<Point> found;

    auto try_seed = [&](Point x) {
        for (int it = 0; it < max_iter; ++it) {
            // displacement F(x) = f^k(x) - x, wrapped per axis
            if (sys.space.dims() == 1) {
                double xv = as_1d(x);
                double F = wrap_diff(as_1d(apply_n(sys, x, k)), xv);
                if (std::abs(F) < 1e-13) break;
                double J = std::get<double>(derivative_of_power(sys, x, k)) - 1.0;
                if (std::abs(J) < 1e-12) return;
                double step = -F / J;
                double damp = 1.0;
                for (int h = 0; h < 8; ++h) {
                    Point cand = Point(wrap01(xv + damp * step));
                    double Fc = wrap_diff(as_1d(apply_n(sys, cand, k)), as_1d(cand));
                    if (std::abs(Fc) <= std::abs(F)) {
                        x = cand;
                        break;
                    }
                    damp *= 0.5;
                    if (h == 7) x = cand;
                }
            } else {
                Vec2 xv = as_2d(x);
                Vec2 fx = as_2d(apply_n(sys, x, k));
                Vec2 F{wrap_diff(fx.x, xv.x), wrap_diff(fx.y, xv.y)};
                if (std::max(std::abs(F.x), std::abs(F.y)) < 1e-13) break;
                Mat2 J = std::get<Mat2>(derivative_of_power(sys, x, k)) - Mat2::identity();
                if (std::abs(J.det()) < 1e-12) return;
                Vec2 step = solve2(J, {-F.x, -F.y});
                double damp = 1.0;
                for (int h = 0; h < 8; ++h) {
                    Vec2 cv{wrap01(xv.x + damp * step.x), wrap01(xv.y + damp * step.y)};
                    Point cand = Point(cv);
                    Vec2 fc = as_2d(apply_n(sys, cand, k));
                    Vec2 Fc{wrap_diff(fc.x, cv.x), wrap_diff(fc.y, cv.y)};
                    if (std::hypot(Fc.x, Fc.y) <= std::hypot(F.x, F.y)) {
                        x = cand;
                        break;
                    }
                    damp *= 0.5;
                    if (h == 7) x = cand;
                }
            }
        }
        if (wrapped_displacement_norm(sys, x, k) < 1e-10) {
            for (const Point& q : found)
                if (sys.space.distance(q, x) < 1e-8) return;
            found.push_back(x);
        }
    };

    if (sys.space.dims() == 1) {
        for (int i = 0; i < grid; ++i) try_seed(Point(double(i) / grid));
    } else {
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) try_seed(Point(Vec2{double(i) / grid, double(j) / grid}));
    }
    return found;
}

// Fixed points of A^k on the torus: solutions of (A^k - I) x = v over
// integer vectors v, exactly |det(A^k - I)| of them.
inline std::vector<Point> cat_periodic(int k) {
    IMat2 M = ipow(kCatMatrix, k) - IMat2::identity();
    long long D = M.det();
    if (D == 0) throw std::domain_error("cat: A^k - I singular");
    std::vector<Point> pts;
    // x = M^{-1} v = adj(M) v / det; v ranges over M * [0,1)^2 corners
    long long lo1 = std::min({0LL, M.a, M.b, M.a + M.b}) - 1, hi1 = std::max({0LL, M.a, M.b, M.a + M.b}) + 1;
    long long lo2 = std::min({0LL, M.c, M.d, M.c + M.d}) - 1, hi2 = std::max({0LL, M.c, M.d, M.c + M.d}) + 1;
    for (long long v1 = lo1; v1 <= hi1; ++v1) {
        for (long long v2 = lo2; v2 <= hi2; ++v2) {
            long long nx = M.d * v1 - M.b * v2;  // adj(M) * v
            long long ny = -M.c * v1 + M.a * v2;
            long long DD = std::llabs(D);
            long long sx = (D < 0) ? -nx : nx;
            long long sy = (D < 0) ? -ny : ny;
            long long rx = ((sx % DD) + DD) % DD;
            long long ry = ((sy % DD) + DD) % DD;
            double x = double(rx) / double(DD);
            double y = double(ry) / double(DD);
            Point p(Vec2{x, y});
            bool dup = false;
            for (const Point& q : pts)
                if (circle_dist(as_2d(q).x, x) < 1e-12 && circle_dist(as_2d(q).y, y) < 1e-12) {
                    dup = true;
                    break;
                }
            if (!dup) pts.push_back(p);
        }
    }
    return pts;
}

inline std::vector<Word> binary_words(int len) {
    std::vector<Word> out;
    for (int m = 0; m < (1 << len); ++m) {
        Word w(len);
        for (int i = 0; i < len; ++i) w[i] = (m >> (len - 1 - i)) & 1;
        out.push_back(w);
    }
    return out;
}

} // namespace detail

// All periodic points of minimal period <= n, deduplicated, each carrying
// eigen data of the period-power derivative. Deterministic order.
inline std::vector<PeriodicPoint> find_periodic_points(const CatalogSystem& sys, int n) {
    if (n < 1) throw std::invalid_argument("period bound must be >= 1");
    if (sys.space.dims() == 2 && n > 12 && sys.id != "horseshoe")
        throw std::invalid_argument("period bound too large for 2-d search (max 12)");

    std::vector<PeriodicPoint> out;
    auto is_new_point = [&](const Point& p) {
        for (const auto& q : out)
            if (sys.space.distance(q.point, p) < 1e-8) return false;
        return true;
    };

    for (int k = 1; k <= n; ++k) {
        std::vector<Point> cand;
        if (sys.id == "cat") {
            cand = detail::cat_periodic(k);
        } else if (sys.id == "horseshoe" || sys.id == "full_shift") {
            for (const Word& w : detail::binary_words(k)) {
                if (primitive_root(w).size() != w.size()) continue;  // minimal period only
                SymbolicPoint s = SymbolicPoint::periodic(w);
                if (sys.id == "full_shift") {
                    cand.push_back(Point(s));
                } else {
                    auto [rx, ry] = horseshoe_model::point_of_itinerary(s);
                    cand.push_back(Point(Vec2{rx.value(), ry.value()}));
                }
            }
        } else {
            cand = detail::newton_periodic(sys, k);
        }

        std::vector<PeriodicPoint> fresh;
        for (const Point& p : cand) {
            if (!is_new_point(p)) continue;  // lower minimal period (or duplicate)
            bool minimal = true;
            if (sys.id != "horseshoe" && sys.id != "full_shift") {
                for (int m = 1; m < k; ++m) {
                    if (k % m != 0) continue;
                    if (detail::wrapped_displacement_norm(sys, p, m) < 1e-6) {
                        minimal = false;
                        break;
                    }
                }
            }
            if (!minimal) continue;
            PeriodicPoint pp;
            pp.point = p;
            pp.period = k;
            if (sys.id == "horseshoe") {
                pp.eigen.eigenvalues = {std::pow(0.2, k), std::pow(5.0, k)};
                pp.eigen.source_point = p;
                pp.eigen.source_period = k;
            } else {
                pp.eigen = eigen_at(sys, p, k);
            }
            fresh.push_back(pp);
            out.push_back(fresh.back());
        }
    }

    std::sort(out.begin(), out.end(), [](const PeriodicPoint& a, const PeriodicPoint& b) {
        if (a.period != b.period) return a.period < b.period;
        return point_less(a.point, b.point);
    });
    return out;
}

} // namespace hyperlab
