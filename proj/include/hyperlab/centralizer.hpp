#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperlab/systems.hpp"
#include "hyperlab/util.hpp"

namespace hyperlab {

// A candidate centralizer element: any map on the same phase space.
struct PartnerMap {
    std::string name;
    PhaseSpace space;
    std::function<std::optional<Point>(const Point&)> eval;
};

inline PartnerMap power_partner(const CatalogSystem& sys, int k) {
    PartnerMap g;
    g.name = sys.id + "^" + std::to_string(k);
    g.space = sys.space;
    g.eval = [&sys, k](const Point& p) -> std::optional<Point> {
        OrbitResult r = iterate_orbit(sys, p, k);
        if (!r.ok()) return std::nullopt;
        return r.points.back();
    };
    return g;
}

inline PartnerMap identity_partner(const PhaseSpace& space) {
    return {"identity", space, [](const Point& p) -> std::optional<Point> { return p; }};
}

// (x, y) -> (y, x); commutes with any coordinate-symmetric product map.
inline PartnerMap swap_partner(const PhaseSpace& space) {
    return {"swap", space, [](const Point& p) -> std::optional<Point> {
                Vec2 v = as_2d(p);
                return Point(Vec2{v.y, v.x});
            }};
}

// sup over quasi-uniform samples of d(f(g(x)), g(f(x))). Samples where either
// composition leaves a partial domain are skipped.
inline double commutation_residual(const CatalogSystem& f, const PartnerMap& g, int samples) {
    if (samples < 100) throw std::invalid_argument("commutation_residual: need >= 100 samples");
    if (f.space.kind != g.space.kind) throw std::invalid_argument("commutation_residual: domain mismatch");
    if (f.space.kind == SpaceKind::shiftspace)
        throw std::invalid_argument("commutation_residual: sampling needs a metric grid space");

    double sup = 0.0;
    for (int i = 0; i < samples; ++i) {
        Point x = f.space.dims() == 1 ? Point(kronecker1(i))
                                      : Point(Vec2{kronecker2(i).first, kronecker2(i).second});
        auto gx = g.eval(x);
        if (!gx) continue;
        auto fgx = f.map(*gx);
        auto fx = f.map(x);
        if (!fgx || !fx) continue;
        auto gfx = g.eval(*fx);
        if (!gfx) continue;
        sup = std::max(sup, f.space.distance(*fgx, *gfx));
    }
    return sup;
}

struct CommutationReport {
    double residual = 0.0;
    std::vector<PeriodicPoint> points;   // Per^n_h(f), canonical order
    std::vector<int> permutation;        // index of g(p_i) in `points`, -1 if unmatched
    std::vector<char> similarity_ok;     // trace/det of the period-power derivatives agree
    std::vector<char> manifold_ok;       // g maps local stable data onto g(p)'s orbit
    bool bijective = false;
    bool all_similar() const {
        for (char c : similarity_ok) if (!c) return false;
        return true;
    }
};

// g must permute Per^n_h(f); T_p f^n and T_{g(p)} f^n are similar, checked by
// trace/determinant agreement (the 2-d similarity invariants for distinct
// eigenvalues). Local stable segments at p map into the stable set of g(p).
inline CommutationReport periodic_permutation_check(const CatalogSystem& f, const PartnerMap& g,
                                                    int n) {
    CommutationReport rep;
    rep.residual = commutation_residual(f, g, 256);
    if (rep.residual >= 1e-9)
        throw std::invalid_argument("periodic_permutation_check: maps do not commute on samples");

    auto per = find_periodic_points(f, n);
    per.erase(std::remove_if(per.begin(), per.end(),
                             [](const PeriodicPoint& p) { return !p.eigen.hyperbolic(); }),
              per.end());
    rep.points = per;
    rep.permutation.assign(per.size(), -1);
    rep.similarity_ok.assign(per.size(), 0);
    rep.manifold_ok.assign(per.size(), 0);

    for (size_t i = 0; i < per.size(); ++i) {
        auto gp = g.eval(per[i].point);
        if (!gp) continue;
        for (size_t j = 0; j < per.size(); ++j) {
            if (f.space.distance(*gp, per[j].point) < 1e-6) {
                rep.permutation[i] = int(j);
                break;
            }
        }
        if (rep.permutation[i] == -1) continue;
        const PeriodicPoint& q = per[size_t(rep.permutation[i])];

        if (per[i].period == q.period) {
            Deriv dp = derivative_of_power(f, per[i].point, per[i].period);
            Deriv dq = derivative_of_power(f, q.point, q.period);
            if (auto* sp = std::get_if<double>(&dp)) {
                rep.similarity_ok[i] = std::abs(*sp - std::get<double>(dq)) <= 1e-7;
            } else {
                Mat2 mp = std::get<Mat2>(dp), mq = std::get<Mat2>(dq);
                rep.similarity_ok[i] = std::abs(mp.trace() - mq.trace()) <= 1e-7 &&
                                       std::abs(mp.det() - mq.det()) <= 1e-7;
            }
        }

        // five samples on the local stable segment at p
        rep.manifold_ok[i] = 1;
        Deriv dp = derivative_of_power(f, per[i].point, per[i].period);
        std::optional<Vec2> vstable;
        bool has_stable = false;
        if (auto* sp = std::get_if<double>(&dp)) {
            has_stable = std::abs(*sp) < 1.0;
        } else {
            Mat2 m = std::get<Mat2>(dp);
            auto ev = real_eigenvalues(m);
            if (std::abs(ev[0]) < 1.0) {
                has_stable = true;
                Vec2 v{m.b, ev[0] - m.a};
                if (v.norm() < 1e-12) v = {ev[0] - m.d, m.c};
                if (v.norm() < 1e-12) v = {1.0, 0.0};  // diagonal with ev[0] = a
                if (std::abs(m.b) < 1e-14 && std::abs(m.c) < 1e-14)
                    v = std::abs(m.a) < 1.0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
                vstable = v * (1.0 / v.norm());
            }
        }
        if (has_stable) {
            const double offsets[5] = {1e-4, -1e-4, 5e-5, -5e-5, 1e-5};
            // orbit of g(p)
            std::vector<Point> orbit;
            Point o = q.point;
            for (int t = 0; t < q.period; ++t) {
                orbit.push_back(o);
                o = apply_n(f, o, 1);
            }
            for (double t : offsets) {
                Point sample;
                if (f.space.dims() == 1) {
                    sample = Point(wrap01(as_1d(per[i].point) + t));
                } else {
                    Vec2 base = as_2d(per[i].point);
                    Vec2 dir = vstable.value_or(Vec2{1.0, 0.0});
                    sample = Point(Vec2{wrap01(base.x + t * dir.x), wrap01(base.y + t * dir.y)});
                }
                auto gs = g.eval(sample);
                if (!gs) { rep.manifold_ok[i] = 0; break; }
                Point cur = *gs;
                double best = 1e300;
                for (int it = 0; it < 60 * per[i].period; ++it) {
                    for (const Point& op : orbit) best = std::min(best, f.space.distance(cur, op));
                    auto nx = f.map(cur);
                    if (!nx) break;
                    cur = *nx;
                }
                for (const Point& op : orbit) best = std::min(best, f.space.distance(cur, op));
                if (best > 1e-5) { rep.manifold_ok[i] = 0; break; }
            }
        }
    }

    std::vector<char> hit(per.size(), 0);
    rep.bijective = true;
    for (int j : rep.permutation) {
        if (j == -1 || hit[size_t(j)]) rep.bijective = false;
        else hit[size_t(j)] = 1;
    }
    return rep;
}

struct ResonanceWitness {
    int i = 0;               // lambda_i equals the monomial
    std::vector<int> powers; // (j_1, ..., j_n)
};

struct ResonanceReport {
    bool nonresonant = true;
    bool eigenvalues_distinct = true;
    std::vector<ResonanceWitness> witnesses;
    double min_gap = 1e300;   // smallest log-magnitude miss among sign-consistent tuples
    bool search_complete = false;
    std::string note;
};

// lambda_i != lambda_1^{j_1} ... lambda_n^{j_n} for all tuples with sum >= 2,
// tested in log magnitude with sign consistency. For one-signed log spectra
// the truncation j_k <= j_max is provably complete; for mixed signs (saddles)
// the report says the search is truncated.
inline ResonanceReport nonresonance_check(const std::vector<double>& eig, int j_max = 20,
                                          double tol = 1e-9) {
    size_t n = eig.size();
    if (n < 1 || n > 2) throw std::invalid_argument("nonresonance_check: 1 or 2 eigenvalues");
    for (double l : eig) {
        if (l == 0.0) throw std::invalid_argument("nonresonance_check: zero eigenvalue");
        if (std::abs(std::abs(l) - 1.0) < 1e-12)
            throw std::invalid_argument("nonresonance_check: eigenvalue on the unit circle");
    }

    ResonanceReport rep;
    std::vector<double> lg(n);
    for (size_t k = 0; k < n; ++k) lg[k] = std::log(std::abs(eig[k]));

    if (n == 2 && std::abs(eig[0] - eig[1]) <= tol * std::max(1.0, std::abs(eig[0]))) {
        rep.eigenvalues_distinct = false;
        rep.nonresonant = false;
    }

    bool same_sign = true;
    for (size_t k = 0; k + 1 < n; ++k) same_sign = same_sign && (lg[k] > 0) == (lg[k + 1] > 0);
    if (same_sign) {
        double mx = 0, mn = 1e300;
        for (double v : lg) {
            mx = std::max(mx, std::abs(v));
            mn = std::min(mn, std::abs(v));
        }
        int bound = int(std::ceil(mx / mn));
        rep.search_complete = bound <= j_max;
        rep.note = "one-signed spectrum, derived bound " + std::to_string(bound);
    } else {
        rep.search_complete = false;
        rep.note = "mixed-sign spectrum, search truncated at j_max";
    }

    std::vector<int> j(n, 0);
    auto visit = [&](const std::vector<int>& powers) {
        int total = 0;
        for (int v : powers) total += v;
        if (total < 2) return;
        double mag = 0.0;
        int sign = 1;
        for (size_t k = 0; k < n; ++k) {
            mag += powers[k] * lg[k];
            if (eig[k] < 0 && powers[k] % 2 == 1) sign = -sign;
        }
        for (size_t i = 0; i < n; ++i) {
            if ((eig[i] < 0) != (sign < 0)) continue;
            double gap = std::abs(mag - lg[i]) / std::max(1.0, std::abs(lg[i]));
            if (gap <= tol) {
                rep.nonresonant = false;
                rep.witnesses.push_back({int(i), powers});
            } else {
                rep.min_gap = std::min(rep.min_gap, gap);
            }
        }
    };
    if (n == 1) {
        for (j[0] = 0; j[0] <= j_max; ++j[0]) visit(j);
    } else {
        for (j[0] = 0; j[0] <= j_max; ++j[0])
            for (j[1] = 0; j[1] <= j_max; ++j[1]) visit(j);
    }
    return rep;
}

struct Contraction1D {
    std::function<double(double)> eval;
    double a = 0.5;  // g'(0)
};

struct KoenigsResult {
    double phi = 0.0;
    int iterations = 0;
};

// Koenigs linearization phi(x) = lim a^{-n} g^n(x); iterate until successive
// values settle below tol (cap 200).
inline KoenigsResult koenigs_linearize(const Contraction1D& g, double x, double tol) {
    if (!(std::abs(g.a) > 0.0) || std::abs(g.a) >= 1.0)
        throw std::invalid_argument("koenigs_linearize: need 0 < |a| < 1");
    double cur = x, scale = 1.0, prev_val = x;
    for (int it = 1; it <= 200; ++it) {
        cur = g.eval(cur);
        scale /= g.a;
        double val = cur * scale;
        if (std::abs(val - prev_val) < tol) return {val, it};
        prev_val = val;
    }
    throw std::runtime_error("koenigs_linearize: no convergence within 200 iterations");
}

inline double koenigs_conjugacy_residual(const Contraction1D& g, double x, double tol) {
    double lhs = koenigs_linearize(g, g.eval(x), tol).phi;
    double rhs = g.a * koenigs_linearize(g, x, tol).phi;
    return std::abs(lhs - rhs);
}

// 1-d Newton inversion of phi.
inline double koenigs_inverse(const Contraction1D& g, double y, double tol) {
    double x = y;
    for (int it = 0; it < 100; ++it) {
        double fx = koenigs_linearize(g, x, tol).phi - y;
        if (std::abs(fx) < 10 * tol) break;
        double h = 1e-6 * std::max(1.0, std::abs(x));
        double d = (koenigs_linearize(g, x + h, tol).phi - koenigs_linearize(g, x - h, tol).phi) / (2 * h);
        if (std::abs(d) < 1e-14) break;
        x -= fx / d;
    }
    return x;
}

struct LinearityResult {
    enum class Status { linear, nonlinear, hypothesis_failed } status = Status::nonlinear;
    double slope = 0.0;          // G'(0) by centered differences
    double sup_deviation = 0.0;  // sup |G(x) - slope * x| over the grid
    double c_factor = 0.0;       // sup_deviation / tol
};

// Kopell-style rigidity check: a C^1 map commuting with x -> lambda x on the
// grid must be linear; the hypothesis is tested first and reported separately.
inline LinearityResult linearity_test(const std::function<double(double)>& G, double lambda,
                                      const std::vector<double>& grid, double tol) {
    if (std::abs(lambda) >= 1.0) throw std::invalid_argument("linearity_test: |lambda| < 1 required");
    if (grid.empty()) throw std::invalid_argument("linearity_test: empty grid");
    LinearityResult r;
    double comm = 0.0;
    for (double x : grid) comm = std::max(comm, std::abs(G(lambda * x) - lambda * G(x)));
    if (comm > tol) {
        r.status = LinearityResult::Status::hypothesis_failed;
        r.sup_deviation = comm;
        return r;
    }
    const double h = 1e-6;
    r.slope = (G(h) - G(-h)) / (2 * h);
    for (double x : grid) r.sup_deviation = std::max(r.sup_deviation, std::abs(G(x) - r.slope * x));
    r.c_factor = r.sup_deviation / tol;
    r.status = r.sup_deviation < tol ? LinearityResult::Status::linear
                                     : LinearityResult::Status::nonlinear;
    return r;
}

// Z = R^2 x (Z/2Z)^2 with componentwise addition on theta and multiplication
// on signs.
struct ZElement {
    std::array<double, 2> theta{0.0, 0.0};
    std::array<int, 2> signs{1, 1};

    static ZElement identity() { return {}; }
    ZElement compose(const ZElement& o) const {
        return {{theta[0] + o.theta[0], theta[1] + o.theta[1]},
                {signs[0] * o.signs[0], signs[1] * o.signs[1]}};
    }
};

struct ThetaResult {
    ZElement z;
    std::array<double, 2> chi{0.0, 0.0};  // theta'_i = theta_i - (theta_1+theta_2)/2
    bool in_Z1 = false;                   // chi vanishes mod the (epsilon) action
    bool identity_coset = false;          // lies in the cyclic group (epsilon) itself
    std::string klass;                    // "identity" | "Z1" | "Z0minusZ1"
};

// Theta_B(diag(mu_1, mu_2)) = (log|mu_1|/log|lambda_1|, log|mu_2|/log|lambda_2|,
// sgn mu_1, sgn mu_2); chi projects onto the hyperplane theta_1 + theta_2 = 0.
inline ThetaResult theta_embed(const std::array<double, 2>& mu, const std::array<double, 2>& base) {
    for (double l : base) {
        if (l == 0.0 || std::abs(std::abs(l) - 1.0) < 1e-15)
            throw std::invalid_argument("theta_embed: base eigenvalues must avoid the unit circle");
    }
    for (double m : mu)
        if (m == 0.0) throw std::invalid_argument("theta_embed: mu must be nonzero");

    ThetaResult r;
    for (int i = 0; i < 2; ++i) {
        r.z.theta[size_t(i)] = std::log(std::abs(mu[size_t(i)])) / std::log(std::abs(base[size_t(i)]));
        r.z.signs[size_t(i)] = mu[size_t(i)] > 0 ? 1 : -1;
    }
    double mean = (r.z.theta[0] + r.z.theta[1]) / 2.0;
    r.chi = {r.z.theta[0] - mean, r.z.theta[1] - mean};
    r.in_Z1 = std::abs(r.chi[0]) <= 1e-9 && std::abs(r.chi[1]) <= 1e-9;

    if (r.in_Z1) {
        double k = r.z.theta[0];
        double kround = std::round(k);
        if (std::abs(k - kround) <= 1e-9 && std::abs(r.z.theta[1] - kround) <= 1e-9) {
            int ik = int(kround);
            int s1 = (base[0] < 0 && (ik % 2 != 0)) ? -1 : 1;
            int s2 = (base[1] < 0 && (ik % 2 != 0)) ? -1 : 1;
            r.identity_coset = r.z.signs[0] == s1 && r.z.signs[1] == s2;
        }
    }
    r.klass = r.identity_coset ? "identity" : (r.in_Z1 ? "Z1" : "Z0minusZ1");
    return r;
}

} // namespace hyperlab
