#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hyperlab/systems.hpp"

namespace hyperlab {

struct ShadowResult {
    std::vector<Point> orbit;
    double max_error = 0.0;     // max one-step error of the input pseudo-orbit
    double max_residual = 0.0;  // max d(f(y_n), y_{n+1}) of the output
    double sup_distance = 0.0;  // max d(y_n, x_n)
    double delta_bound = 0.0;   // a-priori bound from the contraction rates
};

namespace shadowdetail {

// Bounded solution of u_{n+1} = lambda u_n + e_n over a finite window:
// stable rates sum forward from u_0 = 0, unstable rates sum backward from
// u_{N-1} = 0. Exact for affine branches, which is what makes the output a
// true orbit up to rounding.
inline std::vector<double> stable_sum(const std::vector<double>& e, double lambda) {
    std::vector<double> u(e.size() + 1, 0.0);
    for (size_t n = 0; n < e.size(); ++n) u[n + 1] = lambda * u[n] + e[n];
    return u;
}

inline std::vector<double> unstable_sum(const std::vector<double>& e, double lambda) {
    std::vector<double> u(e.size() + 1, 0.0);
    for (size_t n = e.size(); n-- > 0;) u[n] = (u[n + 1] - e[n]) / lambda;
    return u;
}

} // namespace shadowdetail

// Shadow an epsilon-pseudo-orbit of an affine hyperbolic catalog map (cat or
// horseshoe) by the unique nearby true orbit.
inline ShadowResult shadow_pseudo_orbit(const CatalogSystem& sys, const std::vector<Point>& pseudo) {
    if (pseudo.size() < 2) throw std::invalid_argument("shadow_pseudo_orbit: need >= 2 points");

    ShadowResult out;
    size_t N = pseudo.size();

    if (sys.id == "cat") {
        // Orthonormal eigenbasis of the symmetric matrix [[2,1],[1,1]].
        const double ls = (3.0 - std::sqrt(5.0)) / 2.0;
        const double lu = (3.0 + std::sqrt(5.0)) / 2.0;
        Vec2 vs{1.0, ls - 2.0}, vu{1.0, lu - 2.0};
        double ns = vs.norm(), nu = vu.norm();
        vs = vs * (1.0 / ns);
        vu = vu * (1.0 / nu);

        std::vector<double> es(N - 1), eu(N - 1);
        for (size_t n = 0; n + 1 < N; ++n) {
            Vec2 x1 = as_2d(pseudo[n + 1]);
            Vec2 fx = as_2d(*sys.map(pseudo[n]));
            Vec2 e{wrap_diff(fx.x, x1.x), wrap_diff(fx.y, x1.y)};
            es[n] = e.dot(vs);
            eu[n] = e.dot(vu);
            out.max_error = std::max(out.max_error, e.norm());
        }
        auto us = shadowdetail::stable_sum(es, ls);
        auto uu = shadowdetail::unstable_sum(eu, lu);

        double max_es = 0, max_eu = 0;
        for (double v : es) max_es = std::max(max_es, std::abs(v));
        for (double v : eu) max_eu = std::max(max_eu, std::abs(v));
        out.delta_bound = std::hypot(max_es / (1.0 - ls), max_eu / (lu - 1.0));

        out.orbit.reserve(N);
        for (size_t n = 0; n < N; ++n) {
            Vec2 x = as_2d(pseudo[n]);
            Vec2 corr = vs * us[n] + vu * uu[n];
            out.orbit.push_back(Point(Vec2{wrap01(x.x + corr.x), wrap01(x.y + corr.y)}));
            out.sup_distance = std::max(out.sup_distance, corr.norm());
        }
    } else if (sys.id == "horseshoe") {
        std::vector<int> branch(N);
        for (size_t n = 0; n < N; ++n) {
            Vec2 v = as_2d(pseudo[n]);
            double dlow = std::abs(v.y - horseshoe_model::kLowStrip);
            double dhigh = std::abs(v.y - horseshoe_model::kHighStrip);
            if (n + 1 < N && (dlow < 1e-9 || dhigh < 1e-9))
                throw std::domain_error("shadow_pseudo_orbit: branch ambiguity at strip boundary");
            if (v.y <= horseshoe_model::kLowStrip) branch[n] = 0;
            else if (v.y >= horseshoe_model::kHighStrip) branch[n] = 1;
            else if (n + 1 < N)
                throw std::domain_error("shadow_pseudo_orbit: pseudo-orbit exits the domain");
            else branch[n] = -1;  // last point only needs to be hit, not mapped
        }
        std::vector<double> ex(N - 1), ey(N - 1);
        for (size_t n = 0; n + 1 < N; ++n) {
            Vec2 x1 = as_2d(pseudo[n + 1]);
            auto fx = sys.map(pseudo[n]);
            if (!fx) throw std::domain_error("shadow_pseudo_orbit: pseudo-orbit exits the domain");
            Vec2 f = as_2d(*fx);
            ex[n] = f.x - x1.x;
            ey[n] = f.y - x1.y;
            out.max_error = std::max(out.max_error, std::hypot(ex[n], ey[n]));
        }
        auto ux = shadowdetail::stable_sum(ex, 0.2);   // x contracts by 1/5
        auto uy = shadowdetail::unstable_sum(ey, 5.0); // y expands by 5

        double mx = 0, my = 0;
        for (double v : ex) mx = std::max(mx, std::abs(v));
        for (double v : ey) my = std::max(my, std::abs(v));
        out.delta_bound = std::hypot(mx / (1.0 - 0.2), my / (5.0 - 1.0));
        // corrections larger than half a strip could cross strips, so the
        // pseudo-orbit's branch labels would mean nothing
        if (out.delta_bound > 0.1)
            throw std::domain_error(
                "shadow_pseudo_orbit: branch ambiguity, one-step errors exceed the strip scale");

        out.orbit.reserve(N);
        for (size_t n = 0; n < N; ++n) {
            Vec2 x = as_2d(pseudo[n]);
            Vec2 y{x.x + ux[n], x.y + uy[n]};
            // the corrected point must stay on its assumed branch
            bool ok = (branch[n] == -1) ||
                      (branch[n] == 0 && y.y >= 0.0 && y.y <= horseshoe_model::kLowStrip) ||
                      (branch[n] == 1 && y.y >= horseshoe_model::kHighStrip && y.y <= 1.0);
            if (!ok || y.x < 0.0 || y.x > 1.0)
                throw std::domain_error("shadow_pseudo_orbit: branch ambiguity, corrected orbit leaves its strip");
            out.orbit.push_back(Point(y));
            out.sup_distance = std::max(out.sup_distance, std::hypot(ux[n], uy[n]));
        }
    } else {
        throw std::invalid_argument("shadow_pseudo_orbit: supported for cat and horseshoe only");
    }

    for (size_t n = 0; n + 1 < N; ++n) {
        auto fy = sys.map(out.orbit[n]);
        if (!fy) throw std::domain_error("shadow_pseudo_orbit: corrected orbit left the domain");
        out.max_residual = std::max(out.max_residual, sys.space.distance(*fy, out.orbit[n + 1]));
    }
    return out;
}

} // namespace hyperlab
