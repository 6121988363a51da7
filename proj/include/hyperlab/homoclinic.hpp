#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "hyperlab/systems.hpp"

namespace hyperlab {

struct HomoclinicPoint {
    Vec2 point;
    double stable_coord = 0.0;    // x-offset from p (the horseshoe H^s is affine)
    double unstable_coord = 0.0;  // y-offset from p
    SymbolicPoint itinerary;
};

struct HomoclinicReport {
    std::vector<HomoclinicPoint> points;
    double min_pairwise_distance = 0.0;  // discreteness evidence for J-bar_p
    bool transversal = true;             // automatic in the affine model
};

namespace homodetail {

// Closest pair by plane sweep; the enumerations get large enough that the
// quadratic scan is not an option at bigger windows.
inline double closest_pair_distance(std::vector<Vec2> pts) {
    if (pts.size() < 2) return 0.0;
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });
    std::multiset<std::pair<double, double>> active;  // (y, x)
    size_t left = 0;
    double best = 1e300;
    for (const Vec2& p : pts) {
        double d = std::sqrt(best);
        while (left < pts.size() && p.x - pts[left].x > d) {
            active.erase(active.find({pts[left].y, pts[left].x}));
            ++left;
        }
        auto lo = active.lower_bound({p.y - d, -1e300});
        auto hi = active.upper_bound({p.y + d, 1e300});
        for (auto it = lo; it != hi; ++it) {
            double dx = p.x - it->second, dy = p.y - it->first;
            best = std::min(best, dx * dx + dy * dy);
        }
        active.insert({p.y, p.x});
    }
    return std::sqrt(best);
}

} // namespace homodetail

// J_p(f) = (W^s(p) cap W^u(p)) - {p} for a horseshoe fixed point, enumerated
// through itineraries equal to p's symbol outside [-window, window]. The
// linearizing coordinates are exact offsets in the 5-adic model.
inline HomoclinicReport homoclinic_points(const CatalogSystem& sys, const Vec2& p, int window) {
    if (sys.id != "horseshoe") throw std::invalid_argument("homoclinic_points: horseshoe only");
    if (window < 0 || window > 12) throw std::invalid_argument("homoclinic_points: window must be <= 12");

    int base;
    if (std::abs(p.x) < 1e-12 && std::abs(p.y) < 1e-12) base = 0;
    else if (std::abs(p.x - 1.0) < 1e-12 && std::abs(p.y - 1.0) < 1e-12) base = 1;
    else throw std::invalid_argument("homoclinic_points: p must be a horseshoe fixed point");

    HomoclinicReport rep;
    int len = 2 * window + 1;
    long long count = 1LL << len;
    std::vector<Vec2> coords;
    for (long long mask = 0; mask < count; ++mask) {
        Word core(size_t(len), 0);
        bool all_base = true;
        for (int i = 0; i < len; ++i) {
            int bit = int((mask >> (len - 1 - i)) & 1);
            core[size_t(i)] = bit;
            all_base = all_base && bit == base;
        }
        if (all_base) continue;  // the definition subtracts {p}
        SymbolicPoint itin(Word{base}, core, Word{base}, -window);
        auto [rx, ry] = horseshoe_model::point_of_itinerary(itin);
        HomoclinicPoint h;
        h.point = {rx.value(), ry.value()};
        h.stable_coord = h.point.x - p.x;
        h.unstable_coord = h.point.y - p.y;
        h.itinerary = itin;
        coords.push_back({h.stable_coord, h.unstable_coord});
        rep.points.push_back(std::move(h));
    }
    rep.min_pairwise_distance = homodetail::closest_pair_distance(std::move(coords));
    return rep;
}

} // namespace hyperlab
