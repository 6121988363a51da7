#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "hyperlab/shadowing.hpp"
#include "hyperlab/systems.hpp"

namespace hyperlab {

// Subshift of finite type with symbols anchored to marked phase-space
// points: a_ij = 1 iff d(f(p_i), p_j) < epsilon.
struct Sft {
    PhaseSpace space;
    std::vector<Point> symbols;
    std::vector<std::vector<uint8_t>> a;
    double epsilon = 0.0;
    double nu = 0.0;  // mesh radius of the marked set (reported, not enforced)

    int n() const { return int(symbols.size()); }
    bool allowed(int i, int j) const { return a[size_t(i)][size_t(j)] != 0; }

    bool word_admissible(const Word& w) const {
        for (int s : w)
            if (s < 0 || s >= n()) return false;
        for (size_t k = 0; k + 1 < w.size(); ++k)
            if (!allowed(w[k], w[k + 1])) return false;
        return true;
    }

    // Admissibility of an eventually periodic point, seams included.
    bool point_admissible(const SymbolicPoint& s) const {
        long long lo = s.core_start - (long long)s.left.size() - 1;
        long long hi = s.core_end() + (long long)s.right.size() + 1;
        for (long long i = lo; i < hi; ++i) {
            int u = s.at(i), v = s.at(i + 1);
            if (u < 0 || u >= n() || v < 0 || v >= n() || !allowed(u, v)) return false;
        }
        return true;
    }
};

// Transition matrix built exactly by the displayed formula
// a_ij = [ d(f(p_i), p_j) < epsilon ].
inline Sft sft_from_points(const CatalogSystem& sys, const std::vector<Point>& points,
                           double epsilon) {
    if (points.empty()) throw std::invalid_argument("sft_from_points: empty marked set");
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if (sys.space.distance(points[i], points[j]) == 0.0)
                throw std::invalid_argument("sft_from_points: marked points must be distinct");

    Sft s;
    s.space = sys.space;
    s.symbols = points;
    s.epsilon = epsilon;
    s.a.assign(points.size(), std::vector<uint8_t>(points.size(), 0));
    for (size_t i = 0; i < points.size(); ++i) {
        auto fp = sys.map(points[i]);
        if (!fp) throw std::invalid_argument("sft_from_points: marked point outside the map domain");
        for (size_t j = 0; j < points.size(); ++j)
            s.a[i][j] = sys.space.distance(*fp, points[j]) < epsilon ? 1 : 0;
    }
    // mesh radius: worst distance from a marked point to the rest of the set
    if (points.size() >= 2) {
        double mesh = 0.0;
        for (size_t i = 0; i < points.size(); ++i) {
            double best = 1e300;
            for (size_t j = 0; j < points.size(); ++j)
                if (j != i) best = std::min(best, sys.space.distance(points[i], points[j]));
            mesh = std::max(mesh, best);
        }
        s.nu = mesh;
    }
    return s;
}

namespace sftdetail {

// Symbols surviving iterated removal of all-zero rows/columns.
inline std::vector<int> pruned_symbols(const Sft& s) {
    int n = s.n();
    std::vector<char> alive(n, 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            bool row = false, col = false;
            for (int j = 0; j < n; ++j) {
                if (alive[j] && s.allowed(i, j)) row = true;
                if (alive[j] && s.allowed(j, i)) col = true;
            }
            if (!row || !col) {
                alive[i] = 0;
                changed = true;
            }
        }
    }
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (alive[i]) out.push_back(i);
    return out;
}

inline bool strongly_connected(const Sft& s, const std::vector<int>& verts) {
    if (verts.empty()) return false;
    auto reach = [&](bool reversed) {
        std::set<int> seen{verts[0]};
        std::deque<int> q{verts[0]};
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int w : verts) {
                bool edge = reversed ? s.allowed(w, v) : s.allowed(v, w);
                if (edge && !seen.count(w)) {
                    seen.insert(w);
                    q.push_back(w);
                }
            }
        }
        return seen.size() == verts.size();
    };
    return reach(false) && reach(true);
}

// gcd of cycle lengths via BFS levels; 1 means primitive (some power of the
// matrix is entrywise positive).
inline int graph_period(const Sft& s, const std::vector<int>& verts) {
    std::vector<long long> level(verts.size(), -1);
    auto idx = [&](int v) {
        return int(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
    };
    std::deque<int> q{verts[0]};
    level[0] = 0;
    long long g = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w : verts) {
            if (!s.allowed(v, w)) continue;
            long long& lw = level[size_t(idx(w))];
            if (lw == -1) {
                lw = level[size_t(idx(v))] + 1;
                q.push_back(w);
            } else {
                g = std::gcd(g, std::llabs(level[size_t(idx(v))] + 1 - lw));
            }
        }
    }
    return g == 0 ? 1 : int(g);
}

} // namespace sftdetail

// transitive <=> irreducible (strongly connected after pruning);
// mixing <=> primitive (irreducible with cycle-length gcd 1).
inline std::pair<bool, bool> check_irreducible_primitive(const Sft& s) {
    auto verts = sftdetail::pruned_symbols(s);
    if (verts.empty()) return {false, false};
    bool transitive = int(verts.size()) == s.n() && sftdetail::strongly_connected(s, verts);
    bool mixing = transitive && sftdetail::graph_period(s, verts) == 1;
    return {transitive, mixing};
}

// Lexicographically least shortest connecting word from symbol u to symbol v
// using >= 1 edges: u -> w_1 -> ... -> w_m -> v. Returns the interior
// (possibly empty); nullopt when v is unreachable.
inline std::optional<Word> connecting_interior(const Sft& s, int u, int v) {
    int n = s.n();
    std::vector<int> dist(n, -1);  // edges needed to reach v
    std::deque<int> q{v};
    dist[v] = 0;
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        for (int w = 0; w < n; ++w)
            if (s.allowed(w, x) && dist[w] == -1) {
                dist[w] = dist[x] + 1;
                q.push_back(w);
            }
    }
    int best = -1;
    for (int w = 0; w < n; ++w)
        if (s.allowed(u, w) && dist[w] != -1 && (best == -1 || dist[w] + 1 < best))
            best = dist[w] + 1;
    if (best == -1) return std::nullopt;
    Word interior;
    int cur = u, remaining = best;
    while (remaining > 1) {
        for (int w = 0; w < n; ++w) {
            if (s.allowed(cur, w) && dist[w] == remaining - 1) {
                interior.push_back(w);
                cur = w;
                --remaining;
                break;
            }
        }
    }
    return interior;
}

// Claim-5.2 style periodic witness: close the admissible word up with the
// shortest connecting word back to its head and centre it, so that
// d(witness, any extension of the word) <= 2^(-floor(len/2)).
inline SymbolicPoint periodic_density_witness(const Sft& s, const Word& word) {
    if (word.empty()) throw std::invalid_argument("periodic_density_witness: empty word");
    if (!s.word_admissible(word))
        throw std::invalid_argument("periodic_density_witness: word not admissible");
    auto interior = connecting_interior(s, word.back(), word.front());
    if (!interior)
        throw std::runtime_error("periodic_density_witness: no connecting path (non-transitive component)");
    Word loop = word;
    loop.insert(loop.end(), interior->begin(), interior->end());
    return SymbolicPoint::periodic(loop).shifted((long long)word.size() / 2);
}

struct BetaResult {
    Point value;
    double eta = 0.0;  // realized shadowing radius along the marked pseudo-orbit
};

namespace sftdetail {

inline Word map_word(const Word& w, const std::vector<int>& table) {
    Word out(w.size());
    for (size_t i = 0; i < w.size(); ++i) out[i] = table[size_t(w[i])];
    return out;
}

inline long long eta_window(const SymbolicPoint& x) {
    return std::llabs(x.core_start) + (long long)x.core.size() +
           (long long)std::lcm(x.left.size(), x.right.size()) + 8;
}

} // namespace sftdetail

// Exact rational beta for horseshoe-anchored subshifts; beta intertwines
// the shift with the map on the nose in this arithmetic.
inline std::pair<Rat, Rat> beta_horseshoe_exact(const Sft& s, const SymbolicPoint& x) {
    if (!s.point_admissible(x)) throw std::invalid_argument("beta_horseshoe_exact: inadmissible point");
    std::vector<int> digit(s.symbols.size());
    for (size_t i = 0; i < s.symbols.size(); ++i)
        digit[i] = horseshoe_model::strip_of(as_2d(s.symbols[i]));
    SymbolicPoint itin(sftdetail::map_word(x.left, digit), sftdetail::map_word(x.core, digit),
                       sftdetail::map_word(x.right, digit), x.core_start);
    return horseshoe_model::point_of_itinerary(itin);
}

// The map beta : Sigma_A -> Lambda-tilde. For the full shift the marked
// pseudo-orbit is shadowed by the diagonal sequence; for the horseshoe by
// the exact 5-adic series of the strip itinerary; for cat by the affine
// shadowing solver.
inline BetaResult beta_map(const Sft& s, const SymbolicPoint& x, const CatalogSystem& sys) {
    if (!s.point_admissible(x)) throw std::invalid_argument("beta_map: inadmissible point");

    BetaResult r;
    if (sys.id == "full_shift") {
        std::vector<int> digit(s.symbols.size());
        for (size_t i = 0; i < s.symbols.size(); ++i) digit[i] = as_sym(s.symbols[i]).at(0);
        SymbolicPoint t(sftdetail::map_word(x.left, digit), sftdetail::map_word(x.core, digit),
                        sftdetail::map_word(x.right, digit), x.core_start);
        long long W = sftdetail::eta_window(x);
        for (long long k = -W; k <= W; ++k)
            r.eta = std::max(r.eta, shift_distance(t.shifted(k), as_sym(s.symbols[size_t(x.at(k))])));
        r.value = Point(t);
        return r;
    }
    if (sys.id == "horseshoe") {
        std::vector<int> digit(s.symbols.size());
        for (size_t i = 0; i < s.symbols.size(); ++i)
            digit[i] = horseshoe_model::strip_of(as_2d(s.symbols[size_t(i)]));
        SymbolicPoint itin(sftdetail::map_word(x.left, digit), sftdetail::map_word(x.core, digit),
                           sftdetail::map_word(x.right, digit), x.core_start);
        auto [rx, ry] = horseshoe_model::point_of_itinerary(itin);
        long long W = std::min<long long>(sftdetail::eta_window(x), 24);
        for (long long k = -W; k <= W; ++k) {
            auto [ox, oy] = horseshoe_model::point_of_itinerary(itin.shifted(k));
            Vec2 anchor = as_2d(s.symbols[size_t(x.at(k))]);
            r.eta = std::max(r.eta, std::hypot(ox.value() - anchor.x, oy.value() - anchor.y));
        }
        r.value = Point(Vec2{rx.value(), ry.value()});
        return r;
    }
    if (sys.id == "cat") {
        // long enough window that the hyperbolic tails have fully decayed
        long long W = sftdetail::eta_window(x) + 64;
        std::vector<Point> pseudo;
        pseudo.reserve(size_t(2 * W + 1));
        for (long long k = -W; k <= W; ++k) pseudo.push_back(s.symbols[size_t(x.at(k))]);
        ShadowResult sh = shadow_pseudo_orbit(sys, pseudo);
        r.value = sh.orbit[size_t(W)];
        r.eta = sh.sup_distance;
        return r;
    }
    throw std::invalid_argument("beta_map: ambient system must be horseshoe, cat or full_shift");
}

} // namespace hyperlab
