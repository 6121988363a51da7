#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <ostream>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "hyperlab/rational.hpp"
#include "hyperlab/systems.hpp"
#include "hyperlab/util.hpp"

namespace hyperlab {

// Uniform grid of axis-aligned cells of side 1/resolution over the phase
// space. Point-to-box assignment is half-open with ties toward the lower
// index; geometric intersection tests treat cells as closed.
struct BoxCover {
    PhaseSpace space;
    int resolution = 16;

    int dims() const { return space.dims(); }
    int box_count() const { return dims() == 1 ? resolution : resolution * resolution; }

    int id_of(int ix, int iy) const { return ix + resolution * iy; }
    int ix_of(int id) const { return dims() == 1 ? id : id % resolution; }
    int iy_of(int id) const { return dims() == 1 ? 0 : id / resolution; }

    double lo(int axis_index) const { return double(axis_index) / resolution; }
    double hi(int axis_index) const { return double(axis_index + 1) / resolution; }

    int axis_box_of(double coord) const {
        double t = coord * resolution;
        int i = int(std::floor(t));
        if (double(i) == t && i > 0) --i;  // tie toward lower index
        if (space.wraps()) {
            i %= resolution;
            if (i < 0) i += resolution;
        } else {
            i = std::clamp(i, 0, resolution - 1);
        }
        return i;
    }

    int box_of_point(const Point& p) const {
        if (dims() == 1) return axis_box_of(as_1d(p));
        Vec2 v = as_2d(p);
        return id_of(axis_box_of(v.x), axis_box_of(v.y));
    }

    // One-box ring neighbourhood (8-neighbourhood in 2-d), wrap-aware.
    std::vector<int> neighbors(int id) const {
        std::vector<int> out;
        if (dims() == 1) {
            for (int d : {-1, 1}) {
                int j = id + d;
                if (space.wraps()) j = (j % resolution + resolution) % resolution;
                else if (j < 0 || j >= resolution) continue;
                if (j != id) out.push_back(j);
            }
        } else {
            int ix = ix_of(id), iy = iy_of(id);
            for (int dx = -1; dx <= 1; ++dx) {
                for (int dy = -1; dy <= 1; ++dy) {
                    if (dx == 0 && dy == 0) continue;
                    int jx = ix + dx, jy = iy + dy;
                    if (space.wraps()) {
                        jx = (jx % resolution + resolution) % resolution;
                        jy = (jy % resolution + resolution) % resolution;
                    } else if (jx < 0 || jx >= resolution || jy < 0 || jy >= resolution) {
                        continue;
                    }
                    int j = id_of(jx, jy);
                    if (j != id) out.push_back(j);
                }
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

// Directed graph over a box cover whose edges outer-approximate the map:
// i -> j when the image enclosure of box_i, inflated by epsilon, meets the
// closed box_j. The catalog maps are coordinatewise monotone or affine, so
// the corner-image bounding box IS the exact image bounding box; epsilon is
// the only inflation applied.
struct BoxGraph {
    BoxCover cover;
    double epsilon = 0.0;
    std::vector<std::vector<int32_t>> succ;
    std::vector<char> mask;               // boxes where the map is defined
    std::vector<char> periodic_box_cert;  // box provably contains a low-period point

    bool has_edge(int i, int j) const {
        const auto& s = succ[i];
        return std::binary_search(s.begin(), s.end(), int32_t(j));
    }
    bool self_loop(int i) const { return has_edge(i, i); }

    std::vector<std::vector<int32_t>> reverse() const {
        std::vector<std::vector<int32_t>> pred(succ.size());
        for (size_t i = 0; i < succ.size(); ++i)
            for (int32_t j : succ[i]) pred[j].push_back(int32_t(i));
        return pred;
    }
};

namespace boxdetail {

// Covered axis-box indices of a closed interval [lo, hi] (closed-cell
// intersection, so a shared endpoint counts). Indices may run outside
// [0, res) for wrapping spaces; caller reduces mod res.
struct AxisRange {
    long long jmin, jmax;
};

inline AxisRange axis_range(double lo, double hi, int res) {
    double t1 = lo * res, t2 = hi * res;
    long long jmin = (long long)std::floor(t1);
    if (double(jmin) == t1) jmin -= 1;  // touch at the left endpoint
    long long jmax = (long long)std::floor(t2);
    return {jmin, jmax};
}

inline AxisRange axis_range(const Rat& lo, const Rat& hi, int res) {
    Rat t1 = lo * Rat(res), t2 = hi * Rat(res);
    auto floor_rat = [](const Rat& r) -> long long {
        Rat::Int q = r.num() / r.den();
        if (r.num() < 0 && r.num() % r.den() != 0) --q;
        return (long long)q;
    };
    long long jmin = floor_rat(t1);
    if (t1.is_integer()) jmin -= 1;
    long long jmax = floor_rat(t2);
    return {jmin, jmax};
}

inline void emit_targets_1d(const BoxCover& cover, const AxisRange& r, std::vector<int32_t>& out) {
    int res = cover.resolution;
    for (long long j = r.jmin; j <= r.jmax; ++j) {
        long long jj = j;
        if (cover.space.wraps()) {
            jj = (j % res + res) % res;
        } else if (jj < 0 || jj >= res) {
            continue;
        }
        out.push_back(int32_t(jj));
    }
}

inline void emit_targets_2d(const BoxCover& cover, const AxisRange& rx, const AxisRange& ry,
                            std::vector<int32_t>& out) {
    int res = cover.resolution;
    for (long long jy = ry.jmin; jy <= ry.jmax; ++jy) {
        long long y = jy;
        if (cover.space.wraps()) y = (jy % res + res) % res;
        else if (y < 0 || y >= res) continue;
        for (long long jx = rx.jmin; jx <= rx.jmax; ++jx) {
            long long x = jx;
            if (cover.space.wraps()) x = (jx % res + res) % res;
            else if (x < 0 || x >= res) continue;
            out.push_back(int32_t(cover.id_of(int(x), int(y))));
        }
    }
}

// Exact fixed-point certificates for the catalog. A self-loop singleton only
// counts as a chain class when the box provably contains a fixed point;
// otherwise the loop is quantization slack near an expanding direction.
inline bool fixed_point_in_box(const CatalogSystem& sys, const BoxCover& cover, int id) {
    int res = cover.resolution;
    auto axis_has_zero = [&](const CircleFactor& f, int i) {
        double d0 = f.displacement(cover.lo(i));
        double d1 = f.displacement(cover.hi(i));
        return (d0 <= 0.0 && d1 >= 0.0) || (d0 >= 0.0 && d1 <= 0.0);
    };
    if (sys.id == "north_south") {
        return axis_has_zero(*sys.factor_x, cover.ix_of(id));
    }
    if (sys.id == "grad2" || sys.id == "grad4") {
        return axis_has_zero(*sys.factor_x, cover.ix_of(id)) &&
               axis_has_zero(*sys.factor_y, cover.iy_of(id));
    }
    if (sys.id == "cat") {
        // (A - I) x = 0 mod Z^2 has only lattice solutions; a closed box
        // contains one iff it touches a lattice corner.
        auto touches_int = [&](int i) { return i == 0 || i == res - 1; };
        return touches_int(cover.ix_of(id)) && touches_int(cover.iy_of(id));
    }
    if (sys.id == "horseshoe") {
        int ix = cover.ix_of(id), iy = cover.iy_of(id);
        return (ix == 0 && iy == 0) || (ix == res - 1 && iy == res - 1);
    }
    return false;
}

} // namespace boxdetail

inline BoxGraph build_box_graph(const CatalogSystem& sys, int resolution, double epsilon) {
    if (sys.space.kind == SpaceKind::shiftspace)
        throw std::invalid_argument("build_box_graph: shift spaces have no box cover");
    if (resolution < 16 || resolution > 1024)
        throw std::invalid_argument("build_box_graph: resolution must be in [16, 1024]");
    if (epsilon < 0.0) throw std::invalid_argument("build_box_graph: epsilon must be >= 0");

    BoxGraph g;
    g.cover = {sys.space, resolution};
    g.epsilon = epsilon;
    int n = g.cover.box_count();
    g.succ.assign(n, {});
    g.mask.assign(n, 1);
    g.periodic_box_cert.assign(n, 0);

    const int res = resolution;

    if (sys.id == "horseshoe") {
        // Exact rational enclosures: the branches are affine with 5-adic
        // coefficients, so every comparison below is exact.
        const Rat fifth(1, 5), four_fifth(4, 5);
        for (int id = 0; id < n; ++id) {
            int ix = g.cover.ix_of(id), iy = g.cover.iy_of(id);
            Rat xlo(ix, res), xhi(ix + 1, res);
            Rat ylo(iy, res), yhi(iy + 1, res);
            bool in0 = ylo <= fifth;                 // piece in H0 (y <= 1/5)
            bool in1 = yhi >= four_fifth;            // piece in H1 (y >= 4/5)
            g.mask[id] = (in0 || in1) ? 1 : 0;
            if (!g.mask[id]) continue;
            std::vector<int32_t> targets;
            auto add_piece = [&](const Rat& pxlo, const Rat& pxhi, const Rat& pylo, const Rat& pyhi) {
                if (epsilon == 0.0) {
                    auto rx = boxdetail::axis_range(pxlo, pxhi, res);
                    auto ry = boxdetail::axis_range(pylo, pyhi, res);
                    boxdetail::emit_targets_2d(g.cover, rx, ry, targets);
                } else {
                    // outward-rounded double inflation; sound, slightly loose
                    auto rx = boxdetail::axis_range(pxlo.value() - epsilon, pxhi.value() + epsilon, res);
                    auto ry = boxdetail::axis_range(pylo.value() - epsilon, pyhi.value() + epsilon, res);
                    boxdetail::emit_targets_2d(g.cover, rx, ry, targets);
                }
            };
            if (in0) {
                Rat plo = ylo < Rat(0) ? Rat(0) : ylo;
                Rat phi = yhi < fifth ? yhi : fifth;
                add_piece(xlo * fifth, xhi * fifth, Rat(5) * plo, Rat(5) * phi);
            }
            if (in1) {
                Rat plo = ylo > four_fifth ? ylo : four_fifth;
                Rat phi = yhi > Rat(1) ? Rat(1) : yhi;
                add_piece(xlo * fifth + four_fifth, xhi * fifth + four_fifth,
                          Rat(5) * plo - Rat(4), Rat(5) * phi - Rat(4));
            }
            std::sort(targets.begin(), targets.end());
            targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
            g.succ[id] = std::move(targets);
            g.periodic_box_cert[id] = boxdetail::fixed_point_in_box(sys, g.cover, id) ? 1 : 0;
        }
        // Mark boxes holding a true periodic point of period <= P as well;
        // at resolution 5^k every box meeting the invariant set holds one
        // with P = 2 * ceil(log5(res)), so genuine Cantor-set classes always
        // carry a certificate while quantization cycles never do.
        int P = std::max(6, 2 * int(std::ceil(std::log(double(res)) / std::log(5.0))));
        auto closed_axis_boxes = [&](double coord) {
            std::vector<int> out;
            int base = int(std::floor(coord * res));
            for (int i = base - 1; i <= base + 1; ++i)
                if (i >= 0 && i < res && g.cover.lo(i) <= coord && coord <= g.cover.hi(i))
                    out.push_back(i);
            return out;
        };
        for (const PeriodicPoint& pp : find_periodic_points(sys, std::min(P, 12))) {
            Vec2 v = as_2d(pp.point);
            for (int ix : closed_axis_boxes(v.x))
                for (int iy : closed_axis_boxes(v.y)) g.periodic_box_cert[g.cover.id_of(ix, iy)] = 1;
        }
        return g;
    }

    // Smooth systems: corner-image bounding boxes with wrap re-centering.
    // Box corners are dyadic and the catalog evaluations are exact there
    // (exact-zero sine at symmetry points, integer-matrix arithmetic), so
    // boundary-touch edges come out exactly.
    parallel_for(n, [&](int id) {
        if (g.cover.dims() == 1) {
            int i = g.cover.ix_of(id);
            double c = (i + 0.5) / res;
            double fc = as_1d(*sys.map(Point(c)));
            double r0 = fc + wrap_diff(as_1d(*sys.map(Point(g.cover.lo(i)))), fc);
            double r1 = fc + wrap_diff(as_1d(*sys.map(Point(g.cover.hi(i)))), fc);
            double lo = std::min(r0, r1) - epsilon, hi = std::max(r0, r1) + epsilon;
            std::vector<int32_t> targets;
            boxdetail::emit_targets_1d(g.cover, boxdetail::axis_range(lo, hi, res), targets);
            std::sort(targets.begin(), targets.end());
            targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
            g.succ[id] = std::move(targets);
        } else {
            int ix = g.cover.ix_of(id), iy = g.cover.iy_of(id);
            Vec2 c{(ix + 0.5) / res, (iy + 0.5) / res};
            Vec2 fc = as_2d(*sys.map(Point(c)));
            double xlo = 1e30, xhi = -1e30, ylo = 1e30, yhi = -1e30;
            for (int corner = 0; corner < 4; ++corner) {
                Vec2 p{corner & 1 ? g.cover.hi(ix) : g.cover.lo(ix),
                       corner & 2 ? g.cover.hi(iy) : g.cover.lo(iy)};
                Vec2 w = as_2d(*sys.map(Point(p)));
                double rx = fc.x + wrap_diff(w.x, fc.x);
                double ry = fc.y + wrap_diff(w.y, fc.y);
                xlo = std::min(xlo, rx); xhi = std::max(xhi, rx);
                ylo = std::min(ylo, ry); yhi = std::max(yhi, ry);
            }
            std::vector<int32_t> targets;
            boxdetail::emit_targets_2d(g.cover,
                                       boxdetail::axis_range(xlo - epsilon, xhi + epsilon, res),
                                       boxdetail::axis_range(ylo - epsilon, yhi + epsilon, res),
                                       targets);
            std::sort(targets.begin(), targets.end());
            targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
            g.succ[id] = std::move(targets);
        }
        g.periodic_box_cert[id] = boxdetail::fixed_point_in_box(sys, g.cover, id) ? 1 : 0;
    });
    return g;
}

// Chain recurrent classes over the box graph: nontrivial strongly connected
// components, plus self-loop singletons whose box carries a fixed-point
// certificate. Classes are numbered by smallest contained box index.
struct ChainDecomposition {
    BoxGraph graph;
    std::vector<std::vector<int>> classes;
    std::vector<int> class_of;  // -1 for transient boxes
    std::vector<int> transient;
    std::vector<char> class_certified;
};

namespace boxdetail {

// Iterative Tarjan; box graphs get large enough that recursion would
// overflow the stack.
inline std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int32_t>>& succ) {
    int n = int(succ.size());
    std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::vector<int>> sccs;
    int counter = 0;

    struct Frame {
        int v;
        size_t child;
    };
    std::vector<Frame> call;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            Frame& f = call.back();
            int v = f.v;
            if (f.child == 0) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (f.child < succ[v].size()) {
                int w = succ[v][f.child++];
                if (index[w] == -1) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                std::vector<int> comp;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                sccs.push_back(std::move(comp));
            }
            call.pop_back();
            if (!call.empty()) {
                Frame& parent = call.back();
                low[parent.v] = std::min(low[parent.v], low[v]);
            }
        }
    }
    return sccs;
}

} // namespace boxdetail

inline ChainDecomposition chain_classes(BoxGraph g) {
    ChainDecomposition d;
    int n = g.cover.box_count();
    auto sccs = boxdetail::strongly_connected_components(g.succ);

    // Recurrence certificate: a component (nontrivial SCC or self-loop
    // singleton) counts as a chain class only when one of its boxes provably
    // contains a periodic point. Corner-touch edges and expansion slower
    // than one box per step both breed uncertified components near the
    // genuine ones; those are quantization artifacts, not recurrence.
    std::vector<std::vector<int>> keep;
    for (auto& comp : sccs) {
        bool cyclic = comp.size() >= 2 || g.self_loop(comp[0]);
        if (!cyclic) continue;
        bool certified = false;
        for (int b : comp) certified = certified || g.periodic_box_cert[b];
        if (certified) keep.push_back(std::move(comp));
    }
    std::sort(keep.begin(), keep.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a[0] < b[0]; });

    d.class_of.assign(n, -1);
    for (size_t ci = 0; ci < keep.size(); ++ci)
        for (int b : keep[ci]) d.class_of[b] = int(ci);
    for (int b = 0; b < n; ++b)
        if (d.class_of[b] == -1) d.transient.push_back(b);
    d.class_certified.assign(keep.size(), 0);
    for (size_t ci = 0; ci < keep.size(); ++ci)
        for (int b : keep[ci])
            if (g.periodic_box_cert[b]) d.class_certified[ci] = 1;
    d.classes = std::move(keep);
    d.graph = std::move(g);
    return d;
}

// Boxes reachable from `starts` (inclusive) along graph edges.
inline std::vector<char> reachable_from(const std::vector<std::vector<int32_t>>& succ,
                                        const std::vector<int>& starts) {
    std::vector<char> seen(succ.size(), 0);
    std::deque<int> q;
    for (int s : starts) {
        if (!seen[s]) {
            seen[s] = 1;
            q.push_back(s);
        }
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int32_t w : succ[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                q.push_back(w);
            }
        }
    }
    return seen;
}

// True iff box(y) is reachable from box(x); the empty chain (x = y) counts.
inline bool epsilon_chain_exists(const BoxGraph& g, const Point& x, const Point& y) {
    int bx = g.cover.box_of_point(x), by = g.cover.box_of_point(y);
    if (!g.mask[bx] || !g.mask[by])
        throw std::domain_error("epsilon_chain_exists: point outside the map domain");
    if (bx == by) return true;
    auto seen = reachable_from(g.succ, {bx});
    return seen[by] != 0;
}

struct IsolationResult {
    bool isolated = false;
    std::vector<int> neighborhood;  // class boxes plus the one-box ring
};

// Prop.-2.9-style check: the one-ring inflation of the class must contain no
// box of any other class.
inline IsolationResult isolation_check(const ChainDecomposition& d, int class_index) {
    if (class_index < 0 || class_index >= int(d.classes.size()))
        throw std::invalid_argument("isolation_check: bad class index");
    std::set<int> hood(d.classes[class_index].begin(), d.classes[class_index].end());
    for (int b : d.classes[class_index])
        for (int nb : d.graph.cover.neighbors(b)) hood.insert(nb);
    IsolationResult r;
    r.neighborhood.assign(hood.begin(), hood.end());
    r.isolated = true;
    for (int b : r.neighborhood) {
        int c = d.class_of[b];
        if (c != -1 && c != class_index) r.isolated = false;
    }
    return r;
}

inline void write_box_graph_dot(const BoxGraph& g, std::ostream& os) {
    os << "digraph boxgraph {\n";
    for (size_t i = 0; i < g.succ.size(); ++i)
        for (int32_t j : g.succ[i]) os << "  box_" << i << " -> box_" << j << ";\n";
    os << "}\n";
}

inline void write_box_graph_csv(const BoxGraph& g, std::ostream& os) {
    os << "src,dst\n";
    for (size_t i = 0; i < g.succ.size(); ++i)
        for (int32_t j : g.succ[i]) os << i << "," << j << "\n";
}

inline void write_decomposition_csv(const ChainDecomposition& d, std::ostream& os) {
    os << "box,class\n";
    for (size_t b = 0; b < d.class_of.size(); ++b)
        if (d.class_of[b] != -1) os << b << "," << d.class_of[b] << "\n";
}

} // namespace hyperlab
