#pragma once

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "hyperlab/boxdyn.hpp"

namespace hyperlab {

// One chain class organized as a basic-set approximation: the gcd of cycle
// lengths inside the class subgraph gives the period of the cyclic splitting
// (Spectral Decomposition permutation), period 1 meaning mixing.
struct BasicSetApprox {
    int class_index = 0;
    std::vector<int> boxes;
    int period = 1;
    bool mixing = true;
    std::vector<std::vector<int>> cyclic_pieces;  // piece k maps to piece (k+1) mod period
};

enum class Evidence { graph_certified, orbit_confirmed };

inline const char* evidence_str(Evidence e) {
    return e == Evidence::graph_certified ? "certified" : "confirmed";
}

struct OrderEdge {
    int from = 0, to = 0;
    Evidence evidence = Evidence::graph_certified;
};

struct OrderGraph {
    std::vector<BasicSetApprox> nodes;
    std::vector<OrderEdge> edges;
    std::vector<char> attractor;      // filled by classify_attractors
    std::vector<char> repeller;
    std::vector<char> trivial_node;   // certified fixed-point cluster
    std::vector<std::vector<int>> basins;

    bool has_edge(int i, int j) const {
        for (const auto& e : edges)
            if (e.from == i && e.to == j) return true;
        return false;
    }
    std::optional<Evidence> edge_evidence(int i, int j) const {
        for (const auto& e : edges)
            if (e.from == i && e.to == j) return e.evidence;
        return std::nullopt;
    }
    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(nodes.size());
        for (const auto& e : edges) adj[e.from].push_back(e.to);
        for (auto& a : adj) {
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
        }
        return adj;
    }
};

inline std::vector<BasicSetApprox> spectral_decomposition(const ChainDecomposition& d) {
    std::vector<BasicSetApprox> out;
    const auto& g = d.graph;
    for (size_t ci = 0; ci < d.classes.size(); ++ci) {
        BasicSetApprox b;
        b.class_index = int(ci);
        b.boxes = d.classes[ci];

        // BFS levels within the class; gcd of (lev(u)+1-lev(v)) over
        // intra-class edges is the period of the strongly connected subgraph.
        std::set<int> in_class(b.boxes.begin(), b.boxes.end());
        std::vector<long long> level(b.boxes.size(), -1);
        auto idx = [&](int box) {
            return int(std::lower_bound(b.boxes.begin(), b.boxes.end(), box) - b.boxes.begin());
        };
        std::deque<int> q{b.boxes[0]};
        level[0] = 0;
        long long period = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            long long lv = level[idx(v)];
            for (int32_t w : g.succ[v]) {
                if (!in_class.count(w)) continue;
                long long& lw = level[idx(w)];
                if (lw == -1) {
                    lw = lv + 1;
                    q.push_back(w);
                } else {
                    period = std::gcd(period, std::llabs(lv + 1 - lw));
                }
            }
        }
        if (period == 0) period = 1;
        b.period = int(period);
        b.mixing = b.period == 1;
        b.cyclic_pieces.assign(b.period, {});
        for (size_t k = 0; k < b.boxes.size(); ++k) {
            long long r = level[k] % period;
            b.cyclic_pieces[size_t(r)].push_back(b.boxes[k]);
        }
        out.push_back(std::move(b));
    }
    return out;
}

namespace spectraldetail {

// Classes hit by transient-only paths out of class ci (direct class-to-class
// edges count as the empty transient path).
inline std::set<int> classes_reached_transiently(const ChainDecomposition& d, int ci) {
    const auto& g = d.graph;
    std::set<int> hit;
    std::vector<char> seen(g.succ.size(), 0);
    std::deque<int> q;
    for (int b : d.classes[ci]) {
        for (int32_t w : g.succ[b]) {
            int c = d.class_of[w];
            if (c == -1) {
                if (!seen[w]) {
                    seen[w] = 1;
                    q.push_back(w);
                }
            } else if (c != ci) {
                hit.insert(c);
            }
        }
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int32_t w : g.succ[v]) {
            int c = d.class_of[w];
            if (c == -1) {
                if (!seen[w]) {
                    seen[w] = 1;
                    q.push_back(w);
                }
            } else if (c != ci) {
                hit.insert(c);
            }
        }
    }
    return hit;
}

inline std::vector<Point> ring_sample_points(const BoxCover& cover, const std::vector<int>& ring) {
    std::vector<Point> pts;
    for (int b : ring) {
        if (cover.dims() == 1) {
            int i = cover.ix_of(b);
            pts.push_back(Point(cover.lo(i)));
            pts.push_back(Point(wrap01((i + 0.5) / cover.resolution)));
            pts.push_back(Point(wrap01(cover.hi(i))));
        } else {
            int ix = cover.ix_of(b), iy = cover.iy_of(b);
            for (int c = 0; c < 4; ++c)
                pts.push_back(Point(Vec2{c & 1 ? cover.hi(ix) : cover.lo(ix),
                                         c & 2 ? cover.hi(iy) : cover.lo(iy)}));
            pts.push_back(Point(Vec2{(ix + 0.5) / cover.resolution, (iy + 0.5) / cover.resolution}));
        }
    }
    return pts;
}

inline std::vector<int> ring_of(const BoxCover& cover, const std::vector<int>& boxes) {
    std::set<int> in(boxes.begin(), boxes.end());
    std::set<int> ring;
    for (int b : boxes)
        for (int nb : cover.neighbors(b))
            if (!in.count(nb)) ring.insert(nb);
    return std::vector<int>(ring.begin(), ring.end());
}

} // namespace spectraldetail

// The << relation: i << j when a transient-only box path connects a
// successor of class i to a predecessor of class j. Edges are upgraded to
// orbit-confirmed when a sampled one-ring point of class i actually enters
// the one-ring of class j under iteration.
inline OrderGraph ll_relation(const ChainDecomposition& d, const CatalogSystem& sys) {
    if (d.classes.empty()) throw std::invalid_argument("ll_relation: no classes");
    OrderGraph og;
    og.nodes = spectral_decomposition(d);
    const auto& cover = d.graph.cover;
    int steps = 10 * cover.resolution;

    for (size_t i = 0; i < d.classes.size(); ++i) {
        auto hit = spectraldetail::classes_reached_transiently(d, int(i));
        for (int j : hit) {
            OrderEdge e{int(i), j, Evidence::graph_certified};

            std::set<int> target(d.classes[j].begin(), d.classes[j].end());
            for (int rb : spectraldetail::ring_of(cover, d.classes[j])) target.insert(rb);
            auto ring_i = spectraldetail::ring_of(cover, d.classes[size_t(i)]);
            bool confirmed = false;
            for (const Point& p0 : spectraldetail::ring_sample_points(cover, ring_i)) {
                Point p = p0;
                for (int t = 0; t < steps && !confirmed; ++t) {
                    auto next = sys.map(p);
                    if (!next) break;
                    p = *next;
                    if (target.count(cover.box_of_point(p))) confirmed = true;
                }
                if (confirmed) break;
            }
            if (confirmed) e.evidence = Evidence::orbit_confirmed;
            og.edges.push_back(e);
        }
    }
    og.attractor.assign(og.nodes.size(), 0);
    og.repeller.assign(og.nodes.size(), 0);
    og.trivial_node.assign(og.nodes.size(), 0);
    og.basins.assign(og.nodes.size(), {});
    return og;
}

// All directed simple cycles in the << graph (distinct nodes). Each cycle is
// reported once, rooted at its smallest node.
inline std::vector<std::vector<int>> detect_cycles(const OrderGraph& og) {
    auto adj = og.adjacency();
    int n = int(og.nodes.size());
    std::vector<std::vector<int>> cycles;
    std::vector<int> path;
    std::vector<char> on_path(n, 0);

    std::function<void(int, int)> dfs = [&](int root, int v) {
        path.push_back(v);
        on_path[v] = 1;
        for (int w : adj[v]) {
            if (w == root) {
                cycles.push_back(path);
            } else if (w > root && !on_path[w]) {
                dfs(root, w);
            }
        }
        on_path[v] = 0;
        path.pop_back();
    };
    for (int root = 0; root < n; ++root) dfs(root, root);
    return cycles;
}

// Attractor test: the one-ring inflation V of the class is forward invariant
// in the box graph (combinatorial stand-in for X = intersection of f^n(V));
// repellers use predecessors. Attractor basins are the boxes from which the
// class is graph-reachable, excluding boxes owned by other classes.
inline OrderGraph classify_attractors(OrderGraph og, const ChainDecomposition& d) {
    const auto& g = d.graph;
    auto pred = g.reverse();
    og.attractor.assign(og.nodes.size(), 0);
    og.repeller.assign(og.nodes.size(), 0);
    og.trivial_node.assign(og.nodes.size(), 0);
    og.basins.assign(og.nodes.size(), {});

    for (size_t k = 0; k < og.nodes.size(); ++k) {
        const auto& node = og.nodes[k];
        std::set<int> V(node.boxes.begin(), node.boxes.end());
        for (int rb : spectraldetail::ring_of(g.cover, node.boxes)) V.insert(rb);

        bool fwd = true, bwd = true;
        for (int b : V) {
            for (int32_t w : g.succ[b])
                if (!V.count(w)) { fwd = false; break; }
            if (!fwd) break;
        }
        for (int b : V) {
            for (int32_t w : pred[b])
                if (!V.count(w)) { bwd = false; break; }
            if (!bwd) break;
        }
        og.attractor[k] = fwd ? 1 : 0;
        og.repeller[k] = bwd ? 1 : 0;
        og.trivial_node[k] =
            (d.class_certified[node.class_index] && node.boxes.size() <= 4) ? 1 : 0;

        if (fwd || bwd) {
            const auto& adj = fwd ? pred : g.succ;  // attractor: who reaches it; repeller: what it reaches
            auto seen = reachable_from(adj, node.boxes);
            std::vector<int> basin;
            for (size_t b = 0; b < seen.size(); ++b) {
                if (!seen[b]) continue;
                int c = d.class_of[int(b)];
                if (c != -1 && c != int(k)) continue;  // other classes are not basin members
                basin.push_back(int(b));
            }
            og.basins[k] = std::move(basin);
        }
    }
    return og;
}

struct ConnectingRepellerResult {
    std::optional<int> repeller;
    Evidence to_a1 = Evidence::graph_certified;
    Evidence to_a2 = Evidence::graph_certified;
    std::string diagnostic;
};

// Prop.-3.3 instance: two attractors whose basin closures meet must share a
// repeller r with r << a1 and r << a2.
inline ConnectingRepellerResult connecting_repeller(const OrderGraph& og,
                                                    const ChainDecomposition& d,
                                                    int a1, int a2) {
    if (a1 < 0 || a2 < 0 || a1 >= int(og.nodes.size()) || a2 >= int(og.nodes.size()) ||
        a1 == a2 || !og.attractor[a1] || !og.attractor[a2])
        throw std::invalid_argument("connecting_repeller: inputs must be two distinct attractors");

    ConnectingRepellerResult r;
    std::set<int> closure1(og.basins[a1].begin(), og.basins[a1].end());
    for (int b : spectraldetail::ring_of(d.graph.cover, og.basins[a1])) closure1.insert(b);
    bool touch = false;
    std::set<int> closure2(og.basins[a2].begin(), og.basins[a2].end());
    for (int b : spectraldetail::ring_of(d.graph.cover, og.basins[a2])) closure2.insert(b);
    for (int b : closure2)
        if (closure1.count(b)) { touch = true; break; }
    if (!touch) {
        r.diagnostic = "basin closures do not intersect";
        return r;
    }
    for (size_t k = 0; k < og.nodes.size(); ++k) {
        if (!og.repeller[k]) continue;
        auto e1 = og.edge_evidence(int(k), a1);
        auto e2 = og.edge_evidence(int(k), a2);
        if (e1 && e2) {
            r.repeller = int(k);
            r.to_a1 = *e1;
            r.to_a2 = *e2;
            return r;
        }
    }
    r.diagnostic = "no repeller with << edges to both attractors";
    return r;
}

struct ShortcutFailure {
    std::vector<int> chain;  // Lemma 3.4: the offending chain; Lemma 3.6: {r, b, a}
};

struct VerdictReport {
    int l34_checked = 0, l34_failed = 0;
    int l36_checked = 0, l36_failed = 0;
    std::vector<ShortcutFailure> l34_failures;
    std::vector<ShortcutFailure> l36_failures;
    bool all_pass() const { return l34_failed == 0 && l36_failed == 0; }
};

// Lemma 3.4: every repeller-rooted chain L0 << ... << Lk forces L0 << Lk.
// Lemma 3.6: attractor L, basic set L', repeller Lr with Lr << L' and
// cl(basin(L)) meeting the unstable side of L' forces Lr << L.
inline VerdictReport shortcut_verdicts(const OrderGraph& og, const ChainDecomposition& d) {
    VerdictReport rep;
    auto adj = og.adjacency();
    int n = int(og.nodes.size());

    for (int r = 0; r < n; ++r) {
        if (!og.repeller[r]) continue;
        std::vector<int> path{r};
        std::vector<char> on_path(n, 0);
        on_path[r] = 1;
        std::function<void(int)> dfs = [&](int v) {
            for (int w : adj[v]) {
                if (on_path[w]) continue;
                path.push_back(w);
                on_path[w] = 1;
                if (path.size() >= 3) {  // chains of length >= 2 edges
                    ++rep.l34_checked;
                    if (!og.has_edge(r, w)) {
                        ++rep.l34_failed;
                        rep.l34_failures.push_back({path});
                    }
                }
                dfs(w);
                on_path[w] = 0;
                path.pop_back();
            }
        };
        dfs(r);
    }

    for (int a = 0; a < n; ++a) {
        if (!og.attractor[a]) continue;
        std::set<int> closure(og.basins[a].begin(), og.basins[a].end());
        for (int b : spectraldetail::ring_of(d.graph.cover, og.basins[a])) closure.insert(b);
        for (int b = 0; b < n; ++b) {
            auto unstable = reachable_from(d.graph.succ, og.nodes[b].boxes);
            bool meets = false;
            for (int box : closure)
                if (unstable[box]) { meets = true; break; }
            if (!meets) continue;
            for (int r = 0; r < n; ++r) {
                if (!og.repeller[r] || !og.has_edge(r, b)) continue;
                ++rep.l36_checked;
                if (!og.has_edge(r, a)) {
                    ++rep.l36_failed;
                    rep.l36_failures.push_back({{r, b, a}});
                }
            }
        }
    }
    return rep;
}

inline void write_order_graph_dot(const OrderGraph& og, std::ostream& os) {
    os << "digraph order {\n";
    for (size_t k = 0; k < og.nodes.size(); ++k) {
        const char* tag = og.attractor[k] ? "A" : (og.repeller[k] ? "R" : "S");
        os << "  n" << k << " [label=\"" << tag << ":" << k
           << " (" << og.nodes[k].boxes.size() << " boxes, period " << og.nodes[k].period
           << ")\"];\n";
    }
    for (const auto& e : og.edges)
        os << "  n" << e.from << " -> n" << e.to << " [label=\"" << evidence_str(e.evidence)
           << "\"];\n";
    os << "}\n";
}

} // namespace hyperlab
