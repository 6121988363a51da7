#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperlab/sft.hpp"

namespace hyperlab {

// A shift-invariant subsystem of the full 2-shift, described by a family of
// periodic generator words (parameterized by an integer) together with a
// closed-form membership test for eventually periodic points in the closure
// of the generated orbits.
struct SubsystemSpec {
    std::string name;
    std::function<std::vector<Word>(int)> generators_up_to;
    std::function<bool(const SymbolicPoint&)> member;
};

// z with z_i = x_i for i >= 0 and z_i = y_i for i < 0 (periodic x, y).
inline SymbolicPoint splice_left_right(const SymbolicPoint& y, const SymbolicPoint& x) {
    // periodic inputs: read one full period starting at 0 / ending at -1
    Word R, L;
    auto per_x = x.period(), per_y = y.period();
    if (!per_x || !per_y)
        throw std::invalid_argument("splice_left_right: inputs must be periodic points");
    for (long long i = 0; i < *per_x; ++i) R.push_back(x.at(i));
    for (long long i = -*per_y; i < 0; ++i) L.push_back(y.at(i));
    return SymbolicPoint(L, {}, R, 0);
}

// Closure of the orbits of (0^k 1)^infinity, k >= 1: contains those periodic
// orbits, the single-1 sequences and 0^infinity. Dense periodic points but
// no local product structure (splicing two different gap sizes escapes).
inline SubsystemSpec single_one_family() {
    SubsystemSpec s;
    s.name = "single_one_closure";
    s.generators_up_to = [](int k) {
        std::vector<Word> out;
        for (int j = 1; j <= k; ++j) {
            Word w(size_t(j), 0);
            w.push_back(1);
            out.push_back(w);
        }
        return out;
    };
    s.member = [](const SymbolicPoint& p) {
        bool left_ones = std::find(p.left.begin(), p.left.end(), 1) != p.left.end();
        bool right_ones = std::find(p.right.begin(), p.right.end(), 1) != p.right.end();
        for (int v : p.left) if (v != 0 && v != 1) return false;
        for (int v : p.core) if (v != 0 && v != 1) return false;
        for (int v : p.right) if (v != 0 && v != 1) return false;
        if (left_ones != right_ones) return false;
        if (!left_ones && !right_ones) {
            int ones = 0;
            for (int v : p.core) ones += v == 1;
            return ones <= 1;
        }
        // infinitely many 1s both ways: must be a shift of (0^k 1)^infinity
        auto per = p.period();
        if (!per || *per < 2) return false;
        int ones = 0;
        for (int i = 0; i < *per; ++i) ones += p.at(i) == 1;
        return ones == 1;
    };
    return s;
}

namespace subsysdetail {

// primitive binary words of length <= k, optionally forbidding the block 11
// (cyclically, so that the periodic orbit is admissible)
inline std::vector<Word> primitive_binary_words(int k, bool forbid_11) {
    std::vector<Word> out;
    for (int len = 1; len <= k; ++len) {
        for (int m = 0; m < (1 << len); ++m) {
            Word w(size_t(len), 0);
            for (int i = 0; i < len; ++i) w[size_t(i)] = (m >> (len - 1 - i)) & 1;
            if (primitive_root(w).size() != w.size()) continue;
            if (forbid_11) {
                bool bad = false;
                for (int i = 0; i < len; ++i) bad = bad || (w[size_t(i)] == 1 && w[size_t((i + 1) % len)] == 1);
                if (bad) continue;
            }
            out.push_back(w);
        }
    }
    return out;
}

inline bool no_11(const SymbolicPoint& p) {
    long long lo = p.core_start - (long long)p.left.size() - 1;
    long long hi = p.core_end() + (long long)p.right.size() + 1;
    for (long long i = lo; i < hi; ++i) {
        if (p.at(i) != 0 && p.at(i) != 1) return false;
        if (p.at(i) == 1 && p.at(i + 1) == 1) return false;
    }
    for (long long i = lo; i <= hi; ++i)
        if (p.at(i) != 0 && p.at(i) != 1) return false;
    return true;
}

} // namespace subsysdetail

inline SubsystemSpec full_shift_spec() {
    SubsystemSpec s;
    s.name = "full_shift";
    s.generators_up_to = [](int k) { return subsysdetail::primitive_binary_words(k, false); };
    s.member = [](const SymbolicPoint& p) {
        for (int v : p.left) if (v != 0 && v != 1) return false;
        for (int v : p.core) if (v != 0 && v != 1) return false;
        for (int v : p.right) if (v != 0 && v != 1) return false;
        return true;
    };
    return s;
}

inline SubsystemSpec golden_mean_spec() {
    SubsystemSpec s;
    s.name = "golden_mean";
    s.generators_up_to = [](int k) { return subsysdetail::primitive_binary_words(k, true); };
    s.member = subsysdetail::no_11;
    return s;
}

struct LocalProductResult {
    bool locally_maximal = true;
    std::optional<SymbolicPoint> witness_x, witness_y, witness_splice;
};

// Local maximality <=> local product structure: every splice of members
// agreeing at coordinate 0 must again be a member. Enumerates all phases of
// generator orbits of complexity <= depth.
inline LocalProductResult local_product_check(const SubsystemSpec& spec, int depth) {
    if (depth > 12) throw std::invalid_argument("local_product_check: depth must be <= 12");
    LocalProductResult r;
    std::vector<SymbolicPoint> pts;
    for (const Word& w : spec.generators_up_to(depth))
        for (size_t ph = 0; ph < w.size(); ++ph)
            pts.push_back(SymbolicPoint::periodic(w).shifted((long long)ph));

    for (const auto& x : pts) {
        for (const auto& y : pts) {
            if (x.at(0) != y.at(0)) continue;
            SymbolicPoint z = splice_left_right(y, x);
            if (!spec.member(z)) {
                r.locally_maximal = false;
                r.witness_x = x;
                r.witness_y = y;
                r.witness_splice = z;
                return r;
            }
        }
    }
    return r;
}

struct Escapee {
    SymbolicPoint point;       // ambient (binary) periodic point
    int n = 0;
    double dist_to_shifted_z = 0.0;  // d(p_n, g^{n m1}(z))
    double dist_to_limit_orbit = 0.0;
    bool member = false;
};

struct MarkovEnclosure {
    Sft sft;
    bool locally_maximal_certificate = false;  // no violating splice among marked pairs
    std::optional<SymbolicPoint> q1, q2, z;
    std::vector<Escapee> escapees;
    std::optional<SymbolicPoint> limit;
    std::string note;
};

namespace subsysdetail {

inline int index_of_point(const std::vector<SymbolicPoint>& pts, const SymbolicPoint& p) {
    for (size_t i = 0; i < pts.size(); ++i)
        if (pts[i] == p) return int(i);
    return -1;
}

} // namespace subsysdetail

// Lemma 5.3 procedure for g = sigma^power on the ambient 2-shift:
// select nu-dense generator orbits, build the transition matrix in the shift
// metric, splice a violating pair q1, q2 into z = (w2-bar . w1-bar), and read
// off escaping periodic points p_n with d(p_n, g^{n m1}(z)) < nu / 2^n.
// Locally maximal inputs yield a negative certificate instead.
inline MarkovEnclosure enclosing_markov_system(const SubsystemSpec& spec, double nu, int power = 1) {
    if (!(nu > 0.0) || nu > 1.0) throw std::invalid_argument("enclosing_markov_system: nu in (0, 1]");
    if (power < 1) throw std::invalid_argument("enclosing_markov_system: power >= 1");

    MarkovEnclosure out;
    int m = 1;
    while (std::ldexp(1.0, -m) >= nu) ++m;  // smallest m with 2^-m < nu
    int K = 2 * m - 1;

    // marked set: full orbits of all generators of index <= K
    std::vector<SymbolicPoint> marked;
    for (const Word& w : spec.generators_up_to(K))
        for (size_t ph = 0; ph < w.size(); ++ph) {
            SymbolicPoint p = SymbolicPoint::periodic(w).shifted((long long)ph);
            if (subsysdetail::index_of_point(marked, p) == -1) marked.push_back(p);
        }
    if (marked.empty()) throw std::invalid_argument("enclosing_markov_system: no generators");

    // transition matrix under g = sigma^power, epsilon = nu (shift metric)
    Sft s;
    s.space = {SpaceKind::shiftspace};
    for (const auto& p : marked) s.symbols.push_back(Point(p));
    s.epsilon = nu;
    s.nu = nu;
    s.a.assign(marked.size(), std::vector<uint8_t>(marked.size(), 0));
    for (size_t i = 0; i < marked.size(); ++i) {
        SymbolicPoint gi = marked[i].shifted(power);
        for (size_t j = 0; j < marked.size(); ++j)
            s.a[i][j] = shift_distance(gi, marked[j]) < nu ? 1 : 0;
    }
    out.sft = s;

    // violating splice search over marked pairs with d(q1, q2) < nu
    std::optional<size_t> qi, qj;
    for (size_t i = 0; i < marked.size() && !qi; ++i) {
        for (size_t j = 0; j < marked.size(); ++j) {
            if (i == j) continue;
            if (shift_distance(marked[i], marked[j]) >= nu) continue;
            SymbolicPoint z = splice_left_right(marked[j], marked[i]);
            if (!spec.member(z)) {
                qi = i;
                qj = j;
                break;
            }
        }
    }
    if (!qi) {
        out.locally_maximal_certificate = true;
        out.note = "no violating splice among nu-close marked pairs";
        return out;
    }

    const SymbolicPoint& q1 = marked[*qi];
    const SymbolicPoint& q2 = marked[*qj];
    out.q1 = q1;
    out.q2 = q2;
    SymbolicPoint z = splice_left_right(q2, q1);
    out.z = z;
    out.limit = q1;

    int m1 = *q1.period();
    int m1_g = m1 / std::gcd(m1, power);  // period of q1 under g

    // Sigma_A coding of z under g: symbol k is the marked index of g^k(z)'s
    // shadow, i.e. sigma^{power k} of q1 (k >= 0) or q2 (k < 0).
    auto code_of = [&](long long k) {
        const SymbolicPoint& base = (k >= 0) ? q1 : q2;
        int idx = subsysdetail::index_of_point(marked, base.shifted(power * k));
        if (idx < 0) throw std::logic_error("enclosing_markov_system: orbit point not marked");
        return idx;
    };

    for (int n = 1; n <= 6; ++n) {
        long long shift_amt = (long long)power * n * m1_g;
        // Sigma_A window of g^{n m1}(z): both edges reach past the splice
        // seam, so the escapee keeps both gap patterns (stays outside the
        // subsystem) and its first disagreement with the limit orbit tracks
        // the receding seam, making d(p_n, q1) strictly decreasing.
        long long WR = shift_amt + m + 2;
        long long WL = shift_amt + (long long)q2.right.size() + m + 2;
        Word sym_word;
        for (long long k = -WL; k <= WR; ++k) sym_word.push_back(code_of(k + shift_amt));

        auto interior = connecting_interior(s, sym_word.back(), sym_word.front());
        if (!interior) {
            out.note = "no connecting path for escapee closure";
            break;
        }
        Word loop = sym_word;
        loop.insert(loop.end(), interior->begin(), interior->end());
        SymbolicPoint pn_sym = SymbolicPoint::periodic(loop).shifted(WL);  // word starts at -WL

        // beta under g: each Sigma_A symbol contributes its marked point's
        // first `power` ambient symbols.
        Word ambient_loop;
        for (int sym : loop) {
            const SymbolicPoint& q = marked[size_t(sym)];
            for (int r = 0; r < power; ++r) ambient_loop.push_back(q.at(r));
        }
        SymbolicPoint pn = SymbolicPoint::periodic(ambient_loop).shifted(WL * power);

        Escapee e;
        e.point = pn;
        e.n = n;
        SymbolicPoint t = z.shifted(shift_amt);
        e.dist_to_shifted_z = shift_distance(pn, t);
        double best = 1e300;
        for (int ph = 0; ph < m1; ++ph)
            best = std::min(best, shift_distance(pn, q1.shifted(ph)));
        e.dist_to_limit_orbit = best;
        e.member = spec.member(pn);
        out.escapees.push_back(std::move(e));
    }
    return out;
}

} // namespace hyperlab
