#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperlab {

using Word = std::vector<int>;

inline std::string word_str(const Word& w) {
    bool digits = true;
    for (int s : w) digits = digits && s >= 0 && s <= 9;
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (digits) {
            out.push_back(char('0' + w[i]));
        } else {
            if (i) out.push_back(',');
            out += std::to_string(w[i]);
        }
    }
    return out;
}

inline Word parse_word(const std::string& s) {
    Word w;
    if (s.find(',') != std::string::npos) {
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) w.push_back(std::stoi(item));
    } else {
        for (char c : s) {
            if (c < '0' || c > '9') throw std::invalid_argument("parse_word: bad symbol");
            w.push_back(c - '0');
        }
    }
    return w;
}

// Shortest word u with w = u^k.
inline Word primitive_root(const Word& w) {
    size_t n = w.size();
    for (size_t p = 1; p <= n; ++p) {
        if (n % p != 0) continue;
        bool ok = true;
        for (size_t i = p; i < n && ok; ++i) ok = w[i] == w[i % p];
        if (ok) return Word(w.begin(), w.begin() + p);
    }
    return w;
}

// A bi-infinite, eventually periodic symbol sequence:
//   ... left left | core | right right ...
// `core` occupies indices [core_start, core_start + core.size()); `right`
// repeats from the core's end onward and `left` repeats backwards below
// core_start. Shift and inverse shift are exact on this representation,
// which is what makes every splice/concatenation construction testable
// without approximation.
struct SymbolicPoint {
    Word left;
    Word core;
    Word right;
    long long core_start = 0;

    SymbolicPoint() : left{0}, right{0} {}
    SymbolicPoint(Word l, Word c, Word r, long long start)
        : left(std::move(l)), core(std::move(c)), right(std::move(r)), core_start(start) {
        if (left.empty() || right.empty())
            throw std::invalid_argument("SymbolicPoint: periodic tails must be non-empty");
    }

    // sigma^phase of the periodic point w^infinity (w[0] at index -phase).
    static SymbolicPoint periodic(const Word& w, long long phase = 0) {
        if (w.empty()) throw std::invalid_argument("SymbolicPoint::periodic: empty word");
        SymbolicPoint p(w, {}, w, 0);
        return p.shifted(phase);
    }

    long long core_end() const { return core_start + (long long)core.size(); }

    int at(long long i) const {
        if (i >= core_start && i < core_end()) return core[size_t(i - core_start)];
        if (i >= core_end()) {
            long long k = (i - core_end()) % (long long)right.size();
            return right[size_t(k)];
        }
        long long k = (core_start - 1 - i) % (long long)left.size();
        return left[left.size() - 1 - size_t(k)];
    }

    // Left shift sigma^n: (sigma^n s)_i = s_{i+n}.
    SymbolicPoint shifted(long long n) const {
        SymbolicPoint p = *this;
        p.core_start -= n;
        return p;
    }

    // Minimal period if the point is globally periodic. The periodic
    // extension of the right tail is unique, so one comparison suffices.
    std::optional<int> period() const {
        Word r = primitive_root(right);
        SymbolicPoint q(r, {}, r, core_end());
        if (*this == q) return (int)r.size();
        return std::nullopt;
    }

    friend bool operator==(const SymbolicPoint& a, const SymbolicPoint& b) {
        long long pad = compare_pad(a, b);
        long long lo = std::min(a.core_start, b.core_start) - pad;
        long long hi = std::max(a.core_end(), b.core_end()) + pad;
        for (long long i = lo; i <= hi; ++i)
            if (a.at(i) != b.at(i)) return false;
        return true;
    }
    friend bool operator!=(const SymbolicPoint& a, const SymbolicPoint& b) { return !(a == b); }

    std::string str() const {
        std::ostringstream os;
        os << word_str(left) << "|" << word_str(core) << "|" << word_str(right)
           << "@" << core_start;
        return os.str();
    }

    static SymbolicPoint parse(const std::string& s) {
        auto p1 = s.find('|');
        auto p2 = s.find('|', p1 + 1);
        auto pa = s.find('@', p2 + 1);
        if (p1 == std::string::npos || p2 == std::string::npos || pa == std::string::npos)
            throw std::invalid_argument("SymbolicPoint::parse: bad format");
        return SymbolicPoint(parse_word(s.substr(0, p1)),
                             parse_word(s.substr(p1 + 1, p2 - p1 - 1)),
                             parse_word(s.substr(p2 + 1, pa - p2 - 1)),
                             std::stoll(s.substr(pa + 1)));
    }

    // Window half-width beyond which two eventually periodic points are
    // pure tails; agreement over one lcm block there forces global agreement.
    static long long compare_pad(const SymbolicPoint& a, const SymbolicPoint& b) {
        long long l = std::lcm((long long)a.left.size(), (long long)b.left.size());
        long long r = std::lcm((long long)a.right.size(), (long long)b.right.size());
        return std::max(l, r) + 1;
    }
};

// Index of the first difference, minimizing |i|; nullopt when equal.
inline std::optional<long long> first_difference(const SymbolicPoint& a, const SymbolicPoint& b) {
    long long pad = SymbolicPoint::compare_pad(a, b);
    long long lo = std::min(a.core_start, b.core_start) - pad;
    long long hi = std::max(a.core_end(), b.core_end()) + pad;
    long long bound = std::max(std::llabs(lo), std::llabs(hi));
    for (long long k = 0; k <= bound; ++k) {
        if (a.at(k) != b.at(k)) return k;
        if (k > 0 && a.at(-k) != b.at(-k)) return k;
    }
    return std::nullopt;
}

// d(s,t) = 2^(-min{|i| : s_i != t_i}), 0 when equal.
inline double shift_distance(const SymbolicPoint& a, const SymbolicPoint& b) {
    auto k = first_difference(a, b);
    if (!k) return 0.0;
    if (*k > 1000) return 0.0;
    return std::ldexp(1.0, -int(*k));
}

} // namespace hyperlab
