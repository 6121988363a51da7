#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hyperlab {

// Exact rational arithmetic on __int128. Headroom is sized for the 5-adic
// geometric series of the horseshoe coding: denominators divide
// 5^k * (5^p - 1) * (5^q - 1), which stays far below 2^127 for the window
// and tail sizes the catalog uses.
class Rat {
public:
    using Int = __int128;

    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}
    Rat(Int n, Int d) : num_(n), den_(d) {
        if (den_ == 0) throw std::invalid_argument("Rat: zero denominator");
        normalize();
    }

    static Rat from_fraction(long long n, long long d) { return Rat(Int(n), Int(d)); }

    Int num() const { return num_; }
    Int den() const { return den_; }

    Rat operator-() const { return Rat(-num_, den_); }

    Rat operator+(const Rat& o) const { return Rat(num_ * o.den_ + o.num_ * den_, den_ * o.den_); }
    Rat operator-(const Rat& o) const { return Rat(num_ * o.den_ - o.num_ * den_, den_ * o.den_); }
    Rat operator*(const Rat& o) const { return Rat(num_ * o.num_, den_ * o.den_); }
    Rat operator/(const Rat& o) const {
        if (o.num_ == 0) throw std::domain_error("Rat: division by zero");
        return Rat(num_ * o.den_, den_ * o.num_);
    }

    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rat& o) const { return !(*this == o); }
    bool operator<(const Rat& o) const { return num_ * o.den_ < o.num_ * den_; }
    bool operator<=(const Rat& o) const { return num_ * o.den_ <= o.num_ * den_; }
    bool operator>(const Rat& o) const { return o < *this; }
    bool operator>=(const Rat& o) const { return o <= *this; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    double value() const { return double(num_) / double(den_); }

    std::string str() const {
        std::string s = int128_str(num_);
        if (den_ != 1) s += "/" + int128_str(den_);
        return s;
    }

    static std::string int128_str(Int v) {
        if (v == 0) return "0";
        bool neg = v < 0;
        unsigned __int128 u = neg ? (unsigned __int128)(-(v + 1)) + 1 : (unsigned __int128)v;
        std::string digits;
        while (u > 0) {
            digits.push_back(char('0' + int(u % 10)));
            u /= 10;
        }
        if (neg) digits.push_back('-');
        return std::string(digits.rbegin(), digits.rend());
    }

private:
    static Int gcd(Int a, Int b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            Int t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        Int g = gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    Int num_;
    Int den_;
};

// 5^k as a rational power helper (k >= 0).
inline Rat pow5(int k) {
    Rat::Int v = 1;
    for (int i = 0; i < k; ++i) v *= 5;
    return Rat(v, 1);
}

} // namespace hyperlab
