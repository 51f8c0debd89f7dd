#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ivb {

// Exact rational scalar. Thin value wrapper around GMP's mpq_class that
// keeps results canonical and out of gmpxx expression-template territory.
//
// Conversion from double is exact (every finite double is a dyadic
// rational); conversion to double rounds to nearest.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(int n) : v_(n) {}
    Rat(long n) : v_(n) {}
    Rat(long long n) : v_(static_cast<long>(n)) {}
    Rat(long long num, long long den) : v_(static_cast<long>(num), static_cast<long>(den)) {
        if (den == 0) throw std::invalid_argument("Rat: zero denominator");
        v_.canonicalize();
    }
    explicit Rat(double d) : v_(d) {}
    explicit Rat(const mpq_class& q) : v_(q) {}

    static Rat from_double(double d) { return Rat(d); }

    // Parses "num", "num/den", or a decimal literal such as "0.25".
    static Rat parse(const std::string& s);

    double to_double() const { return v_.get_d(); }
    const mpq_class& raw() const { return v_; }

    // "num/den", or just "num" when the denominator is 1.
    std::string str() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    Rat operator-() const { Rat r; r.v_ = -v_; return r; }

    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.v_ == 0) throw std::domain_error("Rat: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

    int sign() const { return sgn(v_); }

private:
    mpq_class v_;
};

inline Rat Rat::parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rat::parse: empty string");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        // decimal literal: a.b -> (a*10^k + b) / 10^k
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac_len = s.size() - dot - 1;
        mpz_class num(digits, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
        Rat r;
        r.v_ = mpq_class(num, den);
        r.v_.canonicalize();
        return r;
    }
    mpq_class q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("Rat::parse: bad rational '" + s + "'");
    q.canonicalize();
    return Rat(q);
}

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

}  // namespace ivb
