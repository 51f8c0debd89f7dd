#pragma once

#include <cmath>
#include <string>

#include "ivb/rational.hpp"

namespace ivb {

// The numeric policy shared by every module. All probability math is
// templated on a scalar S that is either `double` (tolerance-based) or
// `Rat` (exact; all tolerances collapse to zero).
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double sum_tol() { return 1e-9; }    // slice normalization
    static double feas_tol() { return 1e-9; }   // inequality slack
    static double round_tol() { return 1e-12; } // witness round trips
    static double from_double(double d) { return d; }
    static double to_double(double d) { return d; }
    static std::string str(double d) { return std::to_string(d); }
};

template <>
struct scalar_traits<Rat> {
    static constexpr bool exact = true;
    static Rat sum_tol() { return Rat(0); }
    static Rat feas_tol() { return Rat(0); }
    static Rat round_tol() { return Rat(0); }
    static Rat from_double(double d) { return Rat(d); }
    static double to_double(const Rat& r) { return r.to_double(); }
    static std::string str(const Rat& r) { return r.str(); }
};

inline double abs_val(double x) { return std::fabs(x); }
inline Rat abs_val(const Rat& r) { return abs(r); }

template <class S>
const S& min_val(const S& a, const S& b) { return b < a ? b : a; }
template <class S>
const S& max_val(const S& a, const S& b) { return a < b ? b : a; }

}  // namespace ivb
