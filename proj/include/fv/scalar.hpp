#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fv {

using Rational = mpq_class;
using Complex = std::complex<double>;

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr double kConfluenceTolerance = 1e-12;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static double magnitude(const Rational& x) { return std::fabs(x.get_d()); }
};

template <>
struct scalar_traits<Complex> {
    static constexpr bool exact = false;
    static bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
    static double magnitude(const Complex& x) { return std::abs(x); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static bool is_zero(double x) { return x == 0.0; }
    static double magnitude(double x) { return std::fabs(x); }
};

template <class S>
inline constexpr bool is_exact_v = scalar_traits<S>::exact;

template <class S>
bool is_zero(const S& x) {
    return scalar_traits<S>::is_zero(x);
}

template <class S>
double magnitude(const S& x) {
    return scalar_traits<S>::magnitude(x);
}

// Exact equality for rationals; |a-b| <= tol * max(1, |a|, |b|) otherwise.
template <class S>
bool nearly_equal(const S& a, const S& b, double tol = kDefaultTolerance) {
    if constexpr (is_exact_v<S>) {
        (void)tol;
        return a == b;
    } else {
        const double scale = std::max({1.0, magnitude(a), magnitude(b)});
        return magnitude(S(a - b)) <= tol * scale;
    }
}

// Coincidence test used when grouping points for confluent limits.
template <class S>
bool coincident(const S& a, const S& b) {
    if constexpr (is_exact_v<S>) {
        return a == b;
    } else {
        return magnitude(S(a - b)) <= kConfluenceTolerance * std::max(1.0, magnitude(a));
    }
}

template <class S>
S ipow(const S& x, long n) {
    if (n < 0) {
        if (is_zero(x)) throw std::domain_error("negative power of zero");
        const S inv = S(1) / x;
        return ipow(inv, -n);
    }
    S result(1);
    S base(x);
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n > 0) base *= base;
    }
    return result;
}

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::domain_error("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "p", "p/q" and finite decimals such as "-0.25".
Rational parse_rational(std::string_view text);
Complex parse_complex(std::string_view text);

std::string to_string(const Rational& q);
std::string to_string(const Complex& z);

inline Complex to_complex(const Rational& q) { return Complex(q.get_d(), 0.0); }
inline Complex to_complex(const Complex& z) { return z; }

}  // namespace fv
