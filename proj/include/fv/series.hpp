#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fv/scalar.hpp"

namespace fv {

// Truncated Taylor series c0 + c1 h + ... + c_{K-1} h^{K-1}.
template <class S>
class Series {
public:
    Series() : c_(1, S(0)) {}
    explicit Series(std::size_t order, const S& constant = S(0)) : c_(std::max<std::size_t>(order, 1), S(0)) {
        c_[0] = constant;
    }

    static Series variable(std::size_t order, const S& x0) {
        Series s(order, x0);
        if (s.order() > 1) s.c_[1] = S(1);
        return s;
    }

    std::size_t order() const { return c_.size(); }
    const S& operator[](std::size_t i) const { return c_[i]; }
    S& operator[](std::size_t i) { return c_[i]; }
    const S& value() const { return c_[0]; }

    Series& operator+=(const Series& o) {
        truncate(o.order());
        for (std::size_t i = 0; i < order(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    Series& operator-=(const Series& o) {
        truncate(o.order());
        for (std::size_t i = 0; i < order(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Series& operator*=(const Series& o) {
        const std::size_t k = std::min(order(), o.order());
        std::vector<S> out(k, S(0));
        for (std::size_t i = 0; i < k; ++i) {
            if (is_zero(c_[i])) continue;
            for (std::size_t j = 0; i + j < k; ++j) out[i + j] += c_[i] * o.c_[j];
        }
        c_ = std::move(out);
        return *this;
    }
    Series& operator/=(const Series& o) { return *this *= o.reciprocal(); }

    Series& operator+=(const S& x) {
        c_[0] += x;
        return *this;
    }
    Series& operator-=(const S& x) {
        c_[0] -= x;
        return *this;
    }
    Series& operator*=(const S& x) {
        for (auto& c : c_) c *= x;
        return *this;
    }
    Series& operator/=(const S& x) {
        if (is_zero(x)) throw std::domain_error("series division by zero");
        for (auto& c : c_) c /= x;
        return *this;
    }

    Series operator-() const {
        Series r(*this);
        for (auto& c : r.c_) c = -c;
        return r;
    }

    Series reciprocal() const {
        if (is_zero(c_[0])) throw std::domain_error("series reciprocal of non-invertible jet");
        Series r(order());
        const S inv = S(1) / c_[0];
        r.c_[0] = inv;
        for (std::size_t n = 1; n < order(); ++n) {
            S acc(0);
            for (std::size_t k = 1; k <= n; ++k) acc += c_[k] * r.c_[n - k];
            r.c_[n] = -acc * inv;
        }
        return r;
    }

    Series pow(long n) const {
        if (n < 0) return reciprocal().pow(-n);
        Series result(order(), S(1));
        Series base(*this);
        while (n > 0) {
            if (n & 1) result *= base;
            n >>= 1;
            if (n > 0) base *= base;
        }
        return result;
    }

    // Index of the first coefficient that is not negligible; order() if none.
    std::size_t valuation(double rel_tol = kConfluenceTolerance) const {
        if constexpr (is_exact_v<S>) {
            (void)rel_tol;
            for (std::size_t i = 0; i < order(); ++i)
                if (!is_zero(c_[i])) return i;
        } else {
            double scale = 1.0;
            for (const auto& c : c_) scale = std::max(scale, magnitude(c));
            for (std::size_t i = 0; i < order(); ++i)
                if (magnitude(c_[i]) > rel_tol * scale) return i;
        }
        return order();
    }

    // Divides by h^k, losing k orders.
    Series shift_down(std::size_t k) const {
        if (k >= order()) throw std::domain_error("series shift exceeds truncation order");
        Series r(order() - k);
        for (std::size_t i = k; i < order(); ++i) r.c_[i - k] = c_[i];
        return r;
    }

    S evaluate(const S& h) const {
        S acc(0);
        for (std::size_t i = order(); i-- > 0;) acc = acc * h + c_[i];
        return acc;
    }

    Series truncated(std::size_t k) const {
        Series r(*this);
        r.truncate(k);
        return r;
    }

private:
    void truncate(std::size_t k) {
        if (k < c_.size()) c_.resize(std::max<std::size_t>(k, 1));
    }

    std::vector<S> c_;
};

template <class S>
Series<S> operator+(Series<S> a, const Series<S>& b) { return a += b; }
template <class S>
Series<S> operator-(Series<S> a, const Series<S>& b) { return a -= b; }
template <class S>
Series<S> operator*(Series<S> a, const Series<S>& b) { return a *= b; }
template <class S>
Series<S> operator/(Series<S> a, const Series<S>& b) { return a /= b; }
template <class S>
Series<S> operator+(Series<S> a, const S& b) { return a += b; }
template <class S>
Series<S> operator+(const S& b, Series<S> a) { return a += b; }
template <class S>
Series<S> operator-(Series<S> a, const S& b) { return a -= b; }
template <class S>
Series<S> operator-(const S& b, const Series<S>& a) { return (-a) += b; }
template <class S>
Series<S> operator*(Series<S> a, const S& b) { return a *= b; }
template <class S>
Series<S> operator*(const S& b, Series<S> a) { return a *= b; }
template <class S>
Series<S> operator/(Series<S> a, const S& b) { return a /= b; }
template <class S>
Series<S> operator/(const S& b, const Series<S>& a) { return a.reciprocal() *= b; }

// Quotient with common zeros of numerator and denominator cancelled.
template <class S>
Series<S> removable_divide(const Series<S>& num, const Series<S>& den) {
    const std::size_t v = den.valuation();
    if (v >= den.order()) throw std::domain_error("removable quotient: denominator vanishes to truncation order");
    if (v == 0) return num / den;
    if constexpr (is_exact_v<S>) {
        if (num.valuation() < v) throw std::domain_error("pole: numerator does not vanish with denominator");
    } else {
        if (num.valuation(1e-8) < v) throw std::domain_error("pole: numerator does not vanish with denominator");
    }
    return num.shift_down(v) / den.shift_down(v);
}

}  // namespace fv
