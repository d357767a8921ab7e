#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fv/scalar.hpp"

namespace fv {

// Deterministic rational draws p/q with 1 <= p, q <= bound and random sign.
class RationalSampler {
public:
    explicit RationalSampler(std::uint64_t seed, long bound = 19) : rng_(seed), bound_(bound) {}

    Rational draw() {
        std::uniform_int_distribution<long> d(1, bound_);
        const long p = d(rng_);
        const long q = d(rng_);
        const bool negative = std::uniform_int_distribution<int>(0, 1)(rng_) == 1;
        return make_rational(negative ? -p : p, q);
    }

    Rational draw_positive() {
        std::uniform_int_distribution<long> d(1, bound_);
        const long p = d(rng_);
        return make_rational(p, d(rng_));
    }

    // n values with pairwise distinct squares, none equal to +-1 or in `avoid_squares`.
    std::vector<Rational> draw_distinct_squares(std::size_t n, const std::vector<Rational>& avoid_squares = {}) {
        std::vector<Rational> out;
        while (out.size() < n) {
            const Rational x = draw();
            const Rational x2 = x * x;
            bool ok = x2 != 1;
            for (const auto& y : out) ok = ok && (y * y != x2);
            for (const auto& a : avoid_squares) ok = ok && (a != x2);
            if (ok) out.push_back(x);
        }
        return out;
    }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
    long bound_;
};

}  // namespace fv
