#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "fv/parallel.hpp"
#include "fv/partitions.hpp"
#include "fv/symmetric.hpp"

namespace fv {

namespace detail {

template <class S>
void require_nonzero(const std::vector<S>& x, const char* what) {
    for (const auto& t : x)
        if (is_zero(t)) throw std::domain_error(std::string(what) + " variable = 0");
}

template <class S>
bool has_coincident(const std::vector<S>& x) {
    for (std::size_t j = 0; j < x.size(); ++j)
        for (std::size_t k = j + 1; k < x.size(); ++k)
            if (coincident(x[j], x[k])) return true;
    return false;
}

// [(zy)^M - ((1+beta z)/(1+beta/y))^{N-1}] / (zy - 1) with z a jet; zy = 1 is removable.
template <class S>
Series<S> cauchy_kernel_z(const Series<S>& z_in, const S& y, const S& beta, int M, int N) {
    const S yb = S(1) + beta / y;
    if (is_zero(yb)) throw std::domain_error("pole: 1 + beta/y = 0");
    const Series<S> z = Series<S>::variable(z_in.order() + 1, z_in.value());
    const Series<S> num = (z * y).pow(M) - ((z * beta + S(1)) / yb).pow(N - 1);
    return removable_divide(num, z * y - S(1)).truncated(z_in.order());
}

// Same kernel with y as the jet.
template <class S>
Series<S> cauchy_kernel_y(const S& z, const Series<S>& y_in, const S& beta, int M, int N) {
    const Series<S> y = Series<S>::variable(y_in.order() + 1, y_in.value());
    const Series<S> yb = y + beta;
    if (is_zero(yb.value())) throw std::domain_error("pole: 1 + beta/y = 0");
    const Series<S> num = (y * z).pow(M) - (y * S(S(1) + beta * z) / yb).pow(N - 1);
    return removable_divide(num, y * z - S(1)).truncated(y_in.order());
}

inline void require_box(int M, int N) {
    if (N < 1 || N > M) throw std::invalid_argument("need 1 <= N <= M");
}

}  // namespace detail

// sum over lambda in the (M-N)^N box of G_lambda(z) Gbar_lambda(y).
template <class S>
S cauchy_lhs(int M, int N, const std::vector<S>& z, const std::vector<S>& y, const S& beta,
             Execution ex = Execution::parallel) {
    detail::require_box(M, N);
    if (static_cast<int>(z.size()) != N || static_cast<int>(y.size()) != N)
        throw std::invalid_argument("need N values of z and y");
    detail::require_nonzero(y, "y");
    const auto parts = box_partitions(M - N, N);
    return ordered_sum(parts.size(), ex, S(0), [&](std::size_t i) {
        return S(grothendieck_eval(parts[i], z, beta) * dual_grothendieck_eval(parts[i], y, beta));
    });
}

// det[K(z_j, y_k)] / prod_{j<k}(z_j - z_k)(y_j - y_k), confluent in z or in y (not both).
template <class S>
S cauchy_rhs(int M, int N, const std::vector<S>& z, const std::vector<S>& y, const S& beta) {
    detail::require_box(M, N);
    if (static_cast<int>(z.size()) != N || static_cast<int>(y.size()) != N)
        throw std::invalid_argument("need N values of z and y");
    detail::require_nonzero(z, "z");
    detail::require_nonzero(y, "y");
    const bool zc = detail::has_coincident(z), yc = detail::has_coincident(y);
    if (zc && yc) throw std::domain_error("coincident values in both z and y");
    const long sign = detail::vandermonde_sign(z.size());
    if (!yc) {
        S vy(1);
        for (int j = 0; j < N; ++j)
            for (int k = j + 1; k < N; ++k) vy *= y[j] - y[k];
        const S r = confluent_det_ratio_columns(
            [&](const Series<S>& zs, std::size_t k) { return detail::cauchy_kernel_z(zs, y[k], beta, M, N); }, z,
            z.size());
        return sign < 0 ? S(-r / vy) : S(r / vy);
    }
    S vz(1);
    for (int j = 0; j < N; ++j)
        for (int k = j + 1; k < N; ++k) vz *= z[j] - z[k];
    const S r = confluent_det_ratio_columns(
        [&](const Series<S>& ys, std::size_t k) { return detail::cauchy_kernel_y(z[k], ys, beta, M, N); }, y,
        y.size());
    return sign < 0 ? S(-r / vz) : S(r / vz);
}

template <class S>
struct CauchyLimitReport {
    S product;
    std::vector<S> partial_sums;   // index m-1 holds the sum over the m^N box
    std::vector<double> distances;  // |partial sum - product|
    bool monotone = true;
    bool converged = false;
};

// Partial sums over growing boxes against prod((1+beta z)/(1+beta/y))^{N-1} prod 1/(1 - z_j y_k).
template <class S>
CauchyLimitReport<S> cauchy_infinite_check(int N, const std::vector<S>& z, const std::vector<S>& y, const S& beta,
                                           int m_max, double tolerance = 1e-10,
                                           Execution ex = Execution::parallel) {
    if (N < 1 || static_cast<int>(z.size()) != N || static_cast<int>(y.size()) != N)
        throw std::invalid_argument("need N >= 1 values of z and y");
    if (m_max < 1) throw std::invalid_argument("need m_max >= 1");
    detail::require_nonzero(y, "y");
    CauchyLimitReport<S> rep;
    rep.product = S(1);
    for (int j = 0; j < N; ++j) {
        const S yb = S(1) + beta / y[j];
        if (is_zero(yb)) throw std::domain_error("pole: 1 + beta/y = 0");
        rep.product *= ipow(S((S(1) + beta * z[j]) / yb), N - 1);
        for (int k = 0; k < N; ++k) {
            if (magnitude(S(z[j] * y[k])) >= 1.0) throw std::domain_error("divergent inputs: |z_j y_k| >= 1");
            rep.product /= S(1) - z[j] * y[k];
        }
    }
    S acc(0);
    for (int m = 0; m <= m_max; ++m) {
        // Only diagrams with first row exactly m are new at box size m.
        std::vector<Partition> fresh;
        for (const auto& p : enumerate_box(m, N))
            if (p[0] == m) fresh.push_back(p);
        acc += ordered_sum(fresh.size(), ex, S(0), [&](std::size_t i) {
            return S(grothendieck_eval(fresh[i], z, beta) * dual_grothendieck_eval(fresh[i], y, beta));
        });
        if (m == 0) continue;
        rep.partial_sums.push_back(acc);
        const double d = magnitude(S(acc - rep.product));
        if (!rep.distances.empty() && d > rep.distances.back() * (1 + 1e-12) + 1e-15) rep.monotone = false;
        rep.distances.push_back(d);
    }
    rep.converged = rep.distances.back() <= tolerance;
    return rep;
}

template <class S>
struct SumCheck {
    S lhs;
    S rhs;
    bool equal = false;
};

// sum over the (M-N)^N box of (-beta)^{|lambda|} G_lambda(z).
template <class S>
S grothendieck_sum_lhs(int M, const std::vector<S>& z, const S& beta, Execution ex = Execution::parallel) {
    const int N = static_cast<int>(z.size());
    detail::require_box(M, N);
    const auto parts = box_partitions(M - N, N);
    return ordered_sum(parts.size(), ex, S(0), [&](std::size_t i) {
        return S(ipow(S(-beta), parts[i].weight()) * grothendieck_eval(parts[i], z, beta));
    });
}

template <class S>
S grothendieck_sum_rhs(int M, const std::vector<S>& z, const S& beta) {
    const int N = static_cast<int>(z.size());
    detail::require_box(M, N);
    detail::require_nonzero(z, "z");
    if (N >= 2 && is_zero(beta)) throw std::domain_error("summation determinant needs beta != 0 for N >= 2");
    const S mb = -beta;
    return confluent_det_ratio_columns(
        [&](const Series<S>& x, std::size_t jj) {
            const int j = static_cast<int>(jj) + 1;
            const Series<S> f = x * beta + S(1);
            Series<S> acc(x.order());
            if (j <= N - 1) {
                for (int m = 0; m <= j - 1; ++m)
                    acc += f.pow(m - j + N - 1) * S(ipow(S(-1), m) * ipow(mb, j - N) * S(static_cast<long>(binomial(M, m))));
            } else {
                for (int m = std::max(N - 1, 1); m <= M; ++m)
                    acc -= f.pow(m - 1) * S(ipow(S(-1), m) * S(static_cast<long>(binomial(M, m))));
            }
            return acc;
        },
        z, z.size());
}

// sum over the (M-N)^N box of (-beta)^{-|lambda|} Gbar_lambda(y); beta != 0.
template <class S>
S dual_grothendieck_sum_lhs(int M, const std::vector<S>& y, const S& beta, Execution ex = Execution::parallel) {
    const int N = static_cast<int>(y.size());
    detail::require_box(M, N);
    if (is_zero(beta)) throw std::domain_error("dual summation needs beta != 0");
    const auto parts = box_partitions(M - N, N);
    return ordered_sum(parts.size(), ex, S(0), [&](std::size_t i) {
        return S(ipow(S(-beta), -parts[i].weight()) * dual_grothendieck_eval(parts[i], y, beta));
    });
}

template <class S>
S dual_grothendieck_sum_rhs(int M, const std::vector<S>& y, const S& beta) {
    const int N = static_cast<int>(y.size());
    detail::require_box(M, N);
    detail::require_nonzero(y, "y");
    if (is_zero(beta)) throw std::domain_error("dual summation needs beta != 0");
    const S mb = -beta;
    S pre(1);
    for (const auto& t : y) pre *= ipow(t, M - 1);
    const S r = confluent_det_ratio_columns(
        [&](const Series<S>& x, std::size_t jj) {
            const int j = static_cast<int>(jj) + 1;
            const Series<S> f = S(1) + beta / x;
            if (is_zero(f.value())) throw std::domain_error("pole: 1 + beta/y = 0");
            Series<S> acc(x.order());
            if (j >= 2) {
                for (int m = 0; m <= N - j; ++m)
                    acc += f.pow(m + j - N - 1) *
                           S(ipow(S(-1), m) * ipow(mb, -j + 1 - M + N) * S(static_cast<long>(binomial(M, m))));
            } else {
                for (int m = std::max(N - 1, 1); m <= M; ++m)
                    acc -= f.pow(m - N) * S(ipow(S(-1), m) * ipow(mb, -M + N) * S(static_cast<long>(binomial(M, m))));
            }
            return acc;
        },
        y, y.size());
    return pre * r;
}

template <class S>
SumCheck<S> grothendieck_sum_check(int M, const std::vector<S>& z, const S& beta, double tol = kDefaultTolerance) {
    SumCheck<S> c{grothendieck_sum_lhs(M, z, beta), grothendieck_sum_rhs(M, z, beta), false};
    c.equal = nearly_equal(c.lhs, c.rhs, tol);
    return c;
}

template <class S>
SumCheck<S> dual_grothendieck_sum_check(int M, const std::vector<S>& y, const S& beta,
                                        double tol = kDefaultTolerance) {
    SumCheck<S> c{dual_grothendieck_sum_lhs(M, y, beta), dual_grothendieck_sum_rhs(M, y, beta), false};
    c.equal = nearly_equal(c.lhs, c.rhs, tol);
    return c;
}

// Weight attached to a Bethe root set in the orthogonality sum.
Complex orthogonality_weight(const std::vector<Complex>& z, double beta, int M);

struct OrthogonalityResult {
    Complex value;
    std::size_t solutions = 0;
    double max_residual = 0;
};

// sum over Bethe root sets of w(z) Gbar_lambda(1/z) G_mu(z); throws if the root enumeration is incomplete.
OrthogonalityResult orthogonality_check(int M, int N, double beta, const Partition& lambda, const Partition& mu,
                                        Execution ex = Execution::parallel);

struct BetheReport;
OrthogonalityResult orthogonality_check(const BetheReport& roots, const Partition& lambda, const Partition& mu,
                                        Execution ex = Execution::parallel);

}  // namespace fv
