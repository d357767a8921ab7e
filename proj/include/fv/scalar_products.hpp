#pragma once

#include <stdexcept>
#include <vector>

#include "fv/determinant.hpp"
#include "fv/series.hpp"
#include "fv/vertex.hpp"

namespace fv {

template <class S>
struct IntermediateSpec {
    int n = 0;
    std::vector<S> u;  // n values
    std::vector<S> v;  // N values
    ModelParameters<S> params;

    int N() const { return static_cast<int>(v.size()); }
    int M() const { return params.M(); }

    void validate() const {
        params.validate();
        if (n < 0 || static_cast<int>(u.size()) != n) throw std::invalid_argument("intermediate spec needs n values of u");
        if (n > N() || N() > M()) throw std::invalid_argument("intermediate spec needs n <= N <= M");
        for (const auto& x : u)
            if (is_zero(x)) throw std::domain_error("spectral parameter u = 0");
        for (const auto& x : v)
            if (is_zero(x)) throw std::domain_error("spectral parameter v = 0");
    }
};

namespace detail {

template <class S>
Series<S> a_series(const Series<S>& v, const ModelParameters<S>& p) {
    Series<S> r(v.order(), S(1));
    for (const auto& w : p.w) r *= v / w;
    return r;
}

template <class S>
Series<S> d_series(const Series<S>& v, const ModelParameters<S>& p) {
    Series<S> r(v.order(), S(1));
    const Series<S> inv = v.reciprocal();
    for (const auto& w : p.w) r *= v * S(p.alpha / w) - inv * w;
    return r;
}

// Q(u, v) with v as a jet; the v = +-u zero of the denominator is cancelled.
template <class S>
Series<S> q_entry(const S& u, const Series<S>& v_in, const ModelParameters<S>& p, int N) {
    const Series<S> v = Series<S>::variable(v_in.order() + 1, v_in.value());
    const S au = a_function(u, p);
    const S du = d_function(u, p);
    const Series<S> num = d_series(v, p) * (v * v).pow(N - 1) * au - a_series(v, p) * S(du * ipow(S(u * u), N - 1));
    const Series<S> den = v / u - Series<S>(v.order(), u) / v;
    return removable_divide(num, den).truncated(v_in.order());
}

template <class S>
void require_distinct_squares(const std::vector<S>& x, const char* what) {
    for (std::size_t j = 0; j < x.size(); ++j)
        for (std::size_t k = j + 1; k < x.size(); ++k)
            if (nearly_equal(S(x[j] * x[j]), S(x[k] * x[k]), kConfluenceTolerance))
                throw std::domain_error(std::string("coincident squared ") + what + " parameters");
}

// lim det[row_j(v_k)] / prod_{j<k}(v_k^2 - v_j^2), confluent in v.
template <class S, class Row>
S confluent_in_v(Row&& row, const std::vector<S>& v) {
    const S ratio = confluent_det_ratio_columns(std::forward<Row>(row), v, v.size());
    S sums(1);
    for (std::size_t j = 0; j < v.size(); ++j)
        for (std::size_t k = j + 1; k < v.size(); ++k) {
            const S s = v[j] + v[k];
            if (is_zero(s)) throw std::domain_error("pole: v_j = -v_k");
            sums *= s;
        }
    return ratio / sums;
}

}  // namespace detail

// <Omega| C(u_1) ... C(u_N) B(v_1) ... B(v_N) |Omega> as a determinant; v may coincide (including with u).
template <class S>
S scalar_product_det(const std::vector<S>& u, const std::vector<S>& v, const ModelParameters<S>& params) {
    params.validate();
    if (u.size() != v.size()) throw std::invalid_argument("scalar product needs equally many u and v");
    const int N = static_cast<int>(u.size());
    for (const auto& x : u)
        if (is_zero(x)) throw std::domain_error("spectral parameter u = 0");
    for (const auto& x : v)
        if (is_zero(x)) throw std::domain_error("spectral parameter v = 0");
    detail::require_distinct_squares(u, "u");
    S pre(1);
    for (int j = 0; j < N; ++j)
        for (int k = j + 1; k < N; ++k) pre *= u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(j)] -
                                               u[static_cast<std::size_t>(k)] * u[static_cast<std::size_t>(k)];
    const S r = detail::confluent_in_v(
        [&](const Series<S>& vs, std::size_t j) { return detail::q_entry(u[j], vs, params, N); }, v);
    return r / pre;
}

template <class S>
S scalar_product_det(const std::vector<S>& u, const std::vector<S>& v, const S& alpha, int M) {
    return scalar_product_det(u, v, ModelParameters<S>::homogeneous(alpha, M));
}

// <0^{M-N+n} 1^{N-n}| C(u_1) ... C(u_n) B(v_1) ... B(v_N) |Omega>.
template <class S>
S intermediate_scalar_det(const IntermediateSpec<S>& spec) {
    spec.validate();
    const int N = spec.N(), M = spec.M(), n = spec.n;
    const auto& p = spec.params;
    const auto& w = p.w;
    detail::require_distinct_squares(spec.u, "u");
    const std::vector<S> tail(w.begin() + (M - N + n), w.end());
    detail::require_distinct_squares(tail, "w");

    S pre(1);
    for (std::size_t j = 0; j < tail.size(); ++j)
        for (std::size_t k = j + 1; k < tail.size(); ++k) pre *= tail[j] * tail[j] - tail[k] * tail[k];
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            const S& a = spec.u[static_cast<std::size_t>(j)];
            const S& b = spec.u[static_cast<std::size_t>(k)];
            pre *= a * a - b * b;
        }
    std::vector<S> pole_factor(static_cast<std::size_t>(n), S(1));
    for (int j = 0; j < n; ++j) {
        const S& uj = spec.u[static_cast<std::size_t>(j)];
        for (const auto& wl : tail) {
            const S f = uj * uj - wl * wl / p.alpha;
            if (is_zero(f)) throw std::domain_error("pole: u_j^2 = w_l^2 / alpha");
            pole_factor[static_cast<std::size_t>(j)] *= f;
        }
    }
    auto row = [&](const Series<S>& vs, std::size_t j) -> Series<S> {
        if (static_cast<int>(j) < n) return detail::q_entry(spec.u[j], vs, p, N) / pole_factor[j];
        const std::size_t skip = static_cast<std::size_t>(M - N) + j;
        Series<S> r = (vs * vs).pow(N - 1);
        const Series<S> inv = vs.reciprocal();
        for (std::size_t l = 0; l < w.size(); ++l)
            if (l != skip) r *= vs * S(p.alpha / w[l]) - inv * w[l];
        return r;
    };
    return detail::confluent_in_v(row, spec.v) / pre;
}

// n = 0 value: alpha^{N(N-1)/2} prod_j prod_{k <= M-N} (alpha v_j/w_k - w_k/v_j) prod v_j^{N-1} / prod_{last N} w^{N-1}.
template <class S>
S frozen_scalar_product(const std::vector<S>& v, const ModelParameters<S>& params) {
    params.validate();
    const int N = static_cast<int>(v.size()), M = params.M();
    if (N > M) throw std::invalid_argument("more particles than sites");
    S r = ipow(params.alpha, N * (N - 1) / 2);
    for (const auto& vj : v) {
        if (is_zero(vj)) throw std::domain_error("spectral parameter v = 0");
        for (int k = 0; k < M - N; ++k) {
            const S& wk = params.w[static_cast<std::size_t>(k)];
            r *= params.alpha * vj / wk - wk / vj;
        }
        r *= ipow(vj, N - 1);
    }
    for (int k = M - N; k < M; ++k) r /= ipow(params.w[static_cast<std::size_t>(k)], N - 1);
    return r;
}

// Exact square root of a rational perfect square; std::sqrt for complex.
inline Rational exact_sqrt(const Rational& x) {
    if (sgn(x) < 0) throw std::domain_error("square root of a negative rational");
    mpz_class n = x.get_num(), d = x.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
        throw std::domain_error("alpha must be a rational square");
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    return Rational(rn, rd);
}

inline Complex exact_sqrt(const Complex& x) { return std::sqrt(x); }

template <class S>
struct RecursionReport {
    S lhs_plus, rhs_plus, lhs_minus, rhs_minus;
    bool holds = false;
};

// S_n at u_n = +-w_{M-N+n}/sqrt(alpha) against
// sqrt(alpha)^{2(N-n)-(M-1)} (+-1)^{M-1} w_{M-N+n}^M / prod w * S_{n-1}.
template <class S>
RecursionReport<S> recursion_check(const IntermediateSpec<S>& spec) {
    spec.validate();
    if (spec.n < 1) throw std::invalid_argument("recursion needs n >= 1");
    const int N = spec.N(), M = spec.M(), n = spec.n;
    const S s = exact_sqrt(spec.params.alpha);
    if (is_zero(s)) throw std::domain_error("recursion needs alpha != 0");
    const S& wn = spec.params.w[static_cast<std::size_t>(M - N + n - 1)];
    S wprod(1);
    for (const auto& x : spec.params.w) wprod *= x;

    IntermediateSpec<S> lower = spec;
    lower.n = n - 1;
    lower.u.pop_back();
    const S lower_value = intermediate_scalar_det(lower);

    RecursionReport<S> rep;
    for (int sign : {1, -1}) {
        IntermediateSpec<S> at = spec;
        at.u.back() = S(sign) * wn / s;
        const S lhs = intermediate_scalar_det(at);
        S rhs = ipow(s, 2 * (N - n) - (M - 1)) * ipow(S(sign), M - 1) * ipow(wn, M) / wprod * lower_value;
        if (sign > 0) {
            rep.lhs_plus = lhs;
            rep.rhs_plus = rhs;
        } else {
            rep.lhs_minus = lhs;
            rep.rhs_minus = rhs;
        }
    }
    rep.holds = nearly_equal(rep.lhs_plus, rep.rhs_plus) && nearly_equal(rep.lhs_minus, rep.rhs_minus);
    return rep;
}

template <class S>
struct NormResult {
    S det_form;
    S sylvester_form;
};

// prod u^{2(M+N-1)} prod_{j != k}(u_j^2 - u_k^2)^{-1} det[-1 + delta_jk d_j],
// d_j = (alpha N + (M-N) u_j^{-2}) / (alpha - u_j^{-2}); the Sylvester form is prod d_j (1 - sum 1/d_j).
template <class S>
NormResult<S> norm_det(const std::vector<S>& u, const S& alpha, int M) {
    const int N = static_cast<int>(u.size());
    if (N > M) throw std::invalid_argument("more particles than sites");
    detail::require_distinct_squares(u, "u");
    std::vector<S> d;
    S pre(1);
    for (const auto& x : u) {
        if (is_zero(x)) throw std::domain_error("spectral parameter u = 0");
        const S inv2 = S(1) / (x * x);
        const S den = alpha - inv2;
        if (is_zero(den)) throw std::domain_error("pole: alpha = u^{-2}");
        d.push_back((alpha * S(N) + inv2 * S(M - N)) / den);
        pre *= ipow(x, 2 * (M + N - 1));
    }
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
            if (j != k) pre /= u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(j)] -
                               u[static_cast<std::size_t>(k)] * u[static_cast<std::size_t>(k)];
    Matrix<S> q(static_cast<std::size_t>(N), static_cast<std::size_t>(N));
    for (std::size_t j = 0; j < q.rows(); ++j)
        for (std::size_t k = 0; k < q.cols(); ++k) q(j, k) = (j == k ? d[j] : S(0)) - S(1);
    S syl(1), recip(0);
    bool zero_d = false;
    for (const auto& x : d) {
        syl *= x;
        if (is_zero(x))
            zero_d = true;
        else
            recip += S(1) / x;
    }
    NormResult<S> out{pre * det(q), S(0)};
    if (zero_d) {
        // prod d (1 - sum 1/d) written without dividing by the vanishing d_j.
        S total = syl;
        for (std::size_t j = 0; j < d.size(); ++j) {
            S others(1);
            for (std::size_t k = 0; k < d.size(); ++k)
                if (k != j) others *= d[k];
            total -= others;
        }
        out.sylvester_form = pre * total;
    } else {
        out.sylvester_form = pre * syl * (S(1) - recip);
    }
    return out;
}

}  // namespace fv
