#pragma once

#include <stdexcept>
#include <vector>

#include "fv/determinant.hpp"
#include "fv/partitions.hpp"
#include "fv/scalar_products.hpp"
#include "fv/series.hpp"

namespace fv {

namespace detail {

template <class S>
void check_wave_inputs(const ParticleConfiguration& x, const std::vector<S>& p, const S& alpha) {
    if (static_cast<int>(p.size()) != x.particles())
        throw std::invalid_argument("need one spectral parameter per particle");
    for (const auto& t : p) {
        if (is_zero(t)) throw std::domain_error("spectral parameter = 0");
        if (is_zero(S(alpha * t * t - S(1)))) throw std::domain_error("pole: alpha u^2 = 1");
    }
}

inline long half_vandermonde_sign(std::size_t n) { return ((n * (n - 1) / 2) % 2) ? -1 : 1; }

}  // namespace detail

// <x| B(v_1) ... B(v_N) |Omega>
//   = prod v^{M-1} (alpha v^2 - 1)^{-1} det[v_j^{2k} (alpha - v_j^{-2})^{x_k}] / prod_{j<k}(v_k^2 - v_j^2).
template <class S>
S wavefunction_det(const ParticleConfiguration& x, const std::vector<S>& v, const S& alpha) {
    detail::check_wave_inputs(x, v, alpha);
    const int M = x.ring_size();
    S pre(1);
    for (const auto& t : v) pre *= ipow(t, M - 1) / (alpha * t * t - S(1));
    const auto& pos = x.positions();
    const S r = detail::confluent_in_v(
        [&](const Series<S>& t, std::size_t k) {
            const Series<S> t2 = t * t;
            return t2.pow(static_cast<long>(k) + 1) * (alpha - t2.reciprocal()).pow(pos[k]);
        },
        v);
    return pre * r;
}

// <Omega| C(u_1) ... C(u_N) |x>
//   = prod (alpha u - 1/u)^M u^{2N-1} det[u_j^{-2k} (alpha - u_j^{-2})^{-x_k}] / prod_{j<k}(u_j^2 - u_k^2).
template <class S>
S dual_wavefunction_det(const ParticleConfiguration& x, const std::vector<S>& u, const S& alpha) {
    detail::check_wave_inputs(x, u, alpha);
    const int M = x.ring_size();
    const int N = x.particles();
    S pre(1);
    for (const auto& t : u) pre *= ipow(S(alpha * t - S(1) / t), M) * ipow(t, 2 * N - 1);
    const auto& pos = x.positions();
    const S r = detail::confluent_in_v(
        [&](const Series<S>& t, std::size_t k) {
            const Series<S> inv2 = (t * t).reciprocal();
            return inv2.pow(static_cast<long>(k) + 1) * (alpha - inv2).pow(-pos[k]);
        },
        u);
    return detail::half_vandermonde_sign(u.size()) < 0 ? S(-pre * r) : S(pre * r);
}

// Column-direction monodromy over n rows and its diagonalizing frame.
// W_j is bit j-1 of the auxiliary index, so the newest row is the most significant bit.
template <class S>
class MatrixProductState {
public:
    static constexpr int kMaxRows = 6;

    MatrixProductState(const std::vector<S>& u, const S& alpha) : u_(u), alpha_(alpha) {
        if (u.size() > static_cast<std::size_t>(kMaxRows)) throw std::invalid_argument("matrix product state limited to 6 rows");
        A_ = Matrix<S>::identity(1);
        B_ = Matrix<S>(1, 1);
        C_ = Matrix<S>(1, 1);
        D_ = Matrix<S>::identity(1);
        G_ = Matrix<S>::identity(1);
        Ginv_ = Matrix<S>::identity(1);
        Ahat_ = Matrix<S>::identity(1);
        for (const auto& t : u) attach(t);
        split_c();
    }

    int n() const { return static_cast<int>(u_.size()); }
    const Matrix<S>& A() const { return A_; }
    const Matrix<S>& B() const { return B_; }
    const Matrix<S>& C() const { return C_; }
    const Matrix<S>& D() const { return D_; }

    const Matrix<S>& G() const { return G_; }
    const Matrix<S>& G_inverse() const { return Ginv_; }
    const Matrix<S>& A_diagonal() const { return Ahat_; }
    // Split parts in the diagonal frame, j = 1..n stored at j-1.
    const std::vector<Matrix<S>>& B_parts() const { return Bparts_; }
    const std::vector<Matrix<S>>& C_parts() const { return Cparts_; }

    Matrix<S> to_original(const Matrix<S>& frame_op) const { return G_ * frame_op * Ginv_; }

    // Tr[A^{M-x_N} B ... B A^{x_1-1} P], P = |0^n><1^n|.
    S dual_wavefunction(const ParticleConfiguration& x) const { return trace_product(x, B_, 0, dim() - 1); }

    // Tr[A^{M-x_N} C ... C A^{x_1-1} Q], Q = |1^n><0^n|.
    S wavefunction(const ParticleConfiguration& x) const { return trace_product(x, C_, dim() - 1, 0); }

    // prod (alpha u_j^2 - 1)^{M-N+j} u_j^{-2(M-N)} Tr[B^(N) ... B^(1) A^{M-N} P].
    S prefactor_K(int M) const {
        const int N = n();
        if (M < N) throw std::invalid_argument("more rows than sites");
        Matrix<S> prod = matrix_power(Ahat_, static_cast<unsigned>(M - N));
        for (int j = 1; j <= N; ++j) prod = Bparts_[static_cast<std::size_t>(j - 1)] * prod;
        prod = to_original(prod);
        S k = prod(dim() - 1, 0);
        for (int j = 1; j <= N; ++j) {
            const S& t = u_[static_cast<std::size_t>(j - 1)];
            k *= ipow(S(alpha_ * t * t - S(1)), M - N + j) * ipow(t, -2 * (M - N));
        }
        return k;
    }

private:
    std::size_t dim() const { return A_.rows(); }

    static Matrix<S> blocks(const Matrix<S>& a, const Matrix<S>& b, const Matrix<S>& c, const Matrix<S>& d) {
        const std::size_t m = a.rows();
        Matrix<S> out(2 * m, 2 * m);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t s = 0; s < m; ++s) {
                out(r, s) = a(r, s);
                out(r, s + m) = b(r, s);
                out(r + m, s) = c(r, s);
                out(r + m, s + m) = d(r, s);
            }
        return out;
    }

    void attach(const S& t) {
        if (is_zero(t)) throw std::domain_error("spectral parameter = 0");
        const S d = alpha_ * t - S(1) / t;
        const std::size_t m = dim();
        const Matrix<S> Z(m, m);
        // X_{n+1}^{(i'i)} = sum_k l^{(ki)}(t) (x) X_n^{(i'k)}.
        const Matrix<S> A = blocks(A_ * t, B_, Z, A_ * d);
        const Matrix<S> B = blocks(Z, Z, A_, B_ * S(alpha_ * t));
        const Matrix<S> C = blocks(C_ * t, D_, Z, C_ * d);
        const Matrix<S> D = blocks(Z, Z, C_, D_ * S(alpha_ * t));

        // Frame: H = Ahat^{-1} sum_j d_j / (t/u_j - u_j/t) B^(j).
        if (is_zero(d)) throw std::domain_error("pole: alpha u^2 = 1");
        Matrix<S> H(m, m);
        Matrix<S> Ahat_inv(m, m);
        for (std::size_t i = 0; i < m; ++i) Ahat_inv(i, i) = S(1) / Ahat_(i, i);
        const std::size_t n = Bparts_.size();
        for (std::size_t j = 0; j < n; ++j) {
            const S& uj = u_[j];
            const S den = t / uj - uj / t;
            if (is_zero(den)) throw std::domain_error("coincident squared spectral parameters");
            H += Bparts_[j] * S((alpha_ * uj - S(1) / uj) / den);
        }
        H = Ahat_inv * H;
        const Matrix<S> GH = G_ * H;
        const Matrix<S> G = blocks(G_, GH, Z, G_);
        const Matrix<S> negHGinv = H * Ginv_ * S(-1);
        const Matrix<S> Ginv = blocks(Ginv_, negHGinv, Z, Ginv_);
        const Matrix<S> Ahat = blocks(Ahat_ * t, Z, Z, Ahat_ * d);

        std::vector<Matrix<S>> parts;
        const S one_minus = S(1) - alpha_ * t * t;
        for (std::size_t j = 0; j < n; ++j) {
            const S& uj = u_[j];
            const S scale = S(1) / (uj / t - t / uj);
            parts.push_back(blocks(Bparts_[j] * S(scale * uj), Z, Z, Bparts_[j] * S(scale * one_minus / uj)));
        }
        parts.push_back(blocks(Z, Z, Ahat_, Z));

        A_ = A;
        B_ = B;
        C_ = C;
        D_ = D;
        G_ = G;
        Ginv_ = Ginv;
        Ahat_ = Ahat;
        Bparts_ = std::move(parts);
    }

    // C^(j) keeps the entries of G^{-1} C G that clear bit j-1.
    void split_c() {
        const Matrix<S> Cf = Ginv_ * C_ * G_;
        Cparts_.assign(u_.size(), Matrix<S>(dim(), dim()));
        for (std::size_t r = 0; r < dim(); ++r)
            for (std::size_t c = 0; c < dim(); ++c) {
                if (is_zero(Cf(r, c))) continue;
                const std::size_t flip = r ^ c;
                if (flip == 0 || (flip & (flip - 1)) != 0 || (c & flip) == 0)
                    throw std::logic_error("C does not split into single-row lowering parts");
                std::size_t j = 0;
                while ((std::size_t{1} << j) != flip) ++j;
                Cparts_[j](r, c) = Cf(r, c);
            }
    }

    S trace_product(const ParticleConfiguration& x, const Matrix<S>& hop, std::size_t start, std::size_t end) const {
        if (x.particles() != n()) throw std::invalid_argument("configuration size differs from the number of rows");
        std::vector<S> vec(dim(), S(0));
        vec[start] = S(1);
        for (int j = 1; j <= x.ring_size(); ++j) vec = (x.occupied(j) ? hop : A_) * vec;
        return vec[end];
    }

    std::vector<S> u_;
    S alpha_;
    Matrix<S> A_, B_, C_, D_;
    Matrix<S> G_, Ginv_, Ahat_;
    std::vector<Matrix<S>> Bparts_, Cparts_;
};

namespace detail {

template <class S>
S binom_s(int M, int m) {
    return S(static_cast<long>(binomial(M, m)));
}

}  // namespace detail

// sum_x alpha^{MN - sum x} <x|psi(v)> = prod v^{M+1} prod_{j<k}(v_k^2 - v_j^2)^{-1} det V.
template <class S>
S wavefunction_sum(const std::vector<S>& v, const S& alpha, int M) {
    const int N = static_cast<int>(v.size());
    if (N < 1 || N > M) throw std::invalid_argument("need 1 <= N <= M");
    S pre(1);
    for (const auto& t : v) {
        if (is_zero(t)) throw std::domain_error("spectral parameter = 0");
        pre *= ipow(t, M + 1);
    }
    const S r = detail::confluent_in_v(
        [&](const Series<S>& t, std::size_t jj) {
            const int j = static_cast<int>(jj) + 1;
            const Series<S> inv2 = (t * t).reciprocal();
            Series<S> acc(t.order());
            if (j <= N - 1) {
                for (int m = 0; m <= j - 1; ++m)
                    acc += inv2.pow(m - j + 1) * S(ipow(S(-1), m) * ipow(alpha, M - m) * detail::binom_s<S>(M, m));
            } else {
                for (int m = std::max(N - 1, 1); m <= M; ++m)
                    acc -= inv2.pow(m - N + 1) * S(ipow(S(-1), m) * ipow(alpha, M - m) * detail::binom_s<S>(M, m));
            }
            return acc;
        },
        v);
    return pre * r;
}

// sum_x alpha^{sum x - N} <psi(u)|x> = prod u^{M+1} prod_{j<k}(u_j^2 - u_k^2)^{-1} det Vtilde.
template <class S>
S dual_wavefunction_sum(const std::vector<S>& u, const S& alpha, int M) {
    const int N = static_cast<int>(u.size());
    if (N < 1 || N > M) throw std::invalid_argument("need 1 <= N <= M");
    S pre(1);
    for (const auto& t : u) {
        if (is_zero(t)) throw std::domain_error("spectral parameter = 0");
        pre *= ipow(t, M + 1);
    }
    const S r = detail::confluent_in_v(
        [&](const Series<S>& t, std::size_t jj) {
            const int j = static_cast<int>(jj) + 1;
            const Series<S> inv2 = (t * t).reciprocal();
            Series<S> acc(t.order());
            if (j >= 2) {
                for (int m = 0; m <= N - j; ++m)
                    acc += inv2.pow(m + j - N) * S(ipow(S(-1), m) * ipow(alpha, M - m) * detail::binom_s<S>(M, m));
            } else {
                for (int m = std::max(N - 1, 1); m <= M; ++m)
                    acc -= inv2.pow(m - N + 1) * S(ipow(S(-1), m) * ipow(alpha, M - m) * detail::binom_s<S>(M, m));
            }
            return acc;
        },
        u);
    return detail::half_vandermonde_sign(u.size()) < 0 ? S(-pre * r) : S(pre * r);
}

}  // namespace fv
