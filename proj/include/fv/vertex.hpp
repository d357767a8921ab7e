#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fv/determinant.hpp"
#include "fv/matrix.hpp"
#include "fv/partitions.hpp"
#include "fv/random.hpp"

namespace fv {

template <class S>
struct ModelParameters {
    S alpha;
    std::vector<S> w;

    int M() const { return static_cast<int>(w.size()); }

    static ModelParameters homogeneous(const S& alpha, int M) {
        if (M < 1) throw std::invalid_argument("ring size must be positive");
        return ModelParameters{alpha, std::vector<S>(static_cast<std::size_t>(M), S(1))};
    }

    void validate() const {
        if (w.empty()) throw std::invalid_argument("ring size must be positive");
        for (const auto& x : w)
            if (is_zero(x)) throw std::invalid_argument("inhomogeneity w_j must be nonzero");
    }
};

template <class S>
struct VertexWeights {
    S a1, b, c, d, e;
};

template <class S>
VertexWeights<S> l_weights(const S& u, const S& alpha) {
    if (is_zero(u)) throw std::domain_error("spectral parameter u = 0");
    const S inv = S(1) / u;
    return {u, S(1), S(1), S(alpha * u - inv), S(alpha * u)};
}

// Basis |a,i> of W (x) V has index 2a+i; rows are outputs.
template <class S>
Matrix<S> l_matrix(const VertexWeights<S>& wt) {
    Matrix<S> L(4, 4);
    L(0, 0) = wt.a1;
    L(2, 1) = wt.c;
    L(1, 2) = wt.b;
    L(2, 2) = wt.d;
    L(3, 3) = wt.e;
    return L;
}

template <class S>
Matrix<S> l_operator(const S& u, const S& alpha) {
    return l_matrix(l_weights(u, alpha));
}

// f(a, b) = b^2 / (b^2 - a^2), g(a, b) = ab / (b^2 - a^2).
template <class S>
S f_coefficient(const S& a, const S& b) {
    const S den = b * b - a * a;
    if (is_zero(den)) throw std::domain_error("R-matrix pole u^2 = v^2");
    return S(b * b) / den;
}

template <class S>
S g_coefficient(const S& a, const S& b) {
    const S den = b * b - a * a;
    if (is_zero(den)) throw std::domain_error("R-matrix pole u^2 = v^2");
    return S(a * b) / den;
}

template <class S>
Matrix<S> r_matrix(const S& u, const S& v) {
    const S f = f_coefficient(v, u);
    const S g = g_coefficient(v, u);
    Matrix<S> R(4, 4);
    R(0, 0) = f;
    R(1, 2) = g;
    R(2, 1) = g;
    R(2, 2) = S(1);
    R(3, 3) = f;
    return R;
}

template <class S>
Matrix<S> rtilde_matrix(const S& x, const S& alpha) {
    if (is_zero(x)) throw std::domain_error("R-tilde argument must be nonzero");
    Matrix<S> R(4, 4);
    R(0, 0) = x;
    R(1, 2) = S(1);
    R(2, 1) = S(1);
    R(2, 2) = alpha * (x - S(1) / x);
    R(3, 3) = x;
    return R;
}

// Embeds a 4x4 operator on spaces (p, q) into n two-dimensional spaces; space 0 is most significant.
template <class S>
Matrix<S> embed_pair(const Matrix<S>& op, int p, int q, int nspaces) {
    const std::size_t dim = std::size_t{1} << nspaces;
    Matrix<S> out(dim, dim);
    auto bit = [&](std::size_t idx, int space) { return (idx >> (nspaces - 1 - space)) & 1u; };
    for (std::size_t c = 0; c < dim; ++c) {
        const std::size_t col = 2 * bit(c, p) + bit(c, q);
        for (std::size_t row = 0; row < 4; ++row) {
            const S& val = op(row, col);
            if (is_zero(val)) continue;
            std::size_t r = c;
            r &= ~(std::size_t{1} << (nspaces - 1 - p));
            r &= ~(std::size_t{1} << (nspaces - 1 - q));
            r |= (row >> 1) << (nspaces - 1 - p);
            r |= (row & 1u) << (nspaces - 1 - q);
            out(r, c) += val;
        }
    }
    return out;
}

// R12 L13 L23 = L23 L13 R12 on three spaces.
template <class S>
bool rll_holds(const Matrix<S>& R, const Matrix<S>& Lu, const Matrix<S>& Lv) {
    const Matrix<S> R12 = embed_pair(R, 0, 1, 3);
    const Matrix<S> L13 = embed_pair(Lu, 0, 2, 3);
    const Matrix<S> L23 = embed_pair(Lv, 1, 2, 3);
    return nearly_equal(R12 * L13 * L23, L23 * L13 * R12);
}

template <class S>
bool rll_check(const S& u, const S& v, const S& alpha) {
    return rll_holds(r_matrix(u, v), l_operator(u, alpha), l_operator(v, alpha));
}

// R12 R13 R23 = R23 R13 R12.
template <class S>
bool ybe_holds(const Matrix<S>& R12, const Matrix<S>& R13, const Matrix<S>& R23) {
    const Matrix<S> a = embed_pair(R12, 0, 1, 3);
    const Matrix<S> b = embed_pair(R13, 0, 2, 3);
    const Matrix<S> c = embed_pair(R23, 1, 2, 3);
    return nearly_equal(a * b * c, c * b * a);
}

template <class S>
bool ybe_check(const S& u, const S& v, const S& w) {
    return ybe_holds(r_matrix(u, v), r_matrix(u, w), r_matrix(v, w));
}

// Rt_jk L_mu,k L_mu,j = L_mu,j L_mu,k Rt_jk on W_mu (x) V_j (x) V_k.
template <class S>
bool rtilde_holds(const Matrix<S>& Rt, const Matrix<S>& Lk, const Matrix<S>& Lj) {
    const Matrix<S> R = embed_pair(Rt, 1, 2, 3);
    const Matrix<S> K = embed_pair(Lk, 0, 2, 3);
    const Matrix<S> J = embed_pair(Lj, 0, 1, 3);
    return nearly_equal(R * K * J, J * K * R);
}

template <class S>
bool rtilde_check(const S& u, const S& wj, const S& wk, const S& alpha) {
    if (is_zero(wj) || is_zero(wk)) throw std::domain_error("inhomogeneities must be nonzero");
    return rtilde_holds(rtilde_matrix(S(wj / wk), alpha), l_operator(S(u / wk), alpha), l_operator(S(u / wj), alpha));
}

using RationalFunction = std::function<Rational(const Rational&)>;

// Ansatz L-operator with d1..d5 = (A u f, f, B f, (C u - D/u) f, C u f).
Matrix<Rational> appendix_a_l_operator(const Rational& u, const Rational& A, const Rational& B, const Rational& C,
                                       const Rational& D, const RationalFunction& f);

// RLL check of the ansatz family at random points; B defaults to A*D.
bool appendix_a_family_check(const Rational& A, const Rational& C, const Rational& D, const RationalFunction& f,
                             std::optional<Rational> B = std::nullopt, std::uint64_t seed = 1, int samples = 4);

class SectorBasis {
public:
    // Sectors outside [0, M] are empty.
    SectorBasis(int M, int n);

    int M() const { return M_; }
    int n() const { return n_; }
    std::size_t size() const { return masks_.size(); }
    std::uint32_t mask(std::size_t i) const { return masks_[i]; }
    long index(std::uint32_t mask) const;
    ParticleConfiguration config(std::size_t i) const { return ParticleConfiguration::from_mask(masks_[i], M_); }
    std::size_t index_of(const ParticleConfiguration& x) const;

private:
    int M_;
    int n_;
    std::vector<std::uint32_t> masks_;
    std::vector<long> index_;
};

template <class S>
struct SectorOperator {
    int M = 0;
    int source = 0;
    int target = 0;
    Matrix<S> matrix;
};

// a after b.
template <class S>
SectorOperator<S> compose(const SectorOperator<S>& a, const SectorOperator<S>& b) {
    if (a.M != b.M || a.source != b.target) throw std::invalid_argument("sector mismatch in operator product");
    return {a.M, b.source, a.target, a.matrix * b.matrix};
}

template <class S>
SectorOperator<S> operator*(const SectorOperator<S>& a, const SectorOperator<S>& b) {
    return compose(a, b);
}

template <class S>
SectorOperator<S> operator+(const SectorOperator<S>& a, const SectorOperator<S>& b) {
    if (a.M != b.M || a.source != b.source || a.target != b.target) throw std::invalid_argument("sector mismatch");
    return {a.M, a.source, a.target, a.matrix + b.matrix};
}

template <class S>
SectorOperator<S> operator-(const SectorOperator<S>& a, const SectorOperator<S>& b) {
    if (a.M != b.M || a.source != b.source || a.target != b.target) throw std::invalid_argument("sector mismatch");
    return {a.M, a.source, a.target, a.matrix - b.matrix};
}

template <class S>
SectorOperator<S> operator*(const S& x, const SectorOperator<S>& a) {
    return {a.M, a.source, a.target, a.matrix * x};
}

template <class S>
bool nearly_equal(const SectorOperator<S>& a, const SectorOperator<S>& b, double tol = kDefaultTolerance) {
    return a.M == b.M && a.source == b.source && a.target == b.target && nearly_equal(a.matrix, b.matrix, tol);
}

enum class MonodromyElement { A, B, C, D };

inline int aux_in(MonodromyElement k) { return (k == MonodromyElement::B || k == MonodromyElement::D) ? 1 : 0; }
inline int aux_out(MonodromyElement k) { return (k == MonodromyElement::C || k == MonodromyElement::D) ? 1 : 0; }
inline int sector_shift(MonodromyElement k) { return aux_in(k) - aux_out(k); }

namespace detail {

// Contracts the auxiliary line through L_M(u/w_M) ... L_1(u/w_1); site 1 acts first.
// Target sectors outside [0, M] give an operator with no rows.
template <class S>
SectorOperator<S> monodromy_padded(MonodromyElement kind, const S& u, const ModelParameters<S>& params, int n) {
    const int M = params.M();
    const int target = n + sector_shift(kind);
    const SectorBasis src(M, n);
    const SectorBasis tgt(M, target);
    SectorOperator<S> op{M, n, target, Matrix<S>(tgt.size(), src.size())};
    if (tgt.size() == 0 || src.size() == 0) return op;

    std::vector<VertexWeights<S>> wt;
    wt.reserve(static_cast<std::size_t>(M));
    for (const auto& wj : params.w) wt.push_back(l_weights(S(u / wj), params.alpha));

    struct Path {
        int aux;
        std::uint32_t out;
        S weight;
    };
    const int a_in = aux_in(kind);
    const int a_out = aux_out(kind);
    std::vector<Path> paths, next;
    for (std::size_t col = 0; col < src.size(); ++col) {
        const std::uint32_t in = src.mask(col);
        paths.assign(1, Path{a_in, 0u, S(1)});
        for (int j = 1; j <= M; ++j) {
            const std::uint32_t bitpos = 1u << (M - j);
            const bool occ = (in & bitpos) != 0;
            const auto& w = wt[static_cast<std::size_t>(j - 1)];
            next.clear();
            for (const auto& p : paths) {
                if (p.aux == 0 && !occ) {
                    next.push_back({0, p.out, S(p.weight * w.a1)});
                } else if (p.aux == 0 && occ) {
                    next.push_back({1, p.out, S(p.weight * w.c)});
                } else if (p.aux == 1 && !occ) {
                    if (!is_zero(w.d)) next.push_back({1, p.out, S(p.weight * w.d)});
                    next.push_back({0, p.out | bitpos, S(p.weight * w.b)});
                } else {
                    if (!is_zero(w.e)) next.push_back({1, p.out | bitpos, S(p.weight * w.e)});
                }
            }
            std::swap(paths, next);
        }
        for (const auto& p : paths) {
            if (p.aux != a_out) continue;
            const long row = tgt.index(p.out);
            if (row < 0) throw std::logic_error("monodromy path left its target sector");
            op.matrix(static_cast<std::size_t>(row), col) += p.weight;
        }
    }
    return op;
}

}  // namespace detail

template <class S>
SectorOperator<S> build_monodromy_element(MonodromyElement kind, const S& u, const ModelParameters<S>& params, int n) {
    params.validate();
    if (is_zero(u)) throw std::domain_error("spectral parameter u = 0");
    const int target = n + sector_shift(kind);
    if (n < 0 || n > params.M() || target < 0 || target > params.M()) throw std::out_of_range("sector overflow");
    return detail::monodromy_padded(kind, u, params, n);
}

template <class S>
SectorOperator<S> transfer_matrix(const S& u, const ModelParameters<S>& params, int n) {
    return build_monodromy_element(MonodromyElement::A, u, params, n) +
           build_monodromy_element(MonodromyElement::D, u, params, n);
}

// Periodic sum of alpha sigma+_j sigma-_{j+1} + (sigma^z_j sigma^z_{j+1} - 1)/4:
// a particle at j hops to an empty j+1 with amplitude alpha, and each unlike bond adds -1/2.
template <class S>
SectorOperator<S> hamiltonian(const S& alpha, int M, int n) {
    const SectorBasis basis(M, n);
    SectorOperator<S> op{M, n, n, Matrix<S>(basis.size(), basis.size())};
    if (M < 2) return op;
    const S half = S(1) / S(2);
    for (std::size_t c = 0; c < basis.size(); ++c) {
        const std::uint32_t m = basis.mask(c);
        for (int j = 1; j <= M; ++j) {
            const int k = j % M + 1;
            const std::uint32_t bj = 1u << (M - j);
            const std::uint32_t bk = 1u << (M - k);
            const bool oj = (m & bj) != 0;
            const bool ok = (m & bk) != 0;
            if (oj == ok) continue;
            op.matrix(c, c) -= half;
            if (oj && !ok) {
                const long r = basis.index((m & ~bj) | bk);
                op.matrix(static_cast<std::size_t>(r), c) += alpha;
            }
        }
    }
    return op;
}

// Exact (1/(2 s)) (tau(u0)^{-1} tau'(u0) - M s) at u0 = 1/s, alpha = s^2.
// tau' comes from interpolating the polynomial u^M tau(u) of degree <= 2M.
SectorOperator<Rational> baxter_log_derivative(const Rational& sqrt_alpha, int M, int n);

template <class S>
S a_function(const S& u, const ModelParameters<S>& params) {
    S r(1);
    for (const auto& w : params.w) r *= u / w;
    return r;
}

template <class S>
S d_function(const S& u, const ModelParameters<S>& params) {
    S r(1);
    for (const auto& w : params.w) r *= params.alpha * u / w - w / u;
    return r;
}

// a(u_j)/d(u_j) - prod_{k != j} f(u_k, u_j)/f(u_j, u_k); the k = j factor of the product form equals -1.
template <class S>
std::vector<S> bethe_residual(const std::vector<S>& u, const ModelParameters<S>& params) {
    std::vector<S> res;
    res.reserve(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (is_zero(u[j])) throw std::domain_error("Bethe root u_j = 0");
        const S d = d_function(u[j], params);
        if (is_zero(d)) throw std::domain_error("d(u_j) = 0");
        S prod(1);
        for (std::size_t k = 0; k < u.size(); ++k) {
            if (k == j) continue;
            prod *= f_coefficient(u[k], u[j]) / f_coefficient(u[j], u[k]);
        }
        res.push_back(S(a_function(u[j], params) / d - prod));
    }
    return res;
}

// Lambda(x) = a(x) prod f(x, u_j) + d(x) prod f(u_j, x).
template <class S>
S transfer_eigenvalue(const S& x, const std::vector<S>& u, const ModelParameters<S>& params) {
    S pa = a_function(x, params);
    S pd = d_function(x, params);
    for (const auto& uj : u) {
        pa *= f_coefficient(x, uj);
        pd *= f_coefficient(uj, x);
    }
    return pa + pd;
}

// B(u_N) ... B(u_1) |Omega>, as a column in sector N.
template <class S>
std::vector<S> bethe_state(const std::vector<S>& v, const ModelParameters<S>& params) {
    std::vector<S> state(1, S(1));
    for (std::size_t k = 0; k < v.size(); ++k) {
        const auto B = build_monodromy_element(MonodromyElement::B, v[k], params, static_cast<int>(k));
        state = B.matrix * state;
    }
    return state;
}

// <bra| C(u_1) ... C(u_n) as a row vector over the sector of size bra.size().
template <class S>
std::vector<S> dual_bethe_state(const std::vector<S>& u, const ModelParameters<S>& params, std::vector<S> bra,
                                int bra_sector) {
    int n = bra_sector;
    for (const auto& uk : u) {
        const auto C = build_monodromy_element(MonodromyElement::C, uk, params, n + 1);
        std::vector<S> next(C.matrix.cols(), S(0));
        for (std::size_t r = 0; r < C.matrix.rows(); ++r)
            for (std::size_t c = 0; c < C.matrix.cols(); ++c) next[c] += bra[r] * C.matrix(r, c);
        bra = std::move(next);
        ++n;
    }
    return bra;
}

struct CommutationReport {
    bool cb = false;  // C(u)B(v) = g(u,v)[A(u)D(v) - A(v)D(u)]
    bool ab = false;  // A(u)B(v) = f(u,v)B(v)A(u) + g(v,u)B(u)A(v)
    bool db = false;  // D(u)B(v) = f(v,u)B(v)D(u) + g(u,v)B(u)D(v)
    bool bb = false;
    bool cc = false;
    bool all() const { return cb && ab && db && bb && cc; }
};

template <class S>
struct MonodromyTable {
    // ops[kind][n] acts on sector n.
    std::array<std::vector<SectorOperator<S>>, 4> ops;

    MonodromyTable(const S& u, const ModelParameters<S>& params) {
        for (int k = 0; k < 4; ++k)
            for (int n = 0; n <= params.M(); ++n)
                ops[static_cast<std::size_t>(k)].push_back(
                    detail::monodromy_padded(static_cast<MonodromyElement>(k), u, params, n));
    }

    const SectorOperator<S>& at(MonodromyElement kind, int n) const {
        return ops[static_cast<std::size_t>(kind)][static_cast<std::size_t>(n)];
    }
};

namespace detail {

template <class S>
SectorOperator<S> zero_like(const SectorOperator<S>& a) {
    return {a.M, a.source, a.target, Matrix<S>(a.matrix.rows(), a.matrix.cols())};
}

// Product X(first) after Y(second) on sector n, empty when the intermediate sector is out of range.
template <class S>
SectorOperator<S> product_on(const MonodromyTable<S>& tx, MonodromyElement x, const MonodromyTable<S>& ty,
                             MonodromyElement y, int n, int M) {
    const auto& Y = ty.at(y, n);
    const int mid = Y.target;
    const int target = mid + sector_shift(x);
    if (mid < 0 || mid > M) {
        const SectorBasis tb(M, target);
        return {M, n, target, Matrix<S>(tb.size(), Y.matrix.cols())};
    }
    return compose(tx.at(x, mid), Y);
}

}  // namespace detail

template <class S>
CommutationReport commutation_check(const S& u, const S& v, const ModelParameters<S>& params) {
    using E = MonodromyElement;
    const MonodromyTable<S> tu(u, params), tv(v, params);
    const int M = params.M();
    CommutationReport rep{true, true, true, true, true};
    const S fuv = f_coefficient(u, v), fvu = f_coefficient(v, u);
    const S guv = g_coefficient(u, v), gvu = g_coefficient(v, u);
    for (int n = 0; n <= M; ++n) {
        using detail::product_on;
        const auto CB = product_on(tu, E::C, tv, E::B, n, M);
        const auto AD = product_on(tu, E::A, tv, E::D, n, M) - product_on(tv, E::A, tu, E::D, n, M);
        rep.cb = rep.cb && nearly_equal(CB, guv * AD);
        const auto AB = product_on(tu, E::A, tv, E::B, n, M);
        const auto AB_r = fuv * product_on(tv, E::B, tu, E::A, n, M) + gvu * product_on(tu, E::B, tv, E::A, n, M);
        rep.ab = rep.ab && nearly_equal(AB, AB_r);
        const auto DB = product_on(tu, E::D, tv, E::B, n, M);
        const auto DB_r = fvu * product_on(tv, E::B, tu, E::D, n, M) + guv * product_on(tu, E::B, tv, E::D, n, M);
        rep.db = rep.db && nearly_equal(DB, DB_r);
        rep.bb = rep.bb && nearly_equal(product_on(tu, E::B, tv, E::B, n, M), product_on(tv, E::B, tu, E::B, n, M));
        rep.cc = rep.cc && nearly_equal(product_on(tu, E::C, tv, E::C, n, M), product_on(tv, E::C, tu, E::C, n, M));
    }
    return rep;
}

// R_ab(u,v) T_a(u) T_b(v) = T_b(v) T_a(u) R_ab(u,v), checked block by block on every sector.
template <class S>
bool rtt_check(const S& u, const S& v, const ModelParameters<S>& params) {
    const MonodromyTable<S> tu(u, params), tv(v, params);
    const Matrix<S> R = r_matrix(u, v);
    const int M = params.M();
    auto elem = [](int out, int in) { return static_cast<MonodromyElement>(2 * out + in); };
    for (int n = 0; n <= M; ++n)
        for (int ao = 0; ao < 2; ++ao)
            for (int bo = 0; bo < 2; ++bo)
                for (int ai = 0; ai < 2; ++ai)
                    for (int bi = 0; bi < 2; ++bi) {
                        std::optional<SectorOperator<S>> lhs, rhs;
                        for (int c = 0; c < 2; ++c)
                            for (int d = 0; d < 2; ++d) {
                                const S& rl = R(static_cast<std::size_t>(2 * ao + bo), static_cast<std::size_t>(2 * c + d));
                                if (!is_zero(rl)) {
                                    // T_a(u)_{c,ai} T_b(v)_{d,bi}: T(v) acts first.
                                    auto t = rl * detail::product_on(tu, elem(c, ai), tv, elem(d, bi), n, M);
                                    lhs = lhs ? *lhs + t : t;
                                }
                                const S& rr = R(static_cast<std::size_t>(2 * c + d), static_cast<std::size_t>(2 * ai + bi));
                                if (!is_zero(rr)) {
                                    auto t = rr * detail::product_on(tv, elem(bo, d), tu, elem(ao, c), n, M);
                                    rhs = rhs ? *rhs + t : t;
                                }
                            }
                        if (!lhs && !rhs) continue;
                        if (!lhs) lhs = detail::zero_like(*rhs);
                        if (!rhs) rhs = detail::zero_like(*lhs);
                        if (!nearly_equal(*lhs, *rhs)) return false;
                    }
    return true;
}

template <class S>
bool transfer_commute_check(const S& u, const S& v, const ModelParameters<S>& params) {
    for (int n = 0; n <= params.M(); ++n) {
        const auto tu = transfer_matrix(u, params, n);
        const auto tv = transfer_matrix(v, params, n);
        if (!nearly_equal(tu * tv, tv * tu)) return false;
    }
    return true;
}

}  // namespace fv
