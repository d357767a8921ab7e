#include "fv/vertex.hpp"

namespace fv {

SectorBasis::SectorBasis(int M, int n) : M_(M), n_(n) {
    if (M < 1 || M > 24) throw std::invalid_argument("sector basis supports 1 <= M <= 24");
    index_.assign(std::size_t{1} << M, -1);
    if (n < 0 || n > M) return;
    for (const auto& x : enumerate_configurations(M, n)) {
        index_[x.mask()] = static_cast<long>(masks_.size());
        masks_.push_back(x.mask());
    }
}

long SectorBasis::index(std::uint32_t mask) const {
    if (mask >= index_.size()) return -1;
    return index_[mask];
}

std::size_t SectorBasis::index_of(const ParticleConfiguration& x) const {
    if (x.ring_size() != M_ || x.particles() != n_) throw std::invalid_argument("configuration outside sector");
    return static_cast<std::size_t>(index_[x.mask()]);
}

Matrix<Rational> appendix_a_l_operator(const Rational& u, const Rational& A, const Rational& B, const Rational& C,
                                       const Rational& D, const RationalFunction& f) {
    const Rational fu = f(u);
    Matrix<Rational> L(4, 4);
    L(0, 0) = A * u * fu;
    L(2, 1) = fu;
    L(1, 2) = B * fu;
    L(2, 2) = (C * u - D / u) * fu;
    L(3, 3) = C * u * fu;
    return L;
}

bool appendix_a_family_check(const Rational& A, const Rational& C, const Rational& D, const RationalFunction& f,
                             std::optional<Rational> B, std::uint64_t seed, int samples) {
    const Rational b = B ? *B : Rational(A * D);
    RationalSampler rng(seed);
    int done = 0;
    int attempts = 0;
    while (done < samples && attempts < 100 * samples) {
        ++attempts;
        const Rational u = rng.draw();
        const Rational v = rng.draw();
        if (u * u == v * v) continue;
        Rational fu, fv;
        try {
            fu = f(u);
            fv = f(v);
        } catch (const std::domain_error&) {
            continue;
        }
        if (sgn(fu) == 0 || sgn(fv) == 0) continue;
        const auto Lu = appendix_a_l_operator(u, A, b, C, D, f);
        const auto Lv = appendix_a_l_operator(v, A, b, C, D, f);
        if (!rll_holds(r_matrix(u, v), Lu, Lv)) return false;
        ++done;
    }
    if (done < samples) throw std::domain_error("could not sample regular points of f");
    return true;
}

SectorOperator<Rational> baxter_log_derivative(const Rational& sqrt_alpha, int M, int n) {
    if (sgn(sqrt_alpha) <= 0) throw std::domain_error("sqrt(alpha) must be positive");
    const Rational alpha = sqrt_alpha * sqrt_alpha;
    const auto params = ModelParameters<Rational>::homogeneous(alpha, M);
    const Rational u0 = 1 / sqrt_alpha;
    const auto tau0 = transfer_matrix(u0, params, n);

    // p(u) = u^M tau(u); p'(u0) = sum_i p(u_i) l_i'(u0) for nodes u_i = u0 + i.
    const int nodes = 2 * M + 1;
    std::vector<Rational> x(static_cast<std::size_t>(nodes));
    for (int i = 0; i < nodes; ++i) x[static_cast<std::size_t>(i)] = u0 + (i + 1);
    Matrix<Rational> dp(tau0.matrix.rows(), tau0.matrix.cols());
    for (int i = 0; i < nodes; ++i) {
        const Rational& xi = x[static_cast<std::size_t>(i)];
        Rational li(1), slope(0);
        for (int m = 0; m < nodes; ++m) {
            if (m == i) continue;
            const Rational& xm = x[static_cast<std::size_t>(m)];
            li *= (u0 - xm) / (xi - xm);
            slope += 1 / (u0 - xm);
        }
        const Rational weight = li * slope * ipow(xi, M);
        dp += transfer_matrix(xi, params, n).matrix * weight;
    }
    // tau' = (p' - M u0^{M-1} tau) / u0^M
    Matrix<Rational> dtau = (dp - tau0.matrix * Rational(M * ipow(u0, M - 1))) * Rational(1 / ipow(u0, M));
    Matrix<Rational> h = inverse(tau0.matrix) * dtau;
    const Rational shift = M * sqrt_alpha;
    for (std::size_t i = 0; i < h.rows(); ++i) h(i, i) -= shift;
    h *= Rational(1 / (2 * sqrt_alpha));
    return {M, n, n, h};
}

}  // namespace fv
