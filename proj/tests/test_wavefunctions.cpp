#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "fv/random.hpp"
#include "fv/symmetric.hpp"
#include "fv/wavefunctions.hpp"
#include "oracles.hpp"

using namespace fv;

namespace {

// Parameters with distinct squares and alpha u^2 != 1.
std::vector<Rational> draw_params(RationalSampler& rng, std::size_t n, const Rational& alpha) {
    for (;;) {
        auto p = rng.draw_distinct_squares(n);
        bool ok = true;
        for (const auto& t : p) ok = ok && alpha * t * t != 1;
        if (ok) return p;
    }
}


}  // namespace

TEST_CASE("wavefunctions equal oracle matrix elements for every configuration") {
    RationalSampler rng(61);
    for (int M = 1; M <= 5; ++M)
        for (int N = 1; N <= M; ++N) {
            const Rational alpha = rng.draw();
            const auto v = draw_params(rng, static_cast<std::size_t>(N), alpha);
            const auto u = draw_params(rng, static_cast<std::size_t>(N), alpha);
            const std::vector<Rational> w(static_cast<std::size_t>(M), Rational(1));
            for (const auto& x : enumerate_configurations(M, N)) {
                CHECK(wavefunction_det(x, v, alpha) == oracle::dense_matrix_element(x.mask(), {}, v, alpha, w));
                // <Omega| C(u)...|x> is the |x> component of the transposed action.
                std::vector<Rational> ket(std::size_t{1} << M, Rational(0));
                ket[x.mask()] = 1;
                for (auto it = u.rbegin(); it != u.rend(); ++it) ket = oracle::dense_monodromy(*it, alpha, w).C * ket;
                CHECK(dual_wavefunction_det(x, u, alpha) == ket[0]);
            }
        }
}

TEST_CASE("acceptance-sized wavefunction examples") {
    const Rational alpha = make_rational(5, 3);
    const std::vector<Rational> v{make_rational(2, 7), make_rational(-9, 4)};
    const std::vector<Rational> w(4, Rational(1));
    const ParticleConfiguration x({1, 3}, 4);
    CHECK(wavefunction_det(x, v, alpha) == oracle::dense_matrix_element(x.mask(), {}, v, alpha, w));
    const ParticleConfiguration y({2, 4}, 4);
    std::vector<Rational> ket(16, Rational(0));
    ket[y.mask()] = 1;
    for (auto it = v.rbegin(); it != v.rend(); ++it) ket = oracle::dense_monodromy(*it, alpha, w).C * ket;
    CHECK(dual_wavefunction_det(y, v, alpha) == ket[0]);
}

TEST_CASE("step and staircase closed forms") {
    RationalSampler rng(62);
    for (int N = 1; N <= 4; ++N)
        for (int M = N; M <= N + 3; ++M)
            for (int t = 0; t < 3; ++t) {
                const Rational alpha = rng.draw();
                const auto u = draw_params(rng, static_cast<std::size_t>(N), alpha);
                std::vector<int> step, stair;
                for (int j = 1; j <= N; ++j) {
                    step.push_back(j);
                    stair.push_back(2 * j - 1);
                }
                Rational step_dual = ipow(alpha, N * (N - 1) / 2), step_wave = step_dual;
                for (const auto& uj : u) {
                    step_dual *= ipow(uj, N - 1) * ipow(Rational(alpha * uj - 1 / uj), M - N);
                    step_wave *= ipow(uj, M - 1);
                }
                const ParticleConfiguration xs(step, M);
                CHECK(dual_wavefunction_det(xs, u, alpha) == step_dual);
                CHECK(wavefunction_det(xs, u, alpha) == step_wave);
                if (2 * N - 1 <= M) {
                    Rational expected(1);
                    for (std::size_t j = 0; j < u.size(); ++j) {
                        expected *= ipow(Rational(alpha * u[j] - 1 / u[j]), M - 2 * N + 1);
                        for (std::size_t k = j + 1; k < u.size(); ++k)
                            expected *= alpha * alpha * u[j] * u[j] * u[k] * u[k] - 1;
                    }
                    CHECK(dual_wavefunction_det(ParticleConfiguration(stair, M), u, alpha) == expected);
                }
            }
}

TEST_CASE("closed forms on a full parameter grid") {
    // Both sides times prod u^{2N} (alpha u^2-1)^{M} are polynomials in u_1, u_2 of degree <= 2(M+N)
    // for fixed alpha, so agreement on a grid of 2(M+N)+1 points per variable is equality.
    const int N = 2, M = 4;
    for (const Rational alpha : {make_rational(3, 2), make_rational(-2, 5)}) {
        std::vector<Rational> grid;
        for (int i = 0; i <= 2 * (M + N); ++i) grid.push_back(make_rational(i + 2, 3));
        bool step_ok = true, stair_ok = true;
        int used = 0;
        for (const auto& a : grid)
            for (const auto& b : grid) {
                if (a * a == b * b || alpha * a * a == 1 || alpha * b * b == 1) continue;
                const std::vector<Rational> u{a, b};
                ++used;
                Rational step = alpha, stair = alpha * alpha * a * a * b * b - 1;
                for (const auto& t : u) {
                    step *= t * ipow(Rational(alpha * t - 1 / t), M - N);
                    stair *= ipow(Rational(alpha * t - 1 / t), M - 2 * N + 1);
                }
                step_ok = step_ok && dual_wavefunction_det(ParticleConfiguration({1, 2}, M), u, alpha) == step;
                stair_ok = stair_ok && dual_wavefunction_det(ParticleConfiguration({1, 3}, M), u, alpha) == stair;
            }
        CHECK(used > 100);
        CHECK(step_ok);
        CHECK(stair_ok);
    }
}

TEST_CASE("wavefunctions are symmetric in the spectral parameters") {
    RationalSampler rng(63);
    const int M = 6;
    for (int N = 2; N <= 3; ++N) {
        const Rational alpha = rng.draw();
        auto u = draw_params(rng, static_cast<std::size_t>(N), alpha);
        for (const auto& x : enumerate_configurations(M, N)) {
            const Rational a = wavefunction_det(x, u, alpha), b = dual_wavefunction_det(x, u, alpha);
            auto p = u;
            std::sort(p.begin(), p.end());
            do {
                CHECK(wavefunction_det(x, p, alpha) == a);
                CHECK(dual_wavefunction_det(x, p, alpha) == b);
            } while (std::next_permutation(p.begin(), p.end()));
        }
    }
}

TEST_CASE("Grothendieck dictionary") {
    RationalSampler rng(64);
    for (int M = 2; M <= 6; ++M)
        for (int N = 1; N <= std::min(M, 3); ++N) {
            const Rational alpha = rng.draw();
            const Rational beta = -1 / alpha;
            const auto v = draw_params(rng, static_cast<std::size_t>(N), alpha);
            std::vector<Rational> z, y;
            for (const auto& t : v) {
                z.push_back(alpha - 1 / (t * t));
                y.push_back(1 / (alpha - 1 / (t * t)));
            }
            for (const auto& x : enumerate_configurations(M, N)) {
                const auto lambda = config_to_partition(x);
                Rational pre = ipow(alpha, N * (N - 1) / 2);
                for (const auto& t : v) pre *= ipow(t, M - 1);
                CHECK(wavefunction_det(x, v, alpha) == pre * grothendieck_eval(lambda, z, beta));
                Rational dual = pre;
                for (const auto& yj : y) dual *= ipow(yj, N - M) * ipow(Rational(1 + beta / yj), N - 1);
                CHECK(dual_wavefunction_det(x, v, alpha) == dual * dual_grothendieck_eval(lambda, y, beta));
            }
        }
}

TEST_CASE("confluent wavefunctions") {
    RationalSampler rng(65);
    const Rational alpha = make_rational(7, 5);
    const std::vector<Rational> w(5, Rational(1));
    const Rational t = make_rational(3, 4);
    const std::vector<Rational> v{t, t, make_rational(-5, 2)};
    for (const auto& x : enumerate_configurations(5, 3)) {
        CHECK(wavefunction_det(x, v, alpha) == oracle::dense_matrix_element(x.mask(), {}, v, alpha, w));
        std::vector<Rational> ket(32, Rational(0));
        ket[x.mask()] = 1;
        for (auto it = v.rbegin(); it != v.rend(); ++it) ket = oracle::dense_monodromy(*it, alpha, w).C * ket;
        CHECK(dual_wavefunction_det(x, v, alpha) == ket[0]);
    }
    CHECK_THROWS_AS(wavefunction_det(ParticleConfiguration({1}, 3), std::vector<Rational>{Rational(1)}, Rational(1)),
                    std::domain_error);
    CHECK_THROWS_AS(wavefunction_det(ParticleConfiguration({1, 2}, 3), std::vector<Rational>{Rational(2)}, Rational(1)),
                    std::invalid_argument);
}

TEST_CASE("matrix product state: initial operators") {
    const Rational u = make_rational(2, 3), alpha = make_rational(5, 2);
    const MatrixProductState<Rational> mps(std::vector<Rational>{u}, alpha);
    CHECK(mps.A() == Matrix<Rational>{{u, 0}, {0, alpha * u - 1 / u}});
    CHECK(mps.B() == Matrix<Rational>{{0, 0}, {1, 0}});
    CHECK(mps.C() == Matrix<Rational>{{0, 1}, {0, 0}});
}

TEST_CASE("matrix product state: frame and operator algebra") {
    RationalSampler rng(66);
    for (int n = 1; n <= 4; ++n) {
        const Rational alpha = rng.draw();
        const auto u = draw_params(rng, static_cast<std::size_t>(n), alpha);
        const MatrixProductState<Rational> mps(u, alpha);
        const auto& G = mps.G();
        const auto& Gi = mps.G_inverse();
        const std::size_t dim = std::size_t{1} << n;
        CHECK(G * Gi == Matrix<Rational>::identity(dim));
        const auto Ahat = Gi * mps.A() * G;
        CHECK(Ahat == mps.A_diagonal());
        Matrix<Rational> bsum(dim, dim), csum(dim, dim);
        for (int j = 0; j < n; ++j) {
            bsum += mps.B_parts()[static_cast<std::size_t>(j)];
            csum += mps.C_parts()[static_cast<std::size_t>(j)];
        }
        CHECK(Gi * mps.B() * G == bsum);
        CHECK(mps.to_original(bsum) == mps.B());
        CHECK(mps.to_original(csum) == mps.C());
        for (int j = 0; j < n; ++j) {
            const Rational& uj = u[static_cast<std::size_t>(j)];
            const Rational ratio = uj / (alpha * uj - 1 / uj);
            const auto& Bj = mps.B_parts()[static_cast<std::size_t>(j)];
            const auto& Cj = mps.C_parts()[static_cast<std::size_t>(j)];
            CHECK(Bj * Ahat == Ahat * Bj * ratio);
            CHECK(Ahat * Cj == Cj * Ahat * ratio);
            CHECK((Bj * Bj).is_zero_matrix());
            CHECK((Cj * Cj).is_zero_matrix());
            for (int k = 0; k < n; ++k) {
                if (k == j) continue;
                const Rational& uk = u[static_cast<std::size_t>(k)];
                const auto& Bk = mps.B_parts()[static_cast<std::size_t>(k)];
                const auto& Ck = mps.C_parts()[static_cast<std::size_t>(k)];
                CHECK(Bj * Bk * Rational(alpha * uj * uj - 1) == Bk * Bj * Rational(-(alpha * uk * uk - 1)));
                CHECK(Cj * Ck * Rational(alpha * uk * uk - 1) == Ck * Cj * Rational(-(alpha * uj * uj - 1)));
            }
        }
    }
}

TEST_CASE("matrix product state: trace formulas and prefactor") {
    RationalSampler rng(67);
    for (int M = 1; M <= 5; ++M)
        for (int N = 1; N <= std::min(M, 3); ++N) {
            const Rational alpha = rng.draw();
            const auto u = draw_params(rng, static_cast<std::size_t>(N), alpha);
            const MatrixProductState<Rational> mps(u, alpha);
            for (const auto& x : enumerate_configurations(M, N)) {
                CHECK(mps.dual_wavefunction(x) == dual_wavefunction_det(x, u, alpha));
                CHECK(mps.wavefunction(x) == wavefunction_det(x, u, alpha));
            }
            Rational K(1);
            for (const auto& t : u) K *= ipow(Rational(alpha * t - 1 / t), M) * ipow(t, 2 * N - 1);
            for (std::size_t j = 0; j < u.size(); ++j)
                for (std::size_t k = j + 1; k < u.size(); ++k) K /= u[j] * u[j] - u[k] * u[k];
            CHECK(mps.prefactor_K(M) == K);
        }
    CHECK_THROWS_AS(MatrixProductState<Rational>(std::vector<Rational>(7, Rational(2)), Rational(1)), std::invalid_argument);
}

TEST_CASE("summation formulas") {
    RationalSampler rng(68);
    for (int M = 1; M <= 6; ++M)
        for (int N = 1; N <= std::min(M, 3); ++N) {
            const Rational alpha = rng.draw();
            const auto v = draw_params(rng, static_cast<std::size_t>(N), alpha);
            Rational lhs(0), dual_lhs(0);
            for (const auto& x : enumerate_configurations(M, N)) {
                int sx = 0;
                for (int p : x.positions()) sx += p;
                lhs += ipow(alpha, M * N - sx) * wavefunction_det(x, v, alpha);
                dual_lhs += ipow(alpha, sx - N) * dual_wavefunction_det(x, v, alpha);
            }
            CHECK(wavefunction_sum(v, alpha, M) == lhs);
            CHECK(dual_wavefunction_sum(v, alpha, M) == dual_lhs);
        }
    // N = 1, M = 2 by hand: alpha <1|psi> + <2|psi>.
    const Rational alpha = make_rational(3, 2), v = make_rational(4, 5);
    const Rational x1 = v / (alpha * v * v - 1) * v * v * (alpha - 1 / (v * v));
    const Rational x2 = x1 * (alpha - 1 / (v * v));
    CHECK(wavefunction_sum(std::vector<Rational>{v}, alpha, 2) == alpha * x1 + x2);
}
