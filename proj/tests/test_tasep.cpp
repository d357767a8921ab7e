#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "fv/identities.hpp"
#include "fv/random.hpp"
#include "fv/tasep.hpp"
#include "oracles.hpp"

using namespace fv;

namespace {

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
    Eigen::MatrixXd e(static_cast<long>(m.rows()), static_cast<long>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) e(static_cast<long>(r), static_cast<long>(c)) = m(r, c);
    return e;
}

// Largest distance in a greedy nearest-neighbour matching of two multisets.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
    if (a.size() != b.size()) return INFINITY;
    double worst = 0;
    for (const auto& x : a) {
        auto it = std::min_element(b.begin(), b.end(),
                                   [&](const Complex& p, const Complex& q) { return std::abs(p - x) < std::abs(q - x); });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

// Probability table of the oracle generator, indexed by configurations.
struct OracleEvolution {
    fv::SectorBasis basis;
    Matrix<double> P;
    OracleEvolution(int M, int N, double t) : basis(M, N), P(oracle::expm_taylor(oracle::tasep_generator(M, N), t)) {}
    double operator()(const ParticleConfiguration& to, const ParticleConfiguration& from) const {
        return P(basis.index_of(to), basis.index_of(from));
    }
};

}  // namespace

TEST_CASE("companion roots solve the polynomial") {
    for (const Complex Y : {Complex(0.3, 0.1), Complex(-2.0, 0.5), Complex(1e-3, 0)}) {
        const auto roots = companion_roots(Y, 7, 3);
        CHECK(roots.size() == 7);
        for (const auto& z : roots) CHECK(std::abs(std::pow(Complex(1) - z, 3) - Y * std::pow(z, 7)) < 1e-10);
    }
    CHECK_THROWS_AS(companion_roots(Complex(0), 5, 2), std::domain_error);
}

TEST_CASE("Bethe completeness against the generator spectrum") {
    for (int M = 2; M <= 8; ++M)
        for (int N = 1; N <= M / 2; ++N) {
            INFO("M = " << M << ", N = " << N);
            const auto rep = bethe_solve(M, N);
            REQUIRE(rep.complete());
            CHECK(rep.max_residual() <= 1e-10);
            const Eigen::MatrixXd H = to_eigen(oracle::tasep_generator(M, N));
            const Eigen::VectorXcd ev = H.eigenvalues();
            std::vector<Complex> spec(ev.data(), ev.data() + ev.size()), energies;
            int stationary = 0;
            Complex total(0);
            for (const auto& s : rep.solutions) {
                energies.push_back(s.energy);
                total += s.energy;
                if (s.stationary) {
                    ++stationary;
                    CHECK(std::abs(s.energy) == 0.0);
                    CHECK(s.choice_id.empty());
                } else {
                    CHECK(s.energy.real() < -1e-9);
                    for (std::size_t a = 0; a < s.z.size(); ++a)
                        for (std::size_t b = a + 1; b < s.z.size(); ++b) CHECK(std::abs(s.z[a] - s.z[b]) > 1e-9);
                }
            }
            CHECK(stationary == 1);
            CHECK(multiset_distance(energies, spec) <= 1e-7);
            CHECK(std::abs(total - Complex(H.trace())) <= 1e-8);
        }
}

TEST_CASE("Bethe roots in the rescaled family") {
    for (int M = 3; M <= 8; ++M)
        for (int N = 1; N <= M / 2; ++N)
            for (double beta : {-0.99, -0.5, -0.1, 0.5, -1.25, -2.5, 3.0}) {
                const auto rep = bethe_solve(M, N, beta);
                INFO("M = " << M << ", N = " << N << ", beta = " << beta);
                CHECK(rep.complete());
                CHECK(rep.max_residual() <= 1e-10);
                for (const auto& s : rep.solutions) CHECK_FALSE(s.stationary);
            }
    // Two solution sets merge into a real double solution here.
    CHECK_FALSE(bethe_solve(6, 2, -2.0).complete());
}

TEST_CASE("companion iteration and continuation agree") {
    for (auto [M, N] : {std::pair{6, 2}, std::pair{5, 2}, std::pair{6, 3}}) {
        const auto a = bethe_solve_companion(M, N, -0.5);
        const auto b = bethe_solve_continuation(M, N, -0.5);
        REQUIRE(a.complete());
        REQUIRE(b.complete());
        for (const auto& s : a.solutions) {
            double best = INFINITY;
            for (const auto& t : b.solutions) {
                double d = 0;
                for (const auto& z : s.z) {
                    double m = INFINITY;
                    for (const auto& w : t.z) m = std::min(m, std::abs(z - w));
                    d = std::max(d, m);
                }
                best = std::min(best, d);
            }
            CHECK(best <= 1e-9);
        }
    }
    // Continuation towards the TASEP point also finds every regular set.
    const auto near = bethe_solve_continuation(6, 2, -0.999);
    CHECK(near.complete());
}

TEST_CASE("serial and parallel Bethe solves agree") {
    const auto a = bethe_solve(7, 3, -1.0, Execution::serial);
    const auto b = bethe_solve(7, 3, -1.0, Execution::parallel);
    REQUIRE(a.solutions.size() == b.solutions.size());
    for (std::size_t i = 0; i < a.solutions.size(); ++i) CHECK(a.solutions[i].z == b.solutions[i].z);
}

TEST_CASE("master oracle") {
    const MasterOracle mo(6, 2);
    CHECK((mo.generator() - to_eigen(oracle::tasep_generator(6, 2))).cwiseAbs().maxCoeff() == 0.0);
    const auto x = parse_configuration("1,2", 6);
    const auto p0 = mo.evolve(x, 0);
    CHECK(std::abs(p0(static_cast<long>(mo.index_of(x))) - 1) < 1e-12);
    CHECK(std::abs(p0.sum() - 1) < 1e-12);
    for (double t : {0.5, 3.0, 20.0}) CHECK(std::abs(mo.evolve(x, t).sum() - 1) < 1e-10);
    const auto pinf = mo.evolve(x, 200);
    for (long i = 0; i < pinf.size(); ++i) CHECK(std::abs(pinf(i) - 1.0 / 15) < 1e-8);
    const MasterOracle series(6, 2, true);
    CHECK(series.used_series());
    CHECK((series.evolve(x, 2.0) - mo.evolve(x, 2.0)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK_THROWS_AS(MasterOracle(13, 2), std::invalid_argument);
}

TEST_CASE("Grothendieck-form Green function matches the oracle") {
    for (auto [M, N] : {std::pair{6, 2}, std::pair{6, 3}, std::pair{5, 2}}) {
        const TasepSpectrum spec(M, N);
        const auto configs = enumerate_configurations(M, N);
        const double inv = 1.0 / static_cast<double>(binomial(M, N));
        double err = 0, err0 = 0, errinf = 0, lo = 1, hi = 0;
        for (double t : {0.1, 1.0, 10.0}) {
            const OracleEvolution P(M, N, t);
            for (const auto& x : configs)
                for (const auto& y : configs) {
                    const double g = spec.green(y, x, t);
                    err = std::max(err, std::abs(g - P(y, x)));
                    lo = std::min(lo, g);
                    hi = std::max(hi, g);
                }
        }
        for (const auto& x : configs)
            for (const auto& y : configs) {
                err0 = std::max(err0, std::abs(spec.green(y, x, 0) - (x == y ? 1.0 : 0.0)));
                errinf = std::max(errinf, std::abs(spec.green(y, x, 200) - inv));
            }
        INFO("M = " << M << ", N = " << N);
        CHECK(err <= 1e-8);
        CHECK(err0 <= 1e-7);
        CHECK(errinf <= 1e-8);
        CHECK(lo >= -1e-8);
        CHECK(hi <= 1 + 1e-8);
        CHECK(std::abs(spec.stationary_term() - inv) < 1e-15);
    }
    const auto from = parse_configuration("1,2", 6), to = parse_configuration("2,4", 6);
    const OracleEvolution P(6, 2, 1.0);
    CHECK(std::abs(green_function({from, to, 1.0}) - P(to, from)) <= 1e-8);
    CHECK_THROWS_AS(green_function({from, parse_configuration("1,2,3", 6), 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(green_function({from, to, -1.0}), std::invalid_argument);
}

TEST_CASE("norm denominators agree with the direct Grothendieck sum") {
    const TasepSpectrum spec(6, 3);
    for (std::size_t s = 0; s < spec.bethe().solutions.size(); ++s) {
        const auto& sol = spec.bethe().solutions[s];
        if (sol.stationary) continue;
        std::vector<Complex> y;
        for (const auto& z : sol.z) y.push_back(Complex(1) / z);
        Complex direct(0);
        for (const auto& g : box_partitions(3, 3))
            direct += grothendieck_eval(g, sol.z, Complex(-1)) * dual_grothendieck_eval(g, y, Complex(-1));
        CHECK(std::abs(spec.norm(s) - direct) <= 1e-9 * std::abs(direct));
    }
}

TEST_CASE("sum rule") {
    const TasepSpectrum spec(6, 2);
    for (const auto& x : spec.configurations()) {
        CHECK(std::abs(spec.sum_rule(x, 1.0) - 1) <= 1e-8);
        CHECK(std::abs(spec.sum_rule(x, 0.0) - 1) <= 1e-8);
    }
    CHECK(std::abs(sum_rule_check(parse_configuration("2,5", 6), 3.0) - 1) <= 1e-8);
}

TEST_CASE("observable expectations match the oracle") {
    const int M = 6, N = 2;
    const TasepSpectrum spec(M, N);
    const MasterOracle mo(M, N);
    const auto x = parse_configuration("1,2", M);
    CHECK(std::abs(spec.expectation(identity_observable(M, N), x, 1.0) - 1) <= 1e-8);
    for (double t = 0; t <= 10.0; t += 0.5) {
        const Eigen::VectorXd p = mo.evolve(x, t);
        for (int i = 1; i <= M; ++i) {
            const double dens = density_observable(M, N, i).colwise().sum().dot(p);
            const double curr = current_observable(M, N, i).colwise().sum().dot(p);
            CHECK(std::abs(spec.expectation(density_observable(M, N, i), x, t) - dens) <= 1e-8);
            CHECK(std::abs(spec.expectation(current_observable(M, N, i), x, t) - curr) <= 1e-8);
            CHECK(std::abs(spec.density_ff(i, x, t) - dens) <= 1e-8);
            CHECK(std::abs(spec.current_ff(i, x, t) - curr) <= 1e-8);
        }
    }
    CHECK(std::abs(expectation(density_observable(M, N, 1), x, 1.0) - density_observable(M, N, 1).colwise().sum().dot(mo.evolve(x, 1.0))) <= 1e-8);
    CHECK_THROWS_AS(spec.expectation(identity_observable(M, 3), x, 1.0), std::invalid_argument);
}

TEST_CASE("hole-string form factor against enumeration") {
    RationalSampler rng(201);
    const int M = 5, N = 2;
    const auto configs = enumerate_configurations(M, N);
    auto enumerate = [&](int l, int n, const std::vector<Complex>& z) {
        const Observable a = hole_string_observable(M, N, l, n);
        Complex s(0);
        for (std::size_t mu = 0; mu < configs.size(); ++mu)
            s += a.col(static_cast<long>(mu)).sum() * grothendieck_eval(config_to_partition(configs[mu]), z, Complex(-1));
        return s;
    };
    for (int draw = 0; draw < 5; ++draw) {
        const std::vector<Complex> z{to_complex(rng.draw()), to_complex(rng.draw())};
        if (z[0] == z[1]) continue;
        CHECK(std::abs(form_factor_sum(1, 1, z, M) - enumerate(1, 1, z)) <= 1e-9 * std::max(1.0, std::abs(enumerate(1, 1, z))));
        // Windows ending at the seam or containing site 1.
        for (auto [l, n] : {std::pair{1, 2}, std::pair{0, 1}, std::pair{-1, 2}, std::pair{0, 3}, std::pair{1, 5}}) {
            const Complex e = enumerate(l, n, z);
            CHECK(std::abs(form_factor_sum(l, n, z, M) - e) <= 1e-9 * std::max(1.0, std::abs(e)));
        }
        // No hole string reduces to the summation formula at beta = -1.
        CHECK(std::abs(form_factor_sum(1, 0, z, M) - grothendieck_sum_rhs(M, z, Complex(-1))) <= 1e-10 * std::max(1.0, std::abs(enumerate(1, 0, z))));
        CHECK(std::abs(form_factor_sum(1, M, z, M)) == 0.0);
    }
    // On-shell every window works.
    const auto rep = bethe_solve(M, N);
    for (const auto& s : rep.solutions) {
        if (s.stationary) continue;
        for (int l = 1; l <= M; ++l)
            for (int n = 0; n <= 3; ++n) CHECK(std::abs(form_factor_sum(l, n, s.z, M) - enumerate(l, n, s.z)) <= 1e-9);
    }
    CHECK_THROWS_AS(form_factor_sum(-2, 1, std::vector<Complex>{0.5, 0.25}, M), std::invalid_argument);
    CHECK_THROWS_AS(form_factor_sum(1, 6, std::vector<Complex>{0.5, 0.25}, M), std::invalid_argument);
}
