#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "fv/identities.hpp"
#include "fv/parallel.hpp"
#include "fv/random.hpp"
#include "fv/tasep.hpp"

using namespace fv;

TEST_CASE("index loops visit every index once and rethrow") {
    for (std::size_t n : {0u, 1u, 7u, 1000u}) {
        std::vector<std::atomic<int>> hits(n);
        for_each_index(n, Execution::parallel, [&](std::size_t i) { hits[i]++; });
        for (auto& h : hits) CHECK(h.load() == 1);
    }
    CHECK_THROWS_AS(for_each_index(100, Execution::parallel,
                                   [](std::size_t i) {
                                       if (i == 37) throw std::domain_error("boom");
                                   }),
                    std::domain_error);
    const double s = ordered_sum(1000, Execution::parallel, 0.0, [](std::size_t i) { return 1.0 / (1.0 + i); });
    const double r = ordered_sum(1000, Execution::serial, 0.0, [](std::size_t i) { return 1.0 / (1.0 + i); });
    CHECK(s == r);
}

TEST_CASE("thread count override") {
    set_thread_count(3);
    CHECK(thread_count() == 3);
    set_thread_count(0);
    setenv("BETHE_GROTH_THREADS", "2", 1);
    CHECK(thread_count() == 2);
    unsetenv("BETHE_GROTH_THREADS");
    CHECK(thread_count() >= 1);
}

TEST_CASE("exact sums are identical in both execution modes") {
    RationalSampler rng(301);
    for (int M = 3; M <= 7; ++M) {
        const std::vector<Rational> z{rng.draw(), rng.draw() + 20}, y{rng.draw(), rng.draw() + 20};
        const Rational beta = rng.draw();
        CHECK(cauchy_lhs(M, 2, z, y, beta, Execution::serial) == cauchy_lhs(M, 2, z, y, beta, Execution::parallel));
        CHECK(grothendieck_sum_lhs(M, z, beta, Execution::serial) == grothendieck_sum_lhs(M, z, beta, Execution::parallel));
    }
}

TEST_CASE("floating-point kernels are bitwise identical in both execution modes") {
    const std::vector<Complex> z{0.3, Complex(0.1, 0.2)}, y{0.2, -0.4};
    const auto a = cauchy_infinite_check(2, z, y, Complex(0.3), 20, 1e-10, Execution::serial);
    const auto b = cauchy_infinite_check(2, z, y, Complex(0.3), 20, 1e-10, Execution::parallel);
    CHECK(a.partial_sums == b.partial_sums);

    const int M = 6, N = 2;
    const auto parts = box_partitions(M - N, N);
    const auto roots = bethe_solve(M, N, -0.5, Execution::serial);
    CHECK(roots.solutions.size() == bethe_solve(M, N, -0.5, Execution::parallel).solutions.size());
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(orthogonality_check(roots, parts[i], parts[2], Execution::serial).value ==
              orthogonality_check(roots, parts[i], parts[2], Execution::parallel).value);

    const TasepSpectrum s(M, N, Execution::serial), p(M, N, Execution::parallel);
    for (const auto& x : s.configurations())
        for (double t : {0.3, 4.0}) {
            CHECK(s.green(x, s.configurations()[3], t) == p.green(x, p.configurations()[3], t));
            CHECK(s.density_ff(2, x, t) == p.density_ff(2, x, t));
        }
}
