#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fv/determinant.hpp"
#include "fv/random.hpp"
#include "oracles.hpp"

using namespace fv;

namespace {

Matrix<Rational> random_matrix(RationalSampler& rng, std::size_t n) {
    Matrix<Rational> m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = rng.draw();
    return m;
}

}  // namespace

TEST_CASE("determinant examples") {
    CHECK(det(Matrix<Rational>::identity(2)) == 1);
    CHECK(det(Matrix<Rational>{{1, 2}, {3, 4}}) == -2);
    Matrix<Rational> v(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) v(r, c) = ipow(Rational(r + 1), c);
    CHECK(det(v) == 2);
    CHECK(std::abs(det(Matrix<Complex>{{1.0, 2.0}, {3.0, 4.0}}) - Complex(-2.0)) < 1e-14);
    CHECK_THROWS_AS(det(Matrix<Rational>(2, 3)), std::invalid_argument);
}

TEST_CASE("fraction-free determinant agrees with cofactor expansion") {
    RationalSampler rng(11);
    for (std::size_t n = 1; n <= 6; ++n)
        for (int trial = 0; trial < 5; ++trial) {
            auto m = random_matrix(rng, n);
            if (trial == 0 && n > 1) m(0, 0) = 0;  // forces a pivot swap
            CHECK(det(m) == oracle::det_cofactor(m));
        }
}

TEST_CASE("determinant alternates under row swaps and is linear in a row") {
    RationalSampler rng(12);
    for (std::size_t n = 2; n <= 5; ++n) {
        auto m = random_matrix(rng, n);
        auto s = m;
        s.swap_rows(0, n - 1);
        CHECK(det(s) == -det(m));
        auto a = m, b = m, sum = m;
        for (std::size_t c = 0; c < n; ++c) {
            b(1, c) = rng.draw();
            sum(1, c) = a(1, c) + b(1, c);
        }
        CHECK(det(sum) == det(a) + det(b));
    }
}

TEST_CASE("complex LU determinant matches cofactor expansion") {
    RationalSampler rng(13);
    for (std::size_t n = 1; n <= 6; ++n) {
        Matrix<Complex> m(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) m(r, c) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        CHECK(std::abs(det(m) - oracle::det_cofactor(m)) < 1e-12);
    }
}

TEST_CASE("inverse") {
    RationalSampler rng(14);
    auto m = random_matrix(rng, 4);
    CHECK(inverse(m) * m == Matrix<Rational>::identity(4));
    CHECK_THROWS_AS(inverse(Matrix<Rational>{{1, 2}, {2, 4}}), std::domain_error);
}

TEST_CASE("series arithmetic") {
    const auto x = Series<Rational>::variable(4, Rational(2));
    const auto p = x * x * x;  // 8 + 12h + 6h^2 + h^3
    CHECK(p[0] == 8);
    CHECK(p[1] == 12);
    CHECK(p[2] == 6);
    CHECK(p[3] == 1);
    const auto q = p / x;
    CHECK(q[0] == 4);
    CHECK(q[1] == 4);
    CHECK(q[2] == 1);
    CHECK(q[3] == 0);
    const auto r = x.pow(-2);
    CHECK(r[0] == make_rational(1, 4));
    CHECK(r[1] == make_rational(-1, 4));
    CHECK(p.evaluate(Rational(1)) == 27);
    // (x^2 - 4)/(x - 2) at x = 2 is 4.
    const auto num = x * x - Rational(4);
    const auto den = x - Rational(2);
    CHECK(removable_divide(num, den)[0] == 4);
    CHECK_THROWS_AS(removable_divide(x, den), std::domain_error);
}

TEST_CASE("confluent determinant ratio") {
    // Proportional rows when both points coincide.
    auto phi = [](const Series<Rational>& u, const Rational& v) { return u * u * v; };
    CHECK(confluent_det_ratio(phi, std::vector<Rational>{3, 3}, std::vector<Rational>{2, 5}) == 0);

    // Distinct points give det / Vandermonde.
    RationalSampler rng(15);
    for (int n = 1; n <= 4; ++n) {
        std::vector<Rational> u, v;
        for (int i = 0; i < n; ++i) {
            u.push_back(rng.draw());
            v.push_back(rng.draw());
        }
        auto g = [](const Series<Rational>& x, const Rational& y) { return (x * y + Rational(1)).pow(3); };
        Matrix<Rational> m(n, n);
        Rational vdm(1);
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) m(j, k) = ipow(Rational(u[j] * v[k] + 1), 3);
            for (int k = j + 1; k < n; ++k) vdm *= u[k] - u[j];
        }
        CHECK(confluent_det_ratio(g, u, v) == det(m) / vdm);
    }

    // Monomial columns give the Vandermonde itself, so the ratio is 1 for any grouping.
    auto mono = [](const Series<Rational>& x, std::size_t k) { return x.pow(static_cast<long>(k)); };
    CHECK(confluent_det_ratio_columns(mono, std::vector<Rational>{2, 2, 5, 2, 5}, 5) == 1);
}

TEST_CASE("confluent limit matches Richardson-extrapolated numeric limit") {
    // Phi(u,v) = (1+uv)^2, u1,u2 -> 1, v = (2,3).
    auto phi = [](const Series<Rational>& u, const Rational& v) { return (u * v + Rational(1)).pow(2); };
    const Rational exact = confluent_det_ratio(phi, std::vector<Rational>{1, 1}, std::vector<Rational>{2, 3});
    auto ratio = [](double eps) {
        const double u1 = 1.0, u2 = 1.0 + eps;
        auto p = [](double u, double v) { return (1 + u * v) * (1 + u * v); };
        return (p(u1, 2) * p(u2, 3) - p(u1, 3) * p(u2, 2)) / (u2 - u1);
    };
    const double r1 = ratio(1e-4), r2 = ratio(1e-5);
    const double extrapolated = (10.0 * r2 - r1) / 9.0;
    CHECK(std::fabs(extrapolated - exact.get_d()) < 1e-6);

    // Complex grouping uses a tolerance.
    auto phic = [](const Series<Complex>& u, const Complex& v) { return (u * v + Complex(1)).pow(2); };
    const Complex c = confluent_det_ratio(phic, std::vector<Complex>{1.0, 1.0 + 1e-14}, std::vector<Complex>{2.0, 3.0});
    CHECK(std::abs(c - to_complex(exact)) < 1e-9);
}

TEST_CASE("rational parsing and printing") {
    CHECK(parse_rational("3/6") == make_rational(1, 2));
    CHECK(parse_rational("-2") == -2);
    CHECK(parse_rational("-0.25") == make_rational(-1, 4));
    CHECK(to_string(make_rational(-3, 4)) == "-3/4");
    CHECK(to_string(Rational(5)) == "5");
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("abc"));
}
