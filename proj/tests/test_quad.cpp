#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "hammerfix/quad.hpp"

using namespace hammerfix;
using quad::binomial;
using quad::compute_coefficients;
using quad::integrate;
using quad::KernelSpec;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Model kernel a + b*t*u as expressions: phi1=1, psi1=a, phi2=t, psi2=b*t.
KernelSpec model_kernel(double a, double b, int k) {
    return KernelSpec{expr::Expression::parse("1"), expr::Expression::parse("t"),
                      expr::Expression::parse(num(a)),
                      expr::Expression::parse(num(b) + "*t"), k};
}

}  // namespace

TEST_CASE("integrate: monomials and constants") {
    CHECK(integrate([](double) { return 1.0; }, 1e-12) == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i <= 8; ++i) {
        double got = integrate([i](double u) { return std::pow(u, i); }, 1e-12);
        CHECK(got == doctest::Approx(1.0 / (i + 1)).epsilon(1e-11));
    }
    CHECK(integrate([](double u) { return u * u * u; }, 1e-12) == doctest::Approx(0.25));
}

TEST_CASE("integrate: exp against the closed-form antiderivative") {
    double got = integrate([](double u) { return std::exp(u); }, 1e-12);
    CHECK(std::fabs(got - (std::exp(1.0) - 1.0)) < 1e-12);
}

TEST_CASE("integrate rejects bad tolerance") {
    CHECK_THROWS(integrate([](double) { return 1.0; }, 0.0));
}

TEST_CASE("binomial: boundaries and small cases") {
    CHECK(binomial(2, 0) == 1);
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(10, 5) == 252);
    CHECK(binomial(64, 32) == 1832624140942590534ULL);
    CHECK_THROWS(binomial(3, 5));
    CHECK_THROWS(binomial(200, 100));  // overflows 64 bits
}

TEST_CASE("binomial agrees with a Pascal-triangle oracle") {
    unsigned long long pascal[21][21] = {};
    for (int n = 0; n <= 20; ++n) {
        pascal[n][0] = pascal[n][n] = 1;
        for (int i = 1; i < n; ++i) pascal[n][i] = pascal[n - 1][i - 1] + pascal[n - 1][i];
    }
    for (int n = 0; n <= 20; ++n)
        for (int i = 0; i <= n; ++i)
            CHECK(binomial(n, i) == pascal[n][i]);
}

TEST_CASE("coefficients for the a + b*t*u kernel match the closed forms") {
    // a[i] = a C(k,i)/(i+1), b[i] = b C(k,i)/(i+2)
    for (double a : {0.1, 1.0, 10.0}) {
        for (double b : {0.1, 1.0, 10.0}) {
            for (int k = 2; k <= 8; ++k) {
                auto c = compute_coefficients(model_kernel(a, b, k), 1e-10);
                for (int i = 0; i <= k; ++i) {
                    double binom = static_cast<double>(binomial(k, i));
                    CHECK(std::fabs(c.a[i] - a * binom / (i + 1)) < 1e-10);
                    CHECK(std::fabs(c.b[i] - b * binom / (i + 2)) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("worked case k=2, a=b=1") {
    auto c = compute_coefficients(model_kernel(1.0, 1.0, 2), 1e-12);
    CHECK(c.a[0] == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(c.a[1] == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(c.a[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-11));
    CHECK(c.b[0] == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(c.b[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
    CHECK(c.b[2] == doctest::Approx(0.25).epsilon(1e-11));
    // d_i = a_{i-1} - b_i exactly as stored
    CHECK(c.d_at(1) == c.a[0] - c.b[1]);
    CHECK(c.d_at(2) == c.a[1] - c.b[2]);
}

TEST_CASE("all-constant kernel gives binomial coefficients") {
    KernelSpec ones{expr::Expression::parse("1"), expr::Expression::parse("1"),
                    expr::Expression::parse("1"), expr::Expression::parse("1"), 2};
    auto c = compute_coefficients(ones, 1e-12);
    CHECK(c.a[0] == doctest::Approx(1.0));
    CHECK(c.a[1] == doctest::Approx(2.0));
    CHECK(c.a[2] == doctest::Approx(1.0));
    for (int i = 0; i <= 2; ++i) CHECK(c.a[i] == doctest::Approx(c.b[i]));
}

TEST_CASE("scaling psi1 scales a and leaves b fixed") {
    auto base = compute_coefficients(
        KernelSpec{expr::Expression::parse("1+t"), expr::Expression::parse("exp(t)"),
                   expr::Expression::parse("1"), expr::Expression::parse("t+0.5"), 3},
        1e-11);
    auto scaled = compute_coefficients(
        KernelSpec{expr::Expression::parse("1+t"), expr::Expression::parse("exp(t)"),
                   expr::Expression::parse("7"), expr::Expression::parse("t+0.5"), 3},
        1e-11);
    for (int i = 0; i <= 3; ++i) {
        CHECK(scaled.a[i] == doctest::Approx(7.0 * base.a[i]).epsilon(1e-9));
        CHECK(scaled.b[i] == doctest::Approx(base.b[i]).epsilon(1e-9));
    }
}

TEST_CASE("swapping phi1 and phi2 reverses the a coefficients") {
    auto c = compute_coefficients(
        KernelSpec{expr::Expression::parse("1+t"), expr::Expression::parse("2-t"),
                   expr::Expression::parse("exp(t)"), expr::Expression::parse("1"), 4},
        1e-11);
    auto swapped = compute_coefficients(
        KernelSpec{expr::Expression::parse("2-t"), expr::Expression::parse("1+t"),
                   expr::Expression::parse("exp(t)"), expr::Expression::parse("1"), 4},
        1e-11);
    for (int i = 0; i <= 4; ++i)
        CHECK(swapped.a[i] == doctest::Approx(c.a[4 - i]).epsilon(1e-9));
}

TEST_CASE("positivity is required") {
    // psi1 integrates the odd part of sin against symmetric weights to ~0
    KernelSpec degenerate{expr::Expression::parse("1"), expr::Expression::parse("t"),
                          expr::Expression::parse("0.0000000001"),
                          expr::Expression::parse("1"), 2};
    CHECK_THROWS_WITH_AS(compute_coefficients(degenerate, 1e-8),
                         doctest::Contains("degenerate coefficient"),
                         quad::QuadratureError);
}

TEST_CASE("kernel validation rejects sign-changing factors") {
    KernelSpec bad{expr::Expression::parse("1"), expr::Expression::parse("t"),
                   expr::Expression::parse("t-1"), expr::Expression::parse("1"), 2};
    CHECK_THROWS(bad.validate());
    CHECK_THROWS(KernelSpec{expr::Expression::parse("1"), expr::Expression::parse("t"),
                            expr::Expression::parse("1"), expr::Expression::parse("1"), 1}
                     .validate());
}
