#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "trsc/series.hpp"

using trsc::CoefficientSequence;
using trsc::complex;

namespace {

constexpr double kPi = std::numbers::pi;

// Taylor coefficients of P/Q by long division, Q_0 != 0.
std::vector<complex> formal_divide(const std::vector<complex>& P, const std::vector<complex>& Q, std::size_t N)
{
    std::vector<complex> b(N + 1);
    for (std::size_t m = 0; m <= N; ++m) {
        complex acc = m < P.size() ? P[m] : complex{};
        for (std::size_t j = 1; j <= m && j < Q.size(); ++j)
            acc -= Q[j] * b[m - j];
        b[m] = acc / Q[0];
    }
    return b;
}

std::vector<complex> poly_mul(const std::vector<complex>& a, const std::vector<complex>& b)
{
    std::vector<complex> c(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] += a[i] * b[j];
    return c;
}

// m-th Taylor coefficient of F from M samples on the circle of radius r.
template <typename F>
std::vector<complex> cauchy_coefficients(F f, double r, std::size_t count, std::size_t M)
{
    std::vector<complex> values(M);
    for (std::size_t j = 0; j < M; ++j)
        values[j] = f(std::polar(r, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(M)));
    std::vector<complex> out(count);
    for (std::size_t m = 0; m < count; ++m) {
        complex acc{};
        for (std::size_t j = 0; j < M; ++j)
            acc += values[j] * std::polar(1.0, -2.0 * kPi * static_cast<double>(m * j % M) / static_cast<double>(M));
        out[m] = acc / static_cast<double>(M) / std::pow(r, static_cast<double>(m));
    }
    return out;
}

CoefficientSequence random_series(std::mt19937_64& rng, std::size_t N, double scale)
{
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<complex> c(N + 1);
    for (auto& x : c)
        x = {u(rng), u(rng)};
    return CoefficientSequence(std::move(c));
}

double max_diff(const CoefficientSequence& a, const CoefficientSequence& b)
{
    double d = 0.0;
    const std::size_t n = std::max(a.size(), b.size());
    for (std::size_t m = 0; m < n; ++m)
        d = std::max(d, std::abs(a.at_or_zero(m) - b.at_or_zero(m)));
    return d;
}

} // namespace

TEST_CASE("coefficient sequences reject empty and non-finite input")
{
    CHECK_THROWS_AS(CoefficientSequence(std::vector<complex>{}), std::invalid_argument);
    CHECK_THROWS_AS((CoefficientSequence{1.0, std::numeric_limits<double>::quiet_NaN()}), std::domain_error);
    CHECK_THROWS_AS((CoefficientSequence{complex{0.0, std::numeric_limits<double>::infinity()}}),
                    std::domain_error);
    const auto z = CoefficientSequence::zero(5);
    CHECK(z.size() == 6);
    CHECK(z.degree() == 5);
    CHECK(z.at_or_zero(17) == complex{});
}

TEST_CASE("log symbol has coefficients 1/m")
{
    const auto L = trsc::log_symbol(100);
    REQUIRE(L.degree() == 100);
    CHECK(L[0] == complex{});
    for (std::size_t m = 1; m <= 100; ++m)
        CHECK(L[m] == complex{1.0 / static_cast<double>(m), 0.0});
    CHECK_THROWS(trsc::log_symbol(0));
    // partial sums of log(1/(1-z)) at z = 0.5 approach log 2
    CHECK(std::abs(L.evaluate(0.5) - std::log(2.0)) < 1e-15 * 100);
}

TEST_CASE("blaschke coefficients match formal division")
{
    const std::vector<std::vector<double>> cases{{0.3, 0.7}, {0.0}, {0.5}, {0.1, 0.45, 0.9}};
    for (const auto& zeros : cases) {
        const std::size_t N = 60;
        std::vector<complex> P{1.0}, Q{1.0};
        for (double a : zeros) {
            P = poly_mul(P, {a, -1.0});
            Q = poly_mul(Q, {1.0, -a});
        }
        const auto oracle = formal_divide(P, Q, N);
        const auto B = trsc::blaschke_symbol(zeros, N);
        REQUIRE(B.degree() == N);
        for (std::size_t m = 0; m <= N; ++m)
            CHECK(std::abs(B[m] - oracle[m]) < 1e-13);
    }
}

TEST_CASE("blaschke product matches closed form at z = 0.1 and boundary quadrature")
{
    const std::vector<double> zeros{0.3, 0.7};
    const auto B = trsc::blaschke_symbol(zeros, 200);
    auto closed = [&](complex z) {
        complex v = 1.0;
        for (double a : zeros)
            v *= (a - z) / (1.0 - a * z);
        return v;
    };
    CHECK(std::abs(B.evaluate(0.1) - closed(0.1)) < 1e-15);
    CHECK(std::abs(B.evaluate(complex{0.2, -0.3}) - closed(complex{0.2, -0.3})) < 1e-14);

    const auto boundary = cauchy_coefficients(closed, 1.0, 40, 1024);
    for (std::size_t m = 0; m < 40; ++m)
        CHECK(std::abs(B[m] - boundary[m]) < 1e-12);

    // inner: unit modulus on the circle
    for (int j = 0; j < 16; ++j)
        CHECK(std::abs(std::abs(closed(std::polar(1.0, 0.4 * j))) - 1.0) < 1e-14);
}

TEST_CASE("blaschke rejects zeros outside [0,1)")
{
    const std::vector<double> bad1{1.0}, bad2{-0.1};
    CHECK_THROWS_AS(trsc::blaschke_symbol(bad1, 8), std::domain_error);
    CHECK_THROWS_AS(trsc::blaschke_symbol(bad2, 8), std::domain_error);
}

TEST_CASE("series product is commutative, associative and distributive")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = random_series(rng, 40, 1.0);
        const auto g = random_series(rng, 33, 1.0);
        const auto h = random_series(rng, 47, 1.0);
        const std::size_t N = 45;
        CHECK(max_diff(trsc::series_multiply(f, g, N), trsc::series_multiply(g, f, N)) < 1e-12);
        CHECK(max_diff(trsc::series_multiply(trsc::series_multiply(f, g, N), h, N),
                       trsc::series_multiply(f, trsc::series_multiply(g, h, N), N)) < 1e-11);
        std::vector<complex> gh(N + 1);
        for (std::size_t m = 0; m <= N; ++m)
            gh[m] = g.at_or_zero(m) + h.at_or_zero(m);
        const auto lhs = trsc::series_multiply(f, CoefficientSequence(gh), N);
        const auto a = trsc::series_multiply(f, g, N);
        const auto b = trsc::series_multiply(f, h, N);
        std::vector<complex> sum(N + 1);
        for (std::size_t m = 0; m <= N; ++m)
            sum[m] = a[m] + b[m];
        CHECK(max_diff(lhs, CoefficientSequence(sum)) < 1e-12);
    }
}

TEST_CASE("exp(f) exp(-f) = 1")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t N = 64;
        const auto f = random_series(rng, N, 0.5);
        const auto e1 = trsc::series_exp(f, N);
        const auto e2 = trsc::series_exp(f.scaled(-1.0), N);
        const auto prod = trsc::series_multiply(e1, e2, N);
        CHECK(std::abs(prod[0] - 1.0) < 1e-10);
        for (std::size_t m = 1; m <= N; ++m)
            CHECK(std::abs(prod[m]) < 1e-10);
    }
}

TEST_CASE("exp satisfies the derivative identity (e^f)' = f' e^f")
{
    std::mt19937_64 rng(6);
    const std::size_t N = 50;
    const auto f = random_series(rng, N, 0.7);
    const auto E = trsc::series_exp(f, N);
    for (std::size_t m = 1; m <= N; ++m) {
        complex rhs{};
        for (std::size_t j = 1; j <= m; ++j)
            rhs += static_cast<double>(j) * f[j] * E[m - j];
        CHECK(std::abs(static_cast<double>(m) * E[m] - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
    }
    CHECK(std::abs(E[0] - std::exp(f[0])) < 1e-15);
}

TEST_CASE("singular inner function matches Cauchy coefficients at r = 0.9")
{
    const std::size_t N = 300;
    std::vector<complex> c(N + 1, complex{-2.0, 0.0});
    c[0] = -1.0; // -(1+z)/(1-z) = -1 - 2 sum z^m
    const auto S = trsc::series_exp(CoefficientSequence(c), N);
    auto closed = [](complex z) { return std::exp(-(1.0 + z) / (1.0 - z)); };
    const auto oracle = cauchy_coefficients(closed, 0.9, 30, 4096);
    for (std::size_t m = 0; m < 30; ++m)
        CHECK(std::abs(S[m] - oracle[m]) < 1e-10);
    // bounded by 1 in the disc, so every Taylor coefficient is at most 1
    for (std::size_t m = 0; m <= N; ++m)
        CHECK(std::abs(S[m]) <= 1.0 + 1e-12);
}

TEST_CASE("exp overflows loudly")
{
    CHECK_THROWS_AS(trsc::series_exp(CoefficientSequence{800.0, 1.0}, 4), std::overflow_error);
}

TEST_CASE("backward shift drops the constant term")
{
    const CoefficientSequence f{3.0, 1.0, complex{0.0, 2.0}, 4.0};
    const auto s = trsc::backward_shift(f);
    REQUIRE(s.size() == 3);
    CHECK(s[0] == complex{1.0});
    CHECK(s[1] == complex{0.0, 2.0});
    CHECK(s[2] == complex{4.0});
    CHECK_THROWS(trsc::backward_shift(CoefficientSequence{1.0}));
    // z S*f + f(0) = f
    const complex z{0.3, 0.2};
    CHECK(std::abs(z * s.evaluate(z) + f[0] - f.evaluate(z)) < 1e-15);
}

TEST_CASE("coefficient CSV round trip is exact")
{
    std::mt19937_64 rng(9);
    const auto f = random_series(rng, 30, 1e3);
    std::stringstream ss;
    trsc::write_csv(ss, f);
    const auto g = trsc::read_coefficients_csv(ss);
    REQUIRE(g.size() == f.size());
    for (std::size_t m = 0; m < f.size(); ++m)
        CHECK(g[m] == f[m]);

    std::stringstream bad("index,real,imag\n0,1.0,zz\n");
    CHECK_THROWS(trsc::read_coefficients_csv(bad));
}
