#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "trsc/matrices.hpp"

using namespace trsc;

namespace {

CoefficientSequence random_symbol(std::mt19937_64& rng, std::size_t N)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<complex> c(N + 1);
    for (auto& x : c)
        x = {u(rng), u(rng)};
    return CoefficientSequence(std::move(c));
}

FiniteSection shift(std::size_t N)
{
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    for (std::size_t n = 1; n < N; ++n)
        m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n - 1)) = 1.0;
    return FiniteSection(std::move(m), Structure::LowerTriangular);
}

} // namespace

TEST_CASE("finite sections validate their input")
{
    CHECK_THROWS(FiniteSection(ComplexMatrix::Zero(2, 3), Structure::General));
    CHECK_THROWS(FiniteSection(ComplexMatrix::Zero(0, 0), Structure::General));
    ComplexMatrix m = ComplexMatrix::Identity(3, 3);
    m(0, 2) = 1.0;
    CHECK_THROWS(FiniteSection(m, Structure::LowerTriangular));
    CHECK_NOTHROW(FiniteSection(m, Structure::General));
    m(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(FiniteSection(m, Structure::General));

    const auto I = FiniteSection::identity(4);
    CHECK(I.is_lower_triangular());
    CHECK(I.is_real());
    CHECK(I.is_nonnegative());
    CHECK(I(2, 2) == complex{1.0});
}

TEST_CASE("structured sections have the documented entries")
{
    const std::size_t N = 20;
    const auto C = build_structured(kinds::Cesaro{}, N);
    const auto F = build_structured(kinds::Fejer{}, N);
    const auto L = build_structured(kinds::LowerOnes{}, N);
    const auto H = build_structured(kinds::HilbertTransform{}, N);
    const auto R = build_structured(kinds::RicardE{}, N);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t k = 0; k < N; ++k) {
            const double nd = static_cast<double>(n), kd = static_cast<double>(k);
            if (k <= n) {
                CHECK(C(n, k).real() == doctest::Approx(1.0 / (nd + 1.0)));
                CHECK(F(n, k).real() == doctest::Approx(1.0 - kd / (nd + 1.0)));
                CHECK(L(n, k) == complex{1.0});
            } else {
                CHECK(C(n, k) == complex{});
                CHECK(F(n, k) == complex{});
                CHECK(L(n, k) == complex{});
            }
            CHECK(H(n, k) == -H(k, n));
            if (n != k)
                CHECK(H(n, k).real() == doctest::Approx(1.0 / (nd - kd)));
            CHECK(R(n, k).real() == doctest::Approx((kd + 1.0) / (kd + nd + 1.0)));
        }
    CHECK(C.is_lower_triangular());
    CHECK_FALSE(H.is_lower_triangular());

    const auto F2 = build_structured(kinds::FejerPower{2.0}, N);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t k = 0; k <= n; ++k)
            CHECK(F2(n, k).real() == doctest::Approx(F(n, k).real() * F(n, k).real()));
}

TEST_CASE("name based construction")
{
    SectionParams params;
    params.lambda = {1.0, 1.0};
    params.sequence = {1.0, 0.5};
    CHECK(max_abs_difference(build_structured("cesaro", 8, params), build_structured(kinds::Cesaro{}, 8)) == 0.0);
    CHECK(max_abs_difference(build_structured("e_lambda", 8, params),
                             build_structured(kinds::ELambda{params.lambda}, 8)) == 0.0);
    const auto T = build_structured("toeplitz_lower", 4, params);
    CHECK(T(3, 3) == complex{1.0});
    CHECK(T(3, 2) == complex{0.5});
    CHECK(T(3, 0) == complex{}); // zero padded
    CHECK_THROWS_AS(build_structured("no_such_kind", 8, params), std::invalid_argument);
    params.lambda = {-1.0, 2.0};
    CHECK_THROWS(build_structured("e_lambda", 8, params));
    CHECK_THROWS(build_structured(kinds::ELambda{complex{0.0, 1.0}}, 8));
    CHECK_THROWS(build_structured(kinds::Cesaro{}, 0));
}

TEST_CASE("kernel multiplier with the fejer generating function is the fejer section")
{
    const auto K = build_structured(kinds::KernelMultiplier{KernelSpec::fejer()}, 30);
    CHECK(max_abs_difference(K, build_structured(kinds::Fejer{}, 30)) < 1e-15);
}

TEST_CASE("hankel sections are symmetric")
{
    std::vector<complex> alpha;
    for (int m = 0; m < 59; ++m)
        alpha.push_back(complex{1.0 / (m + 1), 0.1 * m});
    const auto H = build_structured(kinds::Hankel{alpha}, 30);
    for (std::size_t n = 0; n < 30; ++n)
        for (std::size_t k = 0; k < 30; ++k) {
            CHECK(H(n, k) == H(k, n));
            CHECK(H(n, k) == alpha[n + k]);
        }
}

TEST_CASE("hadamard and triangular truncation")
{
    const auto H = build_structured(kinds::HilbertTransform{}, 16);
    const auto L = build_structured(kinds::LowerOnes{}, 16);
    const auto P = triangular_truncation(H);
    CHECK(P.is_lower_triangular());
    CHECK(max_abs_difference(hadamard(H, L), P) == 0.0);
    CHECK(max_abs_difference(triangular_truncation(P), P) == 0.0);
    // Pi(A) + strictly upper part of A = A
    const auto U = subtract(H, P);
    for (std::size_t n = 0; n < 16; ++n)
        for (std::size_t k = 0; k <= n; ++k)
            CHECK(U(n, k) == complex{});
    CHECK(max_abs_difference(transpose(transpose(H)), H) == 0.0);
    CHECK_THROWS(hadamard(H, build_structured(kinds::LowerOnes{}, 15)));
    CHECK_THROWS(max_abs_difference(H, build_structured(kinds::LowerOnes{}, 3)));
}

TEST_CASE("factorization C_g = F o M_{S*g} for random symbols")
{
    std::mt19937_64 rng(2024);
    const std::size_t N = 64;
    const auto F = build_structured(kinds::Fejer{}, N);
    for (double p : {2.0, 3.0, 1.5}) {
        for (const auto& omega : {WeightSequence::unit(N), WeightSequence::dirichlet(N)}) {
            for (int trial = 0; trial < 50; ++trial) {
                const auto g = random_symbol(rng, N);
                const auto lhs = cesaro_operator_matrix(g, N, omega, p);
                const auto rhs = weight_conjugate(hadamard(F, multiplication_matrix(backward_shift(g), N)), omega, p);
                CHECK(max_abs_difference(lhs, rhs) < 1e-12);
            }
        }
    }
}

TEST_CASE("log symbol reproduces the Cesaro matrix to a few ulps")
{
    for (std::size_t N : {8u, 64u, 300u}) {
        const auto CL = cesaro_operator_matrix(log_symbol(N), N, WeightSequence::unit(N), 2.0);
        const auto C = build_structured(kinds::Cesaro{}, N);
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t k = 0; k <= n; ++k)
                CHECK(std::abs(CL(n, k) - C(n, k)) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(C(n, k)));
    }
}

TEST_CASE("volterra section is the shifted cesaro section")
{
    std::mt19937_64 rng(3);
    const std::size_t N = 40;
    const auto g = random_symbol(rng, N);
    const auto unit = WeightSequence::unit(N);
    const auto V = volterra_operator_matrix(g, N, unit, 2.0);
    const auto C = cesaro_operator_matrix(g, N, unit, 2.0);
    const ComplexMatrix SC = shift(N).entries() * C.entries();
    CHECK((V.entries() - SC).cwiseAbs().maxCoeff() < 1e-14);
    for (std::size_t n = 0; n < N; ++n)
        CHECK(V(n, n) == complex{});
}

TEST_CASE("multiplication sections intertwine: M_g M_h = M_{gh}")
{
    std::mt19937_64 rng(4);
    const std::size_t N = 32;
    const auto g = random_symbol(rng, N);
    const auto h = random_symbol(rng, N);
    const ComplexMatrix prod = multiplication_matrix(g, N).entries() * multiplication_matrix(h, N).entries();
    const auto gh = multiplication_matrix(series_multiply(g, h, N), N);
    CHECK((prod - gh.entries()).cwiseAbs().maxCoeff() < 1e-12);
    // and commute with the shift
    const auto S = shift(N).entries();
    const auto M = multiplication_matrix(g, N).entries();
    CHECK((S * M - M * S).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("weights")
{
    CHECK_THROWS(WeightSequence({}));
    CHECK_THROWS(WeightSequence({1.0, 0.0}));
    CHECK_THROWS(WeightSequence({1.0, -2.0}));
    const auto d = WeightSequence::dirichlet(5);
    REQUIRE(d.size() == 5);
    CHECK(d[4] == 5.0);
    CHECK(d.ratio_diagnostic() == doctest::Approx(0.5));
    CHECK(WeightSequence::unit(7).ratio_diagnostic() == 0.0);

    std::stringstream one("value\n1\n2\n4\n");
    CHECK(read_weights_csv(one).values()[2] == 4.0);
    std::stringstream two("index,value\n0,1.5\n1,2.5\n");
    const auto w = read_weights_csv(two);
    CHECK(w.size() == 2);
    CHECK(w[1] == 2.5);

    const auto A = build_structured(kinds::Cesaro{}, 5);
    CHECK_THROWS(weight_conjugate(A, WeightSequence::unit(4), 2.0));
    CHECK_THROWS(weight_conjugate(A, WeightSequence::unit(5), 1.0));
    // conjugating by omega and then by 1/omega is the identity map
    std::vector<double> inv;
    for (double x : d.values())
        inv.push_back(1.0 / x);
    const auto back = weight_conjugate(weight_conjugate(A, d, 2.0), WeightSequence(inv), 2.0);
    CHECK(max_abs_difference(back, A) < 1e-15);
}

TEST_CASE("E_lambda splits into X + Y^T exactly")
{
    for (complex lambda : {complex{1.0, 1.0}, complex{0.5, 0.0}, complex{2.0, -3.0}}) {
        const std::size_t N = 50;
        const auto split = e_lambda_split(lambda, N);
        const auto E = build_structured(kinds::ELambda{lambda}, N);
        CHECK(split.lower.is_lower_triangular());
        CHECK(split.upper.is_lower_triangular());
        CHECK(max_abs_difference(add(split.lower, transpose(split.upper)), E) == 0.0);
        for (std::size_t n = 0; n < N; ++n)
            CHECK(split.upper(n, n) == complex{});
    }
    CHECK(max_abs_difference(build_structured(kinds::ELambda{1.0}, 20), build_structured(kinds::RicardE{}, 20)) <
          1e-15);
}

TEST_CASE("difference identity holds entrywise")
{
    for (complex lambda : {complex{1.0, 1.0}, complex{0.3, -2.0}, complex{5.0, 0.0}})
        CHECK(difference_identity_residual(lambda, 256) <= 1e-12);
}

TEST_CASE("iterated limit diagnostic")
{
    const auto ones = iterated_limit_diagnostic([](std::size_t n) { return build_structured(kinds::LowerOnes{}, n); }, 256);
    CHECK(ones.ell1 == complex{1.0});
    CHECK(ones.ell2 == complex{1.0});
    CHECK(ones.stabilized);
    const auto fej = iterated_limit_diagnostic([](std::size_t n) { return build_structured(kinds::Fejer{}, n); }, 2048);
    CHECK(std::abs(fej.ell1 - 1.0) < 1e-2);
    CHECK(std::abs(fej.ell2) < 1e-2);
    CHECK(fej.stabilized);
    CHECK_THROWS(iterated_limit_diagnostic([](std::size_t n) { return FiniteSection::identity(n); }, 39));
    CHECK_THROWS(iterated_limit_diagnostic([](std::size_t) { return FiniteSection::identity(3); }, 64));
}
