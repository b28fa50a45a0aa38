#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"
#include "trsc/spectral.hpp"

using namespace trsc;

namespace {

FiniteSection shift(std::size_t N, double scale = 1.0)
{
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    for (std::size_t n = 1; n < N; ++n)
        m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n - 1)) = scale;
    return FiniteSection(std::move(m), Structure::LowerTriangular);
}

FiniteSection random_lower(std::mt19937_64& rng, std::size_t N, double diag_scale)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    for (Eigen::Index n = 0; n < m.rows(); ++n)
        for (Eigen::Index k = 0; k <= n; ++k)
            m(n, k) = (n == k ? diag_scale : 1.0) * u(rng);
    return FiniteSection(std::move(m), Structure::LowerTriangular);
}

CoefficientSequence blaschke_g(std::size_t N)
{
    const std::vector<double> zeros{0.3, 0.7};
    return blaschke_symbol(zeros, N);
}

} // namespace

TEST_CASE("the shift is nilpotent")
{
    const std::size_t N = 8;
    for (double p : {2.0, 3.0}) {
        const auto seq = power_norm_sequence(shift(N), p, 12);
        REQUIRE(seq.rows.size() == 12);
        for (const auto& row : seq.rows) {
            if (row.n < static_cast<int>(N)) {
                CHECK(row.lower_root == doctest::Approx(1.0).epsilon(1e-9));
                CHECK(row.upper_root >= row.lower_root);
            } else {
                CHECK(row.lower_root == 0.0);
                CHECK(row.upper_root == 0.0);
            }
        }
        CHECK_FALSE(seq.rescaled);
    }
}

TEST_CASE("strictly lower sections are nilpotent")
{
    std::mt19937_64 rng(10);
    const auto A = random_lower(rng, 6, 0.0);
    const auto seq = power_norm_sequence(A, 2.0, 9);
    for (const auto& row : seq.rows)
        if (row.n >= 6)
            CHECK(row.lower_root == 0.0);
}

TEST_CASE("power roots are covariant under scaling")
{
    std::mt19937_64 rng(11);
    const auto A = random_lower(rng, 40, 1.0);
    const auto base = power_norm_sequence(A, 2.0, 16);
    for (complex c : {complex{3.0, 0.0}, complex{0.0, -0.25}}) {
        const FiniteSection cA(A.entries() * c, Structure::LowerTriangular);
        const auto scaled = power_norm_sequence(cA, 2.0, 16);
        for (std::size_t i = 0; i < base.rows.size(); ++i)
            CHECK(scaled.rows[i].lower_root == doctest::Approx(std::abs(c) * base.rows[i].lower_root).epsilon(1e-9));
    }
}

TEST_CASE("power roots survive magnitudes beyond double range")
{
    std::mt19937_64 rng(12);
    const auto A = random_lower(rng, 20, 1.0);
    const double big = 1e40;
    const FiniteSection B(A.entries() * big, Structure::LowerTriangular);
    const auto a = power_norm_sequence(A, 2.0, 24);
    const auto b = power_norm_sequence(B, 2.0, 24);
    CHECK(b.rescaled); // 1e40^24 would overflow unscaled
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        CHECK(b.rows[i].lower_root == doctest::Approx(big * a.rows[i].lower_root).epsilon(1e-9));
}

TEST_CASE("diagonal sections have constant power roots")
{
    ComplexMatrix D = ComplexMatrix::Zero(5, 5);
    D.diagonal() << 0.5, -2.0, 1.0, 0.1, complex{0.0, 1.5};
    const auto seq = power_norm_sequence(FiniteSection(D, Structure::LowerTriangular), 3.0, 10);
    for (const auto& row : seq.rows) {
        CHECK(row.lower_root == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(row.upper_root == doctest::Approx(2.0).epsilon(1e-9));
    }
    CHECK_THROWS(power_norm_sequence(FiniteSection(D, Structure::General), 1.0, 4));
    CHECK_THROWS(power_norm_sequence(FiniteSection(D, Structure::General), 2.0, 0));
}

TEST_CASE("resolvent inverts I - T/lambda")
{
    const std::size_t N = 64;
    const auto g = blaschke_g(N);
    for (const auto& omega : {WeightSequence::unit(N), WeightSequence::dirichlet(N)}) {
        for (complex lambda : {complex{0.5, 0.0}, complex{0.0, 0.3}, complex{-0.4, 0.2}}) {
            const auto T = volterra_operator_matrix(g, N, omega, 2.0);
            const auto R = resolvent_section(g, lambda, N, omega, 2.0);
            const ComplexMatrix M = ComplexMatrix::Identity(64, 64) - T.entries() / lambda;
            const ComplexMatrix prod = M * R.entries();
            const double scale = std::max(1.0, R.entries().cwiseAbs().maxCoeff());
            CHECK((prod - ComplexMatrix::Identity(64, 64)).cwiseAbs().maxCoeff() <= 1e-10 * scale);
            CHECK(R.is_lower_triangular());
        }
    }
    CHECK_THROWS(resolvent_section(g, complex{}, N, WeightSequence::unit(N), 2.0));
}

TEST_CASE("resolvent equals the terminating Neumann series")
{
    const std::size_t N = 12;
    const auto g = blaschke_g(N);
    const auto omega = WeightSequence::unit(N);
    const complex lambda{0.7, -0.2};
    const ComplexMatrix X = volterra_operator_matrix(g, N, omega, 2.0).entries() / lambda;
    ComplexMatrix sum = ComplexMatrix::Identity(12, 12);
    ComplexMatrix term = ComplexMatrix::Identity(12, 12);
    for (std::size_t k = 1; k < N; ++k) {
        term = term * X;
        sum += term;
    }
    const auto R = resolvent_section(g, lambda, N, omega, 2.0);
    CHECK((R.entries() - sum).cwiseAbs().maxCoeff() <= 1e-10 * sum.cwiseAbs().maxCoeff());
}

TEST_CASE("resolvent probe rows")
{
    const std::vector<std::size_t> Ns{32, 64, 128};
    const auto g = blaschke_g(128);
    const auto omega = WeightSequence::unit(128);
    const auto probe = resolvent_probe(g, complex{0.0, 0.1}, 2.0, Ns, omega);
    REQUIRE(probe.rows.size() == 3);
    double expected = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(probe.rows[i].N == Ns[i]);
        CHECK(probe.rows[i].lower.value <= probe.rows[i].upper.value);
        CHECK(probe.rows[i].max_entry <= probe.rows[i].upper.value * (1.0 + 1e-12));
        if (i > 0)
            expected = std::max(expected, probe.rows[i].upper.value / probe.rows[i - 1].upper.value - 1.0);
    }
    CHECK(probe.max_growth() == expected);

    const auto p3 = resolvent_probe(g, complex{0.2, 0.0}, 3.0, Ns, omega);
    for (const auto& row : p3.rows) {
        CHECK(row.lower.kind == NormKind::LowerBound);
        CHECK(row.upper.kind == NormKind::UpperBound);
        CHECK(row.lower.value <= row.upper.value);
    }
}

TEST_CASE("quasinilpotency report for a Blaschke symbol")
{
    // the lambda = 0.1 resolvent settles only from N = 128 on
    const std::vector<std::size_t> Ns{128, 256, 512};
    const auto g = blaschke_g(512);
    const auto omega = WeightSequence::unit(512);
    const std::vector<complex> grid{complex{0.1, 0.0}, complex{0.0, 0.1}, complex{-0.2, 0.0}};
    const auto report = quasinilpotency_report(g, omega, 2.0, Ns, 16, grid);
    CHECK(report.power_section_size == 512);
    CHECK(report.powers.rows.size() == 16);
    CHECK(report.resolvents.size() == 3);
    CHECK(report.roots_decreasing);
    CHECK(report.root_decay_slope < 0.0);
    CHECK(report.verdict == std::string(kVerdictConsistent));

    std::ostringstream js;
    write_json(js, report);
    const auto j = nlohmann::json::parse(js.str());
    CHECK(j["summary"]["verdict"] == std::string(kVerdictConsistent));
    CHECK(j["resolvents"].size() == 3);
    CHECK(j["powers"]["rows"].size() == 16);

    std::ostringstream pc, rc;
    write_csv(pc, report.powers);
    write_csv(rc, std::span(report.resolvents));
    CHECK(pc.str().rfind("n,lower_root,upper_root\n", 0) == 0);
    CHECK(rc.str().rfind("lambda_re,lambda_im,N,lower,upper,max_entry,ill_conditioned\n", 0) == 0);
}

TEST_CASE("tiny spectral parameters are flagged as ill conditioned")
{
    const std::vector<std::size_t> Ns{64, 128};
    const auto g = blaschke_g(128);
    const std::vector<complex> grid{complex{1e-3, 0.0}};
    const auto report = quasinilpotency_report(g, WeightSequence::unit(128), 2.0, Ns, 8, grid);
    bool flagged = false;
    for (const auto& row : report.resolvents[0].rows)
        flagged = flagged || row.ill_conditioned;
    CHECK(flagged);
    CHECK(report.verdict == std::string(kVerdictInconclusive));
}
