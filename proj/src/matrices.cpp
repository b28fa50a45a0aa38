#include "trsc/matrices.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "csv.hpp"

namespace trsc {

namespace {

using Index = Eigen::Index;

template <class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

template <class F>
FiniteSection lower_section(std::size_t N, F&& entry)
{
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(N), static_cast<Index>(N));
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t k = 0; k <= n; ++k)
            m(static_cast<Index>(n), static_cast<Index>(k)) = entry(n, k);
    return FiniteSection(std::move(m), Structure::LowerTriangular);
}

template <class F>
FiniteSection general_section(std::size_t N, F&& entry)
{
    ComplexMatrix m(static_cast<Index>(N), static_cast<Index>(N));
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t k = 0; k < N; ++k)
            m(static_cast<Index>(n), static_cast<Index>(k)) = entry(n, k);
    return FiniteSection(std::move(m), Structure::General);
}

complex padded(const std::vector<complex>& seq, std::size_t m)
{
    return m < seq.size() ? seq[m] : complex{};
}

void require_size(std::size_t N)
{
    if (N == 0)
        throw std::invalid_argument("section size must be positive");
}

void require_weights(const WeightSequence& omega, std::size_t N, double p)
{
    if (!(p > 1.0))
        throw std::invalid_argument("exponent p must exceed 1");
    if (omega.size() < N)
        throw std::invalid_argument("weight sequence shorter than the section");
}

} // namespace

FiniteSection::FiniteSection(ComplexMatrix entries, Structure structure)
    : entries_(std::move(entries)), structure_(structure)
{
    if (entries_.rows() != entries_.cols())
        throw std::invalid_argument("finite section must be square");
    if (entries_.rows() == 0)
        throw std::invalid_argument("finite section must be non-empty");
    if (!entries_.allFinite())
        throw std::domain_error("finite section has non-finite entries");
    if (structure_ == Structure::LowerTriangular) {
        for (Index n = 0; n < entries_.rows(); ++n)
            for (Index k = n + 1; k < entries_.cols(); ++k)
                if (entries_(n, k) != complex{})
                    throw std::invalid_argument("lower triangular section has a nonzero entry above "
                                                "the diagonal");
    }
}

FiniteSection FiniteSection::identity(std::size_t N)
{
    require_size(N);
    return FiniteSection(ComplexMatrix::Identity(static_cast<Index>(N), static_cast<Index>(N)),
                         Structure::LowerTriangular);
}

bool FiniteSection::is_real() const noexcept
{
    return (entries_.imag().array() == 0.0).all();
}

bool FiniteSection::is_nonnegative() const noexcept
{
    return is_real() && (entries_.real().array() >= 0.0).all();
}

WeightSequence::WeightSequence(std::vector<double> values) : values_(std::move(values))
{
    if (values_.empty())
        throw std::invalid_argument("weight sequence must be non-empty");
    for (double w : values_)
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("weights must be positive and finite");
}

WeightSequence WeightSequence::unit(std::size_t length)
{
    return WeightSequence(std::vector<double>(length, 1.0));
}

WeightSequence WeightSequence::dirichlet(std::size_t length)
{
    std::vector<double> w(length);
    for (std::size_t n = 0; n < length; ++n)
        w[n] = static_cast<double>(n + 1);
    return WeightSequence(std::move(w));
}

double WeightSequence::ratio_diagnostic() const noexcept
{
    double worst = 0.0;
    for (std::size_t n = 0; n + 1 < values_.size(); ++n)
        worst = std::max(worst, std::abs(values_[n] / values_[n + 1] - 1.0));
    return worst;
}

WeightSequence read_weights_csv(std::istream& is)
{
    const auto rows = detail::read_csv_rows(is);
    std::vector<double> w;
    w.reserve(rows.size());
    for (const auto& row : rows) {
        // either "value" or "index,value"
        if (row.empty() || row.size() > 2)
            throw std::invalid_argument("weight CSV rows need value or index,value");
        w.push_back(detail::parse_double(row.back()));
    }
    return WeightSequence(std::move(w));
}

FiniteSection build_structured(const SectionKind& kind, std::size_t N)
{
    require_size(N);
    auto d = [](std::size_t v) { return static_cast<double>(v); };
    return std::visit(
        Overloaded{
            [&](const kinds::Cesaro&) {
                return lower_section(N, [&](std::size_t n, std::size_t) { return complex(1.0 / d(n + 1)); });
            },
            [&](const kinds::Fejer&) {
                return lower_section(N, [&](std::size_t n, std::size_t k) {
                    return complex(d(n + 1 - k) / d(n + 1));
                });
            },
            [&](const kinds::FejerPower& f) {
                return lower_section(N, [&](std::size_t n, std::size_t k) {
                    return complex(std::pow(d(n + 1 - k) / d(n + 1), f.gamma));
                });
            },
            [&](const kinds::LowerOnes&) {
                return lower_section(N, [](std::size_t, std::size_t) { return complex(1.0); });
            },
            [&](const kinds::HilbertTransform&) {
                return general_section(N, [&](std::size_t n, std::size_t k) {
                    return n == k ? complex{} : complex(1.0 / (d(n) - d(k)));
                });
            },
            [&](const kinds::Hankel& h) {
                return general_section(N, [&](std::size_t n, std::size_t k) { return padded(h.alpha, n + k); });
            },
            [&](const kinds::ToeplitzLower& t) {
                return lower_section(N, [&](std::size_t n, std::size_t k) { return padded(t.a, n - k); });
            },
            [&](const kinds::RicardE&) {
                return general_section(N, [&](std::size_t n, std::size_t k) {
                    return complex(d(k + 1) / d(k + n + 1));
                });
            },
            [&](const kinds::ELambda& e) {
                if (!(e.lambda.real() > 0.0))
                    throw std::invalid_argument("e_lambda needs Re lambda > 0");
                return general_section(N, [&](std::size_t n, std::size_t k) {
                    return d(k + 1) / (d(k) + e.lambda * d(n) + 1.0);
                });
            },
            [&](const kinds::KernelMultiplier& km) {
                return lower_section(N, [&](std::size_t n, std::size_t k) {
                    return complex(km.spec.theta(d(k) / d(n + 1)));
                });
            },
        },
        kind);
}

FiniteSection build_structured(std::string_view kind, std::size_t N, const SectionParams& params)
{
    if (kind == "cesaro")
        return build_structured(kinds::Cesaro{}, N);
    if (kind == "fejer")
        return build_structured(kinds::Fejer{}, N);
    if (kind == "fejer_power")
        return build_structured(kinds::FejerPower{params.gamma}, N);
    if (kind == "lower_ones")
        return build_structured(kinds::LowerOnes{}, N);
    if (kind == "hilbert_transform")
        return build_structured(kinds::HilbertTransform{}, N);
    if (kind == "hankel")
        return build_structured(kinds::Hankel{params.sequence}, N);
    if (kind == "toeplitz_lower")
        return build_structured(kinds::ToeplitzLower{params.sequence}, N);
    if (kind == "ricard_E")
        return build_structured(kinds::RicardE{}, N);
    if (kind == "e_lambda")
        return build_structured(kinds::ELambda{params.lambda}, N);
    if (kind == "kernel_multiplier")
        return build_structured(kinds::KernelMultiplier{params.kernel}, N);
    throw std::invalid_argument("unknown section kind '" + std::string(kind) + "'");
}

FiniteSection hadamard(const FiniteSection& A, const FiniteSection& B)
{
    if (A.size() != B.size())
        throw std::invalid_argument("hadamard: dimension mismatch");
    const bool lower = A.is_lower_triangular() || B.is_lower_triangular();
    ComplexMatrix m = A.entries().cwiseProduct(B.entries());
    if (lower)
        m.triangularView<Eigen::StrictlyUpper>().setZero(); // clears -0 from x * 0
    return FiniteSection(std::move(m), lower ? Structure::LowerTriangular : Structure::General);
}

FiniteSection triangular_truncation(const FiniteSection& A)
{
    ComplexMatrix m = A.entries();
    m.triangularView<Eigen::StrictlyUpper>().setZero();
    return FiniteSection(std::move(m), Structure::LowerTriangular);
}

FiniteSection transpose(const FiniteSection& A)
{
    return FiniteSection(A.entries().transpose(), Structure::General);
}

FiniteSection add(const FiniteSection& A, const FiniteSection& B)
{
    if (A.size() != B.size())
        throw std::invalid_argument("add: dimension mismatch");
    const bool lower = A.is_lower_triangular() && B.is_lower_triangular();
    return FiniteSection(A.entries() + B.entries(), lower ? Structure::LowerTriangular : Structure::General);
}

FiniteSection subtract(const FiniteSection& A, const FiniteSection& B)
{
    if (A.size() != B.size())
        throw std::invalid_argument("subtract: dimension mismatch");
    const bool lower = A.is_lower_triangular() && B.is_lower_triangular();
    return FiniteSection(A.entries() - B.entries(), lower ? Structure::LowerTriangular : Structure::General);
}

FiniteSection multiplication_matrix(const CoefficientSequence& g, std::size_t N)
{
    require_size(N);
    return lower_section(N, [&](std::size_t n, std::size_t k) { return g.at_or_zero(n - k); });
}

FiniteSection cesaro_operator_matrix(const CoefficientSequence& g, std::size_t N,
                                     const WeightSequence& omega, double p)
{
    require_size(N);
    require_weights(omega, N, p);
    return lower_section(N, [&](std::size_t n, std::size_t k) {
        const double fejer = static_cast<double>(n + 1 - k) / static_cast<double>(n + 1);
        const double w = n == k ? 1.0 : std::pow(omega[n] / omega[k], 1.0 / p);
        return fejer * g.at_or_zero(n + 1 - k) * w;
    });
}

FiniteSection volterra_operator_matrix(const CoefficientSequence& g, std::size_t N,
                                       const WeightSequence& omega, double p)
{
    require_size(N);
    require_weights(omega, N, p);
    return lower_section(N, [&](std::size_t n, std::size_t k) {
        if (k == n)
            return complex{};
        const double factor = static_cast<double>(n - k) / static_cast<double>(n);
        return factor * g.at_or_zero(n - k) * std::pow(omega[n] / omega[k], 1.0 / p);
    });
}

FiniteSection weight_conjugate(const FiniteSection& A, const WeightSequence& omega, double p)
{
    require_weights(omega, A.size(), p);
    const auto N = static_cast<Index>(A.size());
    Eigen::VectorXd d(N);
    for (Index n = 0; n < N; ++n)
        d(n) = std::pow(omega[static_cast<std::size_t>(n)], 1.0 / p);
    ComplexMatrix m = d.asDiagonal() * A.entries() * d.cwiseInverse().asDiagonal();
    return FiniteSection(std::move(m), A.structure());
}

IteratedLimits iterated_limit_diagnostic(const SectionBuilder& builder, std::size_t N)
{
    constexpr std::size_t K0 = kIteratedLimitColumn;
    constexpr std::size_t W = kIteratedLimitWindow;
    if (N < 2 * (K0 + W))
        throw std::invalid_argument("iterated_limit_diagnostic needs N >= 40");
    const FiniteSection S = builder(N);
    if (S.size() != N)
        throw std::invalid_argument("builder returned a section of the wrong size");

    const std::size_t last = N - 1;
    IteratedLimits out{S(last, K0), S(last, last - K0), true};
    double drift = 0.0;
    for (std::size_t j = 0; j < W; ++j) {
        drift = std::max(drift, std::abs(S(last - j, K0) - out.ell1));
        drift = std::max(drift, std::abs(S(last, K0 + j) - out.ell1));
        drift = std::max(drift, std::abs(S(last - j, last - j - K0) - out.ell2));
        drift = std::max(drift, std::abs(S(last, last - K0 - j) - out.ell2));
    }
    out.stabilized = drift <= 1e-2;
    return out;
}

TriangularSplit e_lambda_split(complex lambda, std::size_t N)
{
    require_size(N);
    if (!(lambda.real() > 0.0))
        throw std::invalid_argument("e_lambda needs Re lambda > 0");
    auto d = [](std::size_t v) { return static_cast<double>(v); };
    auto X = lower_section(N, [&](std::size_t n, std::size_t k) {
        return d(k + 1) / (d(k) + lambda * d(n) + 1.0);
    });
    auto Y = lower_section(N, [&](std::size_t n, std::size_t k) {
        return k == n ? complex{} : d(n + 1) / (lambda * d(k) + d(n) + 1.0);
    });
    return {std::move(X), std::move(Y)};
}

double difference_identity_residual(complex lambda, std::size_t N)
{
    double worst = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
        for (std::size_t k = 0; k <= n; ++k) {
            const double kd = static_cast<double>(k);
            const double nd = static_cast<double>(n);
            const complex lhs = (kd + 1.0) / (kd + lambda * nd + 1.0) - kd / (kd + lambda * nd + lambda);
            const complex rhs = ((kd + 1.0) / (kd + lambda * nd + lambda)) * ((lambda - 1.0) / (kd + lambda * nd + 1.0))
                              + (1.0 / lambda) / (kd / lambda + nd + 1.0);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

double max_abs_difference(const FiniteSection& A, const FiniteSection& B)
{
    if (A.size() != B.size())
        throw std::invalid_argument("max_abs_difference: dimension mismatch");
    return (A.entries() - B.entries()).cwiseAbs().maxCoeff();
}

} // namespace trsc
