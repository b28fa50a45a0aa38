#include "trsc/series.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "csv.hpp"

namespace trsc {

namespace {

void require_finite(const std::vector<complex>& coeffs)
{
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
        if (!std::isfinite(coeffs[m].real()) || !std::isfinite(coeffs[m].imag()))
            throw std::domain_error("coefficient " + std::to_string(m) + " is not finite");
    }
}

} // namespace

CoefficientSequence::CoefficientSequence(std::vector<complex> coeffs)
    : coeffs_(std::move(coeffs))
{
    if (coeffs_.empty())
        throw std::invalid_argument("coefficient sequence needs at least one entry");
    require_finite(coeffs_);
}

CoefficientSequence::CoefficientSequence(std::initializer_list<complex> coeffs)
    : CoefficientSequence(std::vector<complex>(coeffs))
{
}

CoefficientSequence CoefficientSequence::zero(std::size_t degree)
{
    return CoefficientSequence(std::vector<complex>(degree + 1));
}

CoefficientSequence CoefficientSequence::from_real(std::span<const double> coeffs)
{
    return CoefficientSequence(std::vector<complex>(coeffs.begin(), coeffs.end()));
}

CoefficientSequence CoefficientSequence::scaled(complex factor) const
{
    std::vector<complex> out(coeffs_);
    for (auto& c : out)
        c *= factor;
    return CoefficientSequence(std::move(out));
}

complex CoefficientSequence::evaluate(complex z) const noexcept
{
    complex acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

bool CoefficientSequence::is_real() const noexcept
{
    for (const auto& c : coeffs_)
        if (c.imag() != 0.0)
            return false;
    return true;
}

CoefficientSequence log_symbol(std::size_t N)
{
    if (N == 0)
        throw std::invalid_argument("log_symbol: truncation degree must be positive");
    std::vector<complex> c(N + 1);
    for (std::size_t m = 1; m <= N; ++m)
        c[m] = 1.0 / static_cast<double>(m);
    return CoefficientSequence(std::move(c));
}

CoefficientSequence blaschke_symbol(std::span<const double> zeros, std::size_t N)
{
    if (N == 0)
        throw std::invalid_argument("blaschke_symbol: truncation degree must be positive");
    for (double a : zeros) {
        if (!(a >= 0.0 && a < 1.0))
            throw std::domain_error("blaschke_symbol: zero " + format_double(a)
                                    + " outside [0,1)");
    }

    std::vector<complex> one(N + 1);
    one[0] = 1.0;
    CoefficientSequence product(std::move(one));
    for (double a : zeros) {
        // (a - z)/(1 - a z) = a - (1 - a^2) sum_{m>=1} a^{m-1} z^m
        std::vector<complex> factor(N + 1);
        factor[0] = a;
        const double scale = 1.0 - a * a;
        double power = 1.0;
        for (std::size_t m = 1; m <= N; ++m) {
            factor[m] = -scale * power;
            power *= a;
        }
        product = series_multiply(product, CoefficientSequence(std::move(factor)), N);
    }
    return product;
}

CoefficientSequence series_multiply(const CoefficientSequence& f,
                                    const CoefficientSequence& g,
                                    std::size_t N)
{
    std::vector<complex> out(N + 1);
    const std::size_t fmax = std::min(f.degree(), N);
    for (std::size_t i = 0; i <= fmax; ++i) {
        const complex fi = f[i];
        if (fi == complex{})
            continue;
        const std::size_t gmax = std::min(g.degree(), N - i);
        for (std::size_t j = 0; j <= gmax; ++j)
            out[i + j] += fi * g[j];
    }
    return CoefficientSequence(std::move(out));
}

CoefficientSequence series_exp(const CoefficientSequence& f, std::size_t N)
{
    std::vector<complex> h(N + 1);
    h[0] = std::exp(f[0]);
    if (!std::isfinite(h[0].real()) || !std::isfinite(h[0].imag()))
        throw std::overflow_error("series_exp: exp(f_0) overflows");

    // n h_n = sum_{k=1}^{n} k f_k h_{n-k}
    for (std::size_t n = 1; n <= N; ++n) {
        complex acc{};
        const std::size_t kmax = std::min(n, f.degree());
        for (std::size_t k = 1; k <= kmax; ++k)
            acc += static_cast<double>(k) * f[k] * h[n - k];
        h[n] = acc / static_cast<double>(n);
    }
    for (const auto& c : h)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw std::overflow_error("series_exp: coefficients overflow");
    return CoefficientSequence(std::move(h));
}

CoefficientSequence backward_shift(const CoefficientSequence& f)
{
    if (f.size() < 2)
        throw std::invalid_argument("backward_shift: need at least two coefficients");
    return CoefficientSequence(std::vector<complex>(f.coeffs().begin() + 1, f.coeffs().end()));
}

void write_csv(std::ostream& os, const CoefficientSequence& f)
{
    os << "index,real,imag\n";
    for (std::size_t m = 0; m < f.size(); ++m)
        os << m << ',' << format_double(f[m].real()) << ',' << format_double(f[m].imag()) << '\n';
}

CoefficientSequence read_coefficients_csv(std::istream& is)
{
    const auto rows = detail::read_csv_rows(is);
    std::vector<complex> coeffs(rows.size());
    std::vector<bool> seen(rows.size(), false);
    for (const auto& row : rows) {
        if (row.size() < 2 || row.size() > 3)
            throw std::invalid_argument("coefficient CSV rows need index,real[,imag]");
        const double idx = detail::parse_double(row[0]);
        if (idx < 0 || idx != std::floor(idx) || idx >= static_cast<double>(rows.size()))
            throw std::invalid_argument("coefficient CSV: bad index " + row[0]);
        const auto m = static_cast<std::size_t>(idx);
        if (seen[m])
            throw std::invalid_argument("coefficient CSV: duplicate index " + row[0]);
        seen[m] = true;
        const double im = row.size() == 3 ? detail::parse_double(row[2]) : 0.0;
        coeffs[m] = complex(detail::parse_double(row[1]), im);
    }
    return CoefficientSequence(std::move(coeffs));
}

} // namespace trsc
