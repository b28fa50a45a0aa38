#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "trsc/common.hpp"

namespace trsc {

/// Truncated Taylor coefficients f_0 .. f_N of an analytic symbol.
///
/// Always holds at least one entry and never holds NaN/Inf. Values are
/// immutable once constructed.
class CoefficientSequence
{
public:
    explicit CoefficientSequence(std::vector<complex> coeffs);
    CoefficientSequence(std::initializer_list<complex> coeffs);

    static CoefficientSequence zero(std::size_t degree);
    static CoefficientSequence from_real(std::span<const double> coeffs);

    std::size_t size() const noexcept { return coeffs_.size(); }
    std::size_t degree() const noexcept { return coeffs_.size() - 1; }

    const complex& operator[](std::size_t m) const { return coeffs_[m]; }

    // zero beyond the stored degree
    complex at_or_zero(std::size_t m) const noexcept
    {
        return m < coeffs_.size() ? coeffs_[m] : complex{};
    }

    std::span<const complex> coeffs() const noexcept { return coeffs_; }

    CoefficientSequence scaled(complex factor) const;

    /// Evaluates the truncated polynomial at z (Horner).
    complex evaluate(complex z) const noexcept;

    bool is_real() const noexcept;

private:
    std::vector<complex> coeffs_;
};

/// Coefficients of log 1/(1-z): 0, 1, 1/2, ..., 1/N.
CoefficientSequence log_symbol(std::size_t N);

/// Taylor coefficients through degree N of prod_i (a_i - z)/(1 - a_i z),
/// every a_i in [0, 1).
CoefficientSequence blaschke_symbol(std::span<const double> zeros, std::size_t N);

/// Cauchy product truncated at degree N.
CoefficientSequence series_multiply(const CoefficientSequence& f,
                                    const CoefficientSequence& g,
                                    std::size_t N);

/// exp(f) truncated at degree N. Throws std::overflow_error when exp(f_0)
/// is not representable.
CoefficientSequence series_exp(const CoefficientSequence& f, std::size_t N);

/// S*f = (f - f(0)) / z. Requires at least two coefficients.
CoefficientSequence backward_shift(const CoefficientSequence& f);

// CSV with header "index,real,imag", one row per coefficient.
void write_csv(std::ostream& os, const CoefficientSequence& f);
CoefficientSequence read_coefficients_csv(std::istream& is);

} // namespace trsc
