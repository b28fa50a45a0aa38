#include "trsc/section_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "csv.hpp"

namespace trsc {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put_le(std::ostream& os, T value)
{
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(std::begin(bytes), std::end(bytes));
    os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is)
{
    unsigned char bytes[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T)))
        throw std::runtime_error("section dump truncated");
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(std::begin(bytes), std::end(bytes));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

} // namespace

void write_csv(std::ostream& os, const FiniteSection& A)
{
    os << "row,col,real,imag\n";
    for (std::size_t n = 0; n < A.size(); ++n)
        for (std::size_t k = 0; k < A.size(); ++k) {
            const complex v = A(n, k);
            os << n << ',' << k << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
        }
}

FiniteSection read_section_csv(std::istream& is)
{
    const auto rows = detail::read_csv_rows(is);
    const auto N = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(rows.size()))));
    if (N == 0 || N * N != rows.size())
        throw std::invalid_argument("section CSV must hold N*N entries");
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    for (const auto& row : rows) {
        if (row.size() != 4)
            throw std::invalid_argument("section CSV rows need row,col,real,imag");
        const double r = detail::parse_double(row[0]);
        const double c = detail::parse_double(row[1]);
        if (r < 0 || c < 0 || r >= static_cast<double>(N) || c >= static_cast<double>(N)
            || r != std::floor(r) || c != std::floor(c))
            throw std::invalid_argument("section CSV index out of range");
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))
            = complex(detail::parse_double(row[2]), detail::parse_double(row[3]));
    }
    const bool lower = m.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().isZero(0.0);
    return FiniteSection(std::move(m), lower ? Structure::LowerTriangular : Structure::General);
}

void write_binary(std::ostream& os, const FiniteSection& A)
{
    os.write(kSectionMagic.data(), kSectionMagic.size());
    put_le<std::uint64_t>(os, A.size());
    put_le<std::uint8_t>(os, A.is_lower_triangular() ? 1 : 0);
    const auto& e = A.entries();
    for (Eigen::Index n = 0; n < e.rows(); ++n)
        for (Eigen::Index k = 0; k < e.cols(); ++k) {
            put_le<double>(os, e(n, k).real());
            put_le<double>(os, e(n, k).imag());
        }
}

FiniteSection read_section_binary(std::istream& is)
{
    std::array<char, 4> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kSectionMagic)
        throw std::runtime_error("not a TRSC section dump");
    const auto N = get_le<std::uint64_t>(is);
    const auto tag = get_le<std::uint8_t>(is);
    if (N == 0 || N > (std::uint64_t{1} << 20))
        throw std::runtime_error("section dump has an implausible size");
    if (tag > 1)
        throw std::runtime_error("section dump has an unknown structure tag");
    const auto n = static_cast<Eigen::Index>(N);
    ComplexMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            const double re = get_le<double>(is);
            const double im = get_le<double>(is);
            m(r, c) = complex(re, im);
        }
    if (is.peek() != std::char_traits<char>::eof())
        throw std::runtime_error("section dump has trailing bytes");
    return FiniteSection(std::move(m), tag == 1 ? Structure::LowerTriangular : Structure::General);
}

} // namespace trsc
