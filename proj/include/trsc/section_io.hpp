#pragma once

#include <array>
#include <iosfwd>

#include "trsc/matrices.hpp"

namespace trsc {

/// Dense CSV: header "row,col,real,imag", every entry in row-major order.
void write_csv(std::ostream& os, const FiniteSection& A);
FiniteSection read_section_csv(std::istream& is);

/// Binary dump, all fields little-endian:
///   bytes 0-3   magic "TRSC"
///   uint64      N
///   uint8       structure tag (0 general, 1 lower triangular)
///   N*N pairs of float64 (real, imag), row-major
inline constexpr std::array<char, 4> kSectionMagic{'T', 'R', 'S', 'C'};

void write_binary(std::ostream& os, const FiniteSection& A);
FiniteSection read_section_binary(std::istream& is);

} // namespace trsc
