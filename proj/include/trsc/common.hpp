#pragma once

#include <complex>
#include <cstdio>
#include <string>

namespace trsc {

using complex = std::complex<double>;

inline constexpr const char* kVersion = "0.3.0";

/// Shortest text form that round-trips a double; locale independent.
inline std::string format_double(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

} // namespace trsc
