#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace convpart {

/// Shortest decimal that round-trips the double (CSV number format).
inline std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace convpart
