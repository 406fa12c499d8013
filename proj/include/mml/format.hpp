#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace mml {

/// Shortest decimal form that round-trips the exact double ("nan", "inf",
/// "-inf" for non-finite values). Identical inputs always format to identical
/// bytes, which keeps reports and row labels deterministic.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace mml
