#pragma once

#include <charconv>
#include <cstdlib>
#include <string>
#include <system_error>

#include "gaugelab/errors.hpp"

namespace gaugelab {

// Shortest decimal string that round-trips the double exactly.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    if (s == "inf") return 1.0 / 0.0;
    const char* b = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(b, &end);
    if (end == b || *end != '\0')
        throw ArgumentError("not a number: '" + s + "'");
    return v;
}

inline int parse_int(const std::string& s) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ArgumentError("not an integer: '" + s + "'");
    return v;
}

} // namespace gaugelab
