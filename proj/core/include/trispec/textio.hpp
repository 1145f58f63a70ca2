#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "trispec/domain.hpp"

namespace trispec {

// Shortest round-tripping decimal form of a double (locale independent, so
// serialized artifacts are byte-stable across runs).
inline std::string fmt_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw InvalidParameter("malformed number '" + std::string(s) + "'");
    return v;
}

inline long parse_long(std::string_view s) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw InvalidParameter("malformed integer '" + std::string(s) + "'");
    return v;
}

}  // namespace trispec
