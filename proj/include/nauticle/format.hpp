#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace nauticle {

/// Shortest decimal representation that parses back to the same double.
/// Every number written to ASCII result files goes through here so that
/// write -> read -> write is byte identical.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, bool& ok) {
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    ok = (res.ec == std::errc() && res.ptr == text.data() + text.size());
    return v;
}

}  // namespace nauticle
