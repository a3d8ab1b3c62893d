#pragma once

#include "supportsum/errors.hpp"

#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>

namespace supportsum {

// Shortest representation that round-trips, locale independent.
inline std::string format_shortest(double value)
{
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, result.ptr);
}

// Fixed notation with '.' as decimal separator.
inline std::string format_fixed(double value, int decimals)
{
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
    return std::string(buf, result.ptr);
}

inline double parse_double(std::string_view text)
{
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto result = std::from_chars(text.data(), end, value);
    if (text.empty() || result.ec != std::errc{} || result.ptr != end) {
        throw InvalidArgument("not a number: '" + std::string(text) + "'");
    }
    return value;
}

inline std::size_t parse_count(std::string_view text)
{
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    const auto result = std::from_chars(text.data(), end, value);
    if (text.empty() || result.ec != std::errc{} || result.ptr != end) {
        throw InvalidArgument("not a non-negative integer: '" + std::string(text) + "'");
    }
    return value;
}

} // namespace supportsum
