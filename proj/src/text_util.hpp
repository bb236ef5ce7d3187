#pragma once

// Small parsing helpers shared by the text formats. Internal to the library.

#include "ttsched/errors.hpp"

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace ttsched::text {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size()) {
                out.push_back(text.substr(pos));
            }
            break;
        }
        out.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    for (auto& l : out) {
        if (!l.empty() && l.back() == '\r') {
            l.remove_suffix(1);
        }
    }
    return out;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(s.substr(pos));
            return out;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

inline std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        pos = s.find_first_not_of(" \t", pos);
        if (pos == std::string_view::npos) {
            break;
        }
        auto end = s.find_first_of(" \t", pos);
        if (end == std::string_view::npos) {
            end = s.size();
        }
        out.push_back(s.substr(pos, end - pos));
        pos = end;
    }
    return out;
}

template <typename Int>
Int to_int(std::string_view s, std::string_view what) {
    s = trim(s);
    Int value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("invalid " + std::string(what) + ": '" + std::string(s) + "'");
    }
    return value;
}

inline double to_double(std::string_view s, std::string_view what) {
    s = trim(s);
    double value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("invalid " + std::string(what) + ": '" + std::string(s) + "'");
    }
    return value;
}

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace ttsched::text
