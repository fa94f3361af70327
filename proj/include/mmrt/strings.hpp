// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmrt {

inline std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return std::string(text.substr(begin, end - begin));
}

/// Case-insensitive substring search; npos when absent.
inline std::size_t find_ci(std::string_view haystack, std::string_view needle,
                           std::size_t from = 0) {
    if (needle.empty() || needle.size() > haystack.size()) return std::string_view::npos;
    const std::string hay = to_lower(haystack);
    const std::string nee = to_lower(needle);
    return hay.find(nee, from);
}

inline bool contains_ci(std::string_view haystack, std::string_view needle) {
    return find_ci(haystack, needle) != std::string_view::npos;
}

inline std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            out.emplace_back(text.substr(pos));
            break;
        }
        out.emplace_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return out;
}

/// Strip leading list decoration ("1.", "-", "*", "•") from a line.
inline std::string strip_list_marker(std::string_view line) {
    std::string s = trim(line);
    std::size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) {
        s = trim(std::string_view(s).substr(i + 1));
    } else if (!s.empty() && (s[0] == '-' || s[0] == '*')) {
        s = trim(std::string_view(s).substr(1));
    }
    return s;
}

/// Last double-quoted span in a string, if any. The rule-based mock adapters
/// use this to echo the term a prompt is asking about.
inline std::optional<std::string> last_quoted(std::string_view text) {
    std::size_t close = text.rfind('"');
    if (close == std::string_view::npos || close == 0) return std::nullopt;
    std::size_t open = text.rfind('"', close - 1);
    if (open == std::string_view::npos) return std::nullopt;
    return std::string(text.substr(open + 1, close - open - 1));
}

inline std::string replace_all(std::string text, std::string_view token,
                               std::string_view value) {
    if (token.empty()) return text;
    std::size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        text.replace(pos, token.size(), value);
        pos += value.size();
    }
    return text;
}

}  // namespace mmrt
