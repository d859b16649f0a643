#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace radlite::text {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

/// Strips leading/trailing whitespace; returns a view into the input.
std::string_view trim(std::string_view s);

std::string to_lower(std::string_view s);

/// Lowercases, trims, and collapses internal whitespace runs to one space.
std::string normalize_phrase(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char delim);

/// Splits on any of the given delimiter characters.
std::vector<std::string_view> split_any(std::string_view s,
                                        std::string_view delims);

}  // namespace radlite::text
