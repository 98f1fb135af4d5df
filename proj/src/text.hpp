#pragma once

// Small line-oriented tokenising helpers shared by the text-format parsers.

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "a4/error.hpp"

namespace a4::detail {

struct Token {
  std::string_view text;
  int column = 1;  // 1-based
};

/// Drops everything from the first '#'.
inline std::string_view strip_comment(std::string_view line) {
  const auto p = line.find('#');
  return p == std::string_view::npos ? line : line.substr(0, p);
}

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

/// Whitespace-separated tokens of `line`, columns relative to the start of `line` plus `offset`.
inline std::vector<Token> split_tokens(std::string_view line, int offset = 0) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1 + offset});
  }
  return out;
}

inline double parse_double(std::string_view s, const std::string& file, int line, int column) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw SyntaxError(file, line, column, "expected a number, got '" + std::string(s) + "'");
  return v;
}

inline long long parse_int(std::string_view s, const std::string& file, int line, int column) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw SyntaxError(file, line, column, "expected an integer, got '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t parse_u64(std::string_view s, const std::string& file, int line, int column) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw SyntaxError(file, line, column, "expected an unsigned 64-bit integer, got '" + std::string(s) + "'");
  return v;
}

}  // namespace a4::detail
