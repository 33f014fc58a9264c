#pragma once

// Small strict parsers shared by the text serializations.

#include <charconv>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "acctest/errors.hpp"

namespace acctest::detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline double parse_double(std::string_view s, std::string_view what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError(std::string(what) + ": not a number: '" + std::string(s) + "'");
  }
  return v;
}

// "k1=v1,k2=v2" -> map. Keys are case-sensitive.
inline std::map<std::string, double, std::less<>> parse_params(std::string_view s,
                                                               std::string_view what) {
  std::map<std::string, double, std::less<>> out;
  if (trim(s).empty()) return out;
  for (auto item : split(s, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError(std::string(what) + ": expected key=value, got '" + std::string(item) + "'");
    }
    auto key = std::string(trim(item.substr(0, eq)));
    if (out.contains(key)) throw ValidationError(std::string(what) + ": duplicate key '" + key + "'");
    out.emplace(std::move(key), parse_double(item.substr(eq + 1), what));
  }
  return out;
}

// Shortest round-trip representation.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace acctest::detail
