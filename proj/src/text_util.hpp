// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 vradar contributors

#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vradar/errors.hpp"

namespace vradar::detail {

inline std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) pos = s.size();
    out.emplace_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream iss{std::string(s)};
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

template <class Error = ConfigError>
double parse_double(std::string_view token, const std::string& what) {
  const std::string str{trim(token)};
  try {
    std::size_t used = 0;
    const double v = std::stod(str, &used);
    if (used != str.size()) throw std::invalid_argument(str);
    return v;
  } catch (const std::exception&) {
    throw Error("invalid number for " + what + ": '" + str + "'");
  }
}

template <class Error = ConfigError>
long long parse_int(std::string_view token, const std::string& what) {
  const std::string str{trim(token)};
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(str.data(), str.data() + str.size(), v);
  if (ec != std::errc{} || ptr != str.data() + str.size()) {
    throw Error("invalid integer for " + what + ": '" + str + "'");
  }
  return v;
}

/// Reads a whole text file; throws IoError when the file cannot be opened.
inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

inline std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line_no;
};

/// Parses `key = value` lines, skipping blanks and '#' comments.
inline std::vector<KeyValue> parse_key_values(const std::vector<std::string>& lines,
                                              const std::string& path) {
  std::vector<KeyValue> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string body = strip_comment(lines[i]);
    const auto t = trim(body);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path + ":" + std::to_string(i + 1) + ": expected 'key = value'");
    }
    out.push_back({std::string(trim(t.substr(0, eq))), std::string(trim(t.substr(eq + 1))), i + 1});
  }
  return out;
}

}  // namespace vradar::detail
