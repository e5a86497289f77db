#pragma once

// Minimal CSV reading/writing shared by the trajectory and adjacency
// formats. Supports double-quoted fields with "" escapes; no embedded
// newlines.

#include <charconv>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "entsim/errors.hpp"

namespace entsim::csv {

inline std::vector<std::string> split_row(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw SchemaError("unterminated quoted CSV field");
  fields.push_back(std::move(field));
  return fields;
}

/// Reads non-blank rows, stripping a trailing CR and a leading UTF-8 BOM.
/// Each row is paired with its 1-based line number.
inline std::vector<std::pair<std::size_t, std::vector<std::string>>> read_rows(
    std::istream& in) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    rows.emplace_back(line_no, split_row(line));
  }
  return rows;
}

inline std::string quote_if_needed(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline double parse_double(std::string_view s, std::size_t line_no,
                           std::string_view column) {
  double value = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || s.empty())
    throw SchemaError("line " + std::to_string(line_no) + ": column '" +
                      std::string(column) + "' is not a number: '" +
                      std::string(s) + "'");
  return value;
}

inline std::uint64_t parse_uint(std::string_view s, std::size_t line_no,
                                std::string_view column) {
  std::uint64_t value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || s.empty())
    throw SchemaError("line " + std::to_string(line_no) + ": column '" +
                      std::string(column) +
                      "' is not a non-negative integer: '" + std::string(s) +
                      "'");
  return value;
}

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace entsim::csv
