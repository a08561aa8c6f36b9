#pragma once

// Design CSV format: one point per row, d columns, optional header x1,...,xd.
// Numbers use shortest round-trip decimal formatting, so a write/read cycle
// reproduces every coordinate bit for bit.

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hypercover/core.hpp"

namespace hypercover {

/// Malformed CSV input; the message names the offending line.
class csv_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

/// Quote a field when it contains a separator, quote or line break.
inline std::string csv_field(std::string_view f) {
  if (f.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(f);
  std::string q = "\"";
  for (char c : f) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_field(fields[i]);
  }
  os << '\n';
}

/// Split CSV text into records. Handles quoted fields with embedded separators,
/// doubled quotes and line breaks.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty()) throw csv_error("line " + std::to_string(line) + ": stray quote");
      quoted = any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
      ++line;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw csv_error("line " + std::to_string(line) + ": unterminated quote");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_design_csv(std::ostream& os, const Design& design, bool header = false) {
  const std::size_t d = design.dimension();
  if (header) {
    for (std::size_t k = 0; k < d; ++k) os << (k ? "," : "") << 'x' << (k + 1);
    os << '\n';
  }
  for (std::size_t j = 0; j < design.size(); ++j) {
    const auto p = design.point(j);
    for (std::size_t k = 0; k < d; ++k) os << (k ? "," : "") << format_double(p[k]);
    os << '\n';
  }
}

inline std::string design_to_csv(const Design& design, bool header = false) {
  std::ostringstream os;
  write_design_csv(os, design, header);
  return os.str();
}

/// Parse a design. A first row that is not numeric is taken as a header.
inline Design parse_design_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  std::vector<double> coords;
  std::size_t d = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    std::vector<double> vals(row.size());
    bool numeric = true;
    for (std::size_t k = 0; k < row.size(); ++k) numeric = numeric && parse_double(row[k], vals[k]);
    if (!numeric) {
      if (r == 0) {
        d = row.size();
        continue;
      }
      throw csv_error("line " + std::to_string(r + 1) + ": non-numeric field");
    }
    if (d == 0) d = row.size();
    if (row.size() != d)
      throw csv_error("line " + std::to_string(r + 1) + ": expected " + std::to_string(d) +
                      " columns, found " + std::to_string(row.size()));
    coords.insert(coords.end(), vals.begin(), vals.end());
  }
  if (coords.empty()) throw csv_error("design has no points");
  return Design(d, std::move(coords));
}

inline Design read_design_csv(std::istream& is) {
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_design_csv(ss.str());
}

/// Per-axis box: one "lower,upper" row per axis.
inline Box parse_box_csv(std::string_view text) {
  std::vector<double> lo, hi;
  const auto rows = parse_csv(text);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double a, b;
    if (rows[r].size() != 2 || !parse_double(rows[r][0], a) || !parse_double(rows[r][1], b)) {
      if (r == 0) continue;
      throw csv_error("box line " + std::to_string(r + 1) + ": expected lower,upper");
    }
    lo.push_back(a);
    hi.push_back(b);
  }
  if (lo.empty()) throw csv_error("box file has no rows");
  return Box(std::move(lo), std::move(hi));
}

}  // namespace hypercover
