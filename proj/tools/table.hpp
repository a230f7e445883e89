#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace critshuffle::cli {

using Cell = std::variant<std::monostate, std::int64_t, double, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> comments;  // CSV only, emitted as "# ..." before the header

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

// Shortest text that round-trips is not guaranteed stable across libraries, so
// every double is printed with 17 significant digits.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string cell_text(const Cell& c) {
  struct V {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(V{}, c);
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += ch;
    }
  }
  return out + "\"";
}

inline std::string json_cell(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return "null";
  if (const auto* s = std::get_if<std::string>(&c)) return json_string(*s);
  if (const auto* d = std::get_if<double>(&c); d && !std::isfinite(*d)) return json_string(format_double(*d));
  return cell_text(c);
}

inline void write_csv(std::ostream& out, const Table& t) {
  for (const auto& c : t.comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
}

inline void write_json(std::ostream& out, const Table& t) {
  out << "[\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out << "  {";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      out << (i ? ", " : "") << json_string(t.columns[i]) << ": "
          << (i < t.rows[r].size() ? json_cell(t.rows[r][i]) : "null");
    }
    out << '}' << (r + 1 < t.rows.size() ? "," : "") << '\n';
  }
  out << "]\n";
}

}  // namespace critshuffle::cli
