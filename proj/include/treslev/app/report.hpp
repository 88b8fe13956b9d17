#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "treslev/curves_io.hpp"

namespace treslev::app {

// How a number is shown in human tables. Machine formats always carry the
// full-precision value.
enum class Display {
  Integer,      // thresholds, currency totals
  Fixed2,       // ratios, elasticities, per-unit amounts
  Fixed3,       // leverages in the expansion tables
  Significant,  // model coefficients such as a = -1e-06
};

struct Cell {
  enum class Kind { Empty, Number, Text };
  Kind kind = Kind::Empty;
  double value = 0.0;
  Display display = Display::Fixed2;
  std::string text;

  static Cell empty() { return {}; }
  static Cell number(double v, Display d) { return {Kind::Number, v, d, {}}; }
  static Cell label(std::string t) { return {Kind::Text, 0.0, Display::Fixed2, std::move(t)}; }
};

inline Cell integer(double v) { return Cell::number(v, Display::Integer); }
inline Cell fixed2(double v) { return Cell::number(v, Display::Fixed2); }
inline Cell fixed3(double v) { return Cell::number(v, Display::Fixed3); }
inline Cell significant(double v) { return Cell::number(v, Display::Significant); }

struct Row {
  std::string key;    // machine-readable id
  std::string label;  // indicator name shown in tables
  std::vector<Cell> cells;
};

struct Table {
  std::string key;
  std::string title;
  std::vector<std::string> columns;
  std::vector<Row> rows;
};

struct Report {
  std::string command;
  std::vector<Table> tables;
};

enum class OutputFormat { Table, Json, Csv };

/// Half-away-from-zero rounding at `digits` decimals. The scaled value is
/// first cut to 15 significant digits so that binary noise (0.075 stored as
/// 0.07499999...) does not flip the tie.
inline double display_round(double x, int digits) {
  const double scaled = x * std::pow(10.0, digits);
  const double cleaned = std::strtod(fmt::format("{:.15g}", scaled).c_str(), nullptr);
  const double r = std::round(cleaned) / std::pow(10.0, digits);
  return r == 0.0 ? 0.0 : r;
}

inline std::string format_cell(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::Empty: return "-";
    case Cell::Kind::Text: return c.text;
    case Cell::Kind::Number: break;
  }
  switch (c.display) {
    case Display::Integer: return fmt::format("{:.0f}", display_round(c.value, 0));
    case Display::Fixed2: return fmt::format("{:.2f}", display_round(c.value, 2));
    case Display::Fixed3: return fmt::format("{:.3f}", display_round(c.value, 3));
    case Display::Significant: {
      const double v = c.value == 0.0 ? 0.0 : c.value;
      return fmt::format("{:.12g}", v);
    }
  }
  return "?";
}

namespace detail {

// Terminal columns taken by a UTF-8 string (one per code point).
inline std::size_t display_width(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char ch) { return (static_cast<unsigned char>(ch) & 0xC0) != 0x80; }));
}

inline void pad_to(std::string& out, std::string_view s, std::size_t width, bool right) {
  const std::size_t w = display_width(s);
  const std::string fill(width > w ? width - w : 0, ' ');
  if (right) out += fill;
  out += s;
  if (!right) out += fill;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

}  // namespace detail

inline std::string render_table(const Table& t) {
  std::vector<std::vector<std::string>> cells;
  std::size_t label_w = 0;
  std::vector<std::size_t> col_w(t.columns.size(), 0);
  for (std::size_t i = 0; i < t.columns.size(); ++i) col_w[i] = detail::display_width(t.columns[i]);
  for (const Row& r : t.rows) {
    label_w = std::max(label_w, detail::display_width(r.label));
    auto& line = cells.emplace_back();
    for (std::size_t i = 0; i < r.cells.size() && i < col_w.size(); ++i) {
      line.push_back(format_cell(r.cells[i]));
      col_w[i] = std::max(col_w[i], detail::display_width(line.back()));
    }
  }

  std::string out = t.title + "\n";
  out += std::string(detail::display_width(t.title), '=') + "\n";
  detail::pad_to(out, "", label_w, false);
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    out += "  ";
    detail::pad_to(out, t.columns[i], col_w[i], true);
  }
  out += "\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    detail::pad_to(out, t.rows[r].label, label_w, false);
    for (std::size_t i = 0; i < cells[r].size(); ++i) {
      out += "  ";
      detail::pad_to(out, cells[r][i], col_w[i], true);
    }
    out += "\n";
  }
  return out;
}

inline std::string render_text(const Report& report) {
  std::string out;
  for (std::size_t i = 0; i < report.tables.size(); ++i) {
    if (i) out += "\n";
    out += render_table(report.tables[i]);
  }
  return out;
}

inline nlohmann::ordered_json to_json(const Report& report) {
  nlohmann::ordered_json j;
  j["command"] = report.command;
  auto tables = nlohmann::ordered_json::array();
  for (const Table& t : report.tables) {
    nlohmann::ordered_json jt;
    jt["key"] = t.key;
    jt["title"] = t.title;
    jt["columns"] = t.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const Row& r : t.rows) {
      auto values = nlohmann::ordered_json::array();
      for (const Cell& c : r.cells) {
        switch (c.kind) {
          case Cell::Kind::Empty: values.push_back(nullptr); break;
          case Cell::Kind::Number: values.push_back(c.value); break;
          case Cell::Kind::Text: values.push_back(c.text); break;
        }
      }
      rows.push_back({{"key", r.key}, {"label", r.label}, {"values", std::move(values)}});
    }
    jt["rows"] = std::move(rows);
    tables.push_back(std::move(jt));
  }
  j["tables"] = std::move(tables);
  return j;
}

/// Long format: one line per non-empty cell, full precision.
inline std::string render_csv(const Report& report) {
  std::string out = "table,row,column,value\n";
  for (const Table& t : report.tables) {
    for (const Row& r : t.rows) {
      for (std::size_t i = 0; i < r.cells.size() && i < t.columns.size(); ++i) {
        const Cell& c = r.cells[i];
        if (c.kind == Cell::Kind::Empty) continue;
        const std::string value = c.kind == Cell::Kind::Number ? format_number(c.value) : c.text;
        out += t.key + ',' + r.key + ',' + detail::csv_field(t.columns[i]) + ',' + detail::csv_field(value) + '\n';
      }
    }
  }
  return out;
}

inline std::string render(const Report& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::Table: return render_text(report);
    case OutputFormat::Json: return to_json(report).dump(2) + "\n";
    case OutputFormat::Csv: return render_csv(report);
  }
  return {};
}

}  // namespace treslev::app
