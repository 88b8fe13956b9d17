#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "treslev/curves.hpp"
#include "treslev/error.hpp"

namespace treslev {

/// Shortest decimal text that reads back to the same double; `-0` prints as 0.
inline std::string format_number(double x) {
  if (x == 0.0) x = 0.0;
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) fail(ErrorCode::InvalidArgument, "number not representable");
  return std::string(buf, end);
}

/// Header row then one line per row; `,` delimiter, LF endings.
inline std::string to_csv(const CurveGrid& grid) {
  std::string out;
  for (std::size_t i = 0; i < grid.columns.size(); ++i) {
    if (i) out += ',';
    out += grid.columns[i];
  }
  out += '\n';
  for (const auto& row : grid.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json to_json(const CurveGrid& grid) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(grid.kind));
  j["columns"] = grid.columns;
  j["rows"] = grid.rows;
  auto gaps = nlohmann::ordered_json::array();
  for (const Range& g : grid.singularity_gaps) gaps.push_back({g.lower, g.upper});
  j["singularity_gaps"] = std::move(gaps);
  return j;
}

enum class GridFormat { Csv, Json };

inline GridFormat format_for_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext == ".json" ? GridFormat::Json : GridFormat::Csv;
}

inline std::string render_grid(const CurveGrid& grid, GridFormat format) {
  return format == GridFormat::Json ? to_json(grid).dump(2) + "\n" : to_csv(grid);
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::IoFailure, "write to " + path.string() + " failed");
}

}  // namespace treslev
