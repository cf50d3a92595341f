#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "critzero/errors.hpp"
#include "critzero/stats.hpp"

namespace critzero {

using ordered_json = nlohmann::ordered_json;

inline constexpr int report_schema_version = 1;

/// A CSV table with a JSON metadata comment on its first line:
///
///   # {"schema_version":1,"kind":...,"config":{...},"columns":[...],"rows":R}
///   col_a,col_b
///   ...R data rows, 17 significant digits...
///
/// The row count in the metadata lets readers detect truncation.
struct ReportFile {
  int schema_version = report_schema_version;
  std::string kind;
  ordered_json config = ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  bool operator==(const ReportFile&) const = default;
};

inline std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

inline std::string render_report(const ReportFile& r) {
  for (const auto& row : r.rows) {
    if (row.size() != r.columns.size()) throw Error(ErrorCode::invalid_argument, "write_report: ragged row");
  }
  ordered_json meta;
  meta["schema_version"] = r.schema_version;
  meta["kind"] = r.kind;
  meta["config"] = r.config;
  meta["columns"] = r.columns;
  meta["rows"] = r.rows.size();

  std::string out = "# " + meta.dump() + "\n";
  for (std::size_t j = 0; j < r.columns.size(); ++j) out += (j ? "," : "") + r.columns[j];
  out += "\n";
  for (const auto& row : r.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_double(row[j]);
    }
    out += '\n';
  }
  return out;
}

/// Writes through a sibling temporary file and a rename, so readers never
/// observe a half-written report.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::io, "cannot open " + tmp.string() + " for writing");
    f << text;
    f.flush();
    if (!f) throw Error(ErrorCode::io, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::io, "cannot rename to " + path.string() + ": " + ec.message());
}

inline void write_report(const ReportFile& r, const std::filesystem::path& path) {
  write_text_atomic(path, render_report(r));
}

inline void write_json(const ordered_json& j, const std::filesystem::path& path) {
  write_text_atomic(path, j.dump(2) + "\n");
}

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace detail

inline ReportFile parse_report(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      throw ParseError(lines.size() + 1, text.size() - start + 1, "missing newline at end of file (truncated?)");
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.empty()) throw ParseError(1, 1, "empty report");

  const auto head = lines[0];
  if (!head.starts_with("# ")) throw ParseError(1, 1, "expected '# ' metadata line");
  ordered_json meta;
  try {
    meta = ordered_json::parse(head.substr(2));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, e.byte + 2, std::string("bad metadata JSON: ") + e.what());
  }

  ReportFile r;
  std::size_t expected_rows = 0;
  try {
    r.schema_version = meta.at("schema_version").get<int>();
    if (r.schema_version != report_schema_version) {
      throw Error(ErrorCode::version, "report schema_version " + std::to_string(r.schema_version) +
                                          ", expected " + std::to_string(report_schema_version));
    }
    r.kind = meta.at("kind").get<std::string>();
    r.config = meta.at("config");
    r.columns = meta.at("columns").get<std::vector<std::string>>();
    expected_rows = meta.at("rows").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, 3, std::string("bad metadata: ") + e.what());
  }

  if (lines.size() < 2) throw ParseError(2, 1, "missing header row");
  const auto header = detail::split_csv_line(lines[1]);
  if (header.size() != r.columns.size()) throw ParseError(2, 1, "header does not match metadata columns");
  std::size_t col = 1;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] != r.columns[j]) throw ParseError(2, col, "header does not match metadata columns");
    col += header[j].size() + 1;
  }

  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto cells = detail::split_csv_line(lines[i]);
    if (cells.size() != r.columns.size()) {
      throw ParseError(i + 1, 1, "expected " + std::to_string(r.columns.size()) + " cells, got " +
                                     std::to_string(cells.size()));
    }
    std::vector<double> row(cells.size());
    col = 1;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const auto c = cells[j];
      const auto res = std::from_chars(c.data(), c.data() + c.size(), row[j]);
      if (c.empty() || res.ec != std::errc{} || res.ptr != c.data() + c.size()) {
        throw ParseError(i + 1, col, "bad number '" + std::string(c) + "'");
      }
      col += c.size() + 1;
    }
    r.rows.push_back(std::move(row));
  }
  if (r.rows.size() != expected_rows) {
    throw ParseError(lines.size() + 1, 1, "expected " + std::to_string(expected_rows) + " rows, found " +
                                              std::to_string(r.rows.size()) + " (truncated?)");
  }
  return r;
}

inline ReportFile read_report(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_report(ss.str());
}

/// Histogram table with columns left_edge,right_edge,density.
inline ReportFile histogram_report(std::string kind, ordered_json config, const Histogram& h) {
  ReportFile r;
  r.kind = std::move(kind);
  r.config = std::move(config);
  r.columns = {"left_edge", "right_edge", "density"};
  r.rows.reserve(h.bins());
  for (std::size_t i = 0; i < h.bins(); ++i) r.rows.push_back({h.edges[i], h.edges[i + 1], h.densities[i]});
  return r;
}

}  // namespace critzero
