#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "heatpanel/errors.hpp"
#include "heatpanel/io.hpp"
#include "heatpanel/text.hpp"

namespace heatpanel {

/// Parsed CSV with a mandatory header row. Comma separated, UTF-8,
/// '.' decimal point; quoted fields follow the usual doubling rule.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw MissingColumnError("missing column '" + name + "'");
  }

  bool has_col(const std::string& name) const {
    for (const auto& h : header)
      if (h == name) return true;
    return false;
  }
};

namespace detail {

inline std::vector<std::string> parse_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline std::string csv_field(std::string_view v) {
  bool needs_quotes = v.find_first_of(",\"\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(v);
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace detail

inline CsvTable parse_csv(std::string_view content, const std::string& origin) {
  CsvTable table;
  std::size_t start = 0;
  bool first = true;
  while (start <= content.size()) {
    auto pos = content.find('\n', start);
    std::string_view line = (pos == std::string_view::npos)
                                ? content.substr(start)
                                : content.substr(start, pos - start);
    start = (pos == std::string_view::npos) ? content.size() + 1 : pos + 1;
    if (line.empty() || line == "\r") {
      if (pos == std::string_view::npos) break;
      continue;
    }
    auto fields = detail::parse_csv_record(line);
    if (first) {
      for (auto& f : fields) table.header.push_back(trim(f));
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  if (first) throw ParseError(origin + ": empty CSV, header row is mandatory");
  return table;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
  return parse_csv(read_file(path), path.string());
}

inline std::string csv_line(std::span<const std::string> fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += detail::csv_field(fields[i]);
  }
  out.push_back('\n');
  return out;
}

}  // namespace heatpanel
