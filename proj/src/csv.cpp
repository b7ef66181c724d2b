#include "permstat/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "permstat/error.hpp"

namespace permstat {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw DataError(source + ":" + std::to_string(line) + ": " + what);
}

double parse_field(std::string_view field, const std::string& source, std::size_t line) {
  const std::string_view f = trim(field);
  if (f.empty()) fail(source, line, "empty field");
  const char* begin = f.data();
  // from_chars rejects a leading '+', which is common in exported data.
  if (*begin == '+') ++begin;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, f.data() + f.size(), v);
  if (ec != std::errc() || ptr != f.data() + f.size()) fail(source, line, "not a number: '" + std::string(f) + "'");
  if (!std::isfinite(v)) fail(source, line, "non-finite value: '" + std::string(f) + "'");
  return v;
}

}  // namespace

std::vector<std::vector<double>> parse_csv(std::string_view text, const std::string& source) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw DataError(source + ": no data");

  std::vector<std::vector<double>> rows;
  rows.reserve(lines.size());
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const std::size_t line_no = k + 1;
    if (trim(lines[k]).empty()) fail(source, line_no, "blank line inside data");
    std::vector<double> row;
    std::string_view rest = lines[k];
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_field(rest.substr(0, comma), source, line_no));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(source, line_no,
           "expected " + std::to_string(rows.front().size()) + " fields, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<double>> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path);
}

Matrix read_matrix_csv(const std::string& path) {
  const auto rows = read_csv(path);
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<double> read_column_csv(const std::string& path) {
  const auto rows = read_csv(path);
  if (rows.front().size() != 1) throw DataError(path + ": expected a single column");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.front());
  return out;
}

XyColumns read_xy_csv(const std::string& path) {
  const auto rows = read_csv(path);
  if (rows.front().size() != 2) throw DataError(path + ": expected two columns (x, y)");
  XyColumns out;
  for (const auto& r : rows) {
    out.x.push_back(r[0]);
    out.y.push_back(r[1]);
  }
  return out;
}

}  // namespace permstat
