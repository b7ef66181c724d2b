#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "permstat/linalg.hpp"

namespace permstat {

// Dense numeric CSV: comma separated, no header, LF or CRLF line endings.
// Trailing blank lines are ignored; every other line must hold the same
// number of fields. Errors are DataError with "source:line: message".
std::vector<std::vector<double>> parse_csv(std::string_view text, const std::string& source);
std::vector<std::vector<double>> read_csv(const std::string& path);

Matrix read_matrix_csv(const std::string& path);
std::vector<double> read_column_csv(const std::string& path);

struct XyColumns {
  std::vector<double> x;
  std::vector<double> y;
};
XyColumns read_xy_csv(const std::string& path);

}  // namespace permstat
