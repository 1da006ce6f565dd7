#include "tailblocks/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "tailblocks/error.hpp"

namespace tailblocks {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool parse_double(const std::string& s, double* out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end == begin || errno == ERANGE) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  if (*end != '\0') return false;
  *out = v;
  return true;
}

}  // namespace

Series read_csv(std::istream& in, NormKind norm) {
  std::vector<double> data;
  std::size_t dim = 0;
  std::size_t row_index = 0;
  bool seen_content = false;
  std::string line;
  while (std::getline(in, line)) {
    ++row_index;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_row(line);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (!parse_double(cells[c], &row[c])) {
        numeric = false;
        break;
      }
    if (!numeric) {
      if (!seen_content) {  // optional header row
        seen_content = true;
        dim = cells.size();
        continue;
      }
      fail(ErrorCode::ParseError, "non-numeric cell at row " + std::to_string(row_index));
    }
    seen_content = true;
    if (dim == 0) dim = cells.size();
    if (cells.size() != dim)
      fail(ErrorCode::ParseError, "row " + std::to_string(row_index) + " has " +
                                      std::to_string(cells.size()) + " columns, expected " +
                                      std::to_string(dim));
    data.insert(data.end(), row.begin(), row.end());
  }
  if (data.empty()) fail(ErrorCode::ParseError, "no data rows");
  return Series(std::move(data), dim, norm);
}

Series read_csv_file(const std::string& path, NormKind norm) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  return read_csv(in, norm);
}

void write_csv(const Series& series, std::ostream& out) {
  char buf[40];
  for (std::size_t t = 0; t < series.size(); ++t) {
    auto p = series.point(t);
    for (std::size_t c = 0; c < p.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", p[c]);
      if (c) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_csv_file(const Series& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  write_csv(series, out);
  if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace tailblocks
