#include "lrcs/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace lrcs {

namespace {

double parse_field(const std::string& field, const std::string& origin, std::size_t line,
                   std::size_t col) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  // Trailing whitespace is tolerated, anything else is a parse error.
  while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  if (end == begin || (end && *end != '\0'))
    throw io_error(origin + ": line " + std::to_string(line) + ", field " +
                   std::to_string(col) + ": cannot parse '" + field + "' as a number");
  if (!std::isfinite(v))
    throw io_error(origin + ": line " + std::to_string(line) + ", field " +
                   std::to_string(col) + ": non-finite value");
  return v;
}

}  // namespace

Matrix parse_csv(const std::string& text, const std::string& origin) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    std::size_t field = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      const std::string piece =
          line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      row.push_back(parse_field(piece, origin, lineno, ++field));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw io_error(origin + ": line " + std::to_string(lineno) + ": expected " +
                     std::to_string(rows.front().size()) + " fields, got " +
                     std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw io_error(origin + ": empty matrix file");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

std::string format_csv(const Matrix& m) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.size()) * 24);
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out += buf;
      out += (j + 1 < m.cols()) ? ',' : '\n';
    }
    if (m.cols() == 0) out += '\n';
  }
  return out;
}

Matrix read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), path);
}

void write_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error(path + ": cannot open for writing");
  out << format_csv(m);
  if (!out) throw io_error(path + ": write failed");
}

}  // namespace lrcs
