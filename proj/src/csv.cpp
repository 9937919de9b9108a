#include "vtsig/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace vtsig {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t at = 0;
  while (true) {
    const std::size_t comma = line.find(',', at);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(at));
      break;
    }
    fields.push_back(line.substr(at, comma - at));
    at = comma + 1;
  }
  return fields;
}

}  // namespace

CsvMatrix read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path.string() + ": missing header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  CsvMatrix csv;
  csv.header = split_line(line);
  const std::size_t cols = csv.header.size();

  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_line(line);
    ++rows;
    if (fields.size() != cols) {
      throw std::runtime_error(path.string() + ": row " +
                               std::to_string(rows + 1) + " has " +
                               std::to_string(fields.size()) +
                               " fields, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double value = 0.0;
      const char* first = fields[c].data();
      const char* last = first + fields[c].size();
      const auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc() || ptr != last) {
        throw std::runtime_error(path.string() + ": row " +
                                 std::to_string(rows + 1) + ", column " +
                                 std::to_string(c + 1) +
                                 ": cannot parse number '" + fields[c] + "'");
      }
      values.push_back(value);
    }
  }

  csv.values.resize(static_cast<Eigen::Index>(rows),
                    static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      csv.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          values[r * cols + c];
    }
  }
  return csv;
}

void write_csv_matrix(const std::filesystem::path& path,
                      const std::vector<std::string>& header,
                      const Eigen::MatrixXd& values) {
  if (header.size() != static_cast<std::size_t>(values.cols())) {
    throw std::invalid_argument("write_csv_matrix: header/column mismatch");
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c > 0) out << ',';
    out << header[c];
  }
  out << '\n';
  char buffer[40];
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c > 0) out << ',';
      std::snprintf(buffer, sizeof buffer, "%.17g", values(r, c));
      out << buffer;
    }
    out << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

}  // namespace vtsig
