#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

namespace vtsig {

struct CsvMatrix {
  std::vector<std::string> header;
  Eigen::MatrixXd values;
};

/// Reads a numeric CSV (UTF-8, comma separated, '.' decimal, one header
/// row). Throws std::runtime_error naming the file and the offending
/// row/column on parse failures.
CsvMatrix read_csv_matrix(const std::filesystem::path& path);

/// Writes a matrix with a header row; values are rendered round-trip exact.
void write_csv_matrix(const std::filesystem::path& path,
                      const std::vector<std::string>& header,
                      const Eigen::MatrixXd& values);

}  // namespace vtsig
