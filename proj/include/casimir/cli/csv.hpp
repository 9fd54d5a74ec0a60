#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace casimir::cli {

/// 17 significant digits; parses back to the identical double.
std::string format_double(double v);

/// UTF-8 CSV with a fixed header row. Fields are numbers or plain labels
/// that never need quoting.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& fields);
  void row(const std::vector<double>& values);

  std::size_t columns() const { return columns_; }

 private:
  std::ofstream out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);

}  // namespace casimir::cli
