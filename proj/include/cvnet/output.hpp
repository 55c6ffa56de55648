#pragma once

// CSV tables with a JSON sidecar. Numbers are written as %.16e so repeated
// runs diff cleanly.

#include <nlohmann/json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace cvnet {

std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> columns);
  void row(const std::vector<double>& values);
  const std::string& path() const { return path_; }
  std::size_t rows() const { return rows_; }

 private:
  std::string path_;
  std::size_t width_;
  std::size_t rows_ = 0;
  std::ofstream out_;
};

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace cvnet
