#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace karlin {

// Scientific notation with 17 significant digits: lossless for every double,
// and byte-stable so output diffs are meaningful.
std::string format_full(double x);

// In-memory CSV assembly: leading '#' comment lines, a header row, then data
// rows of fixed width. All cells are doubles formatted with format_full.
class CsvWriter {
 public:
  CsvWriter(std::vector<std::string> comments, std::vector<std::string> columns);

  void add_row(const std::vector<double>& cells);
  std::size_t rows() const { return rows_; }
  const std::string& str() const { return body_; }

 private:
  std::size_t width_;
  std::size_t rows_ = 0;
  std::string body_;
};

// Writes content to a sibling temp file and renames it over path, creating
// parent directories first; partial files are never visible at path.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace karlin
