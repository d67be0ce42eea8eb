#include "karlin/csvio.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <stdexcept>
#include <utility>

namespace karlin {

std::string format_full(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> comments, std::vector<std::string> columns)
    : width_(columns.size()) {
  if (columns.empty()) throw std::invalid_argument("CsvWriter: no columns");
  for (const auto& line : comments) {
    body_ += "# ";
    body_ += line;
    body_ += '\n';
  }
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (j) body_ += ',';
    body_ += columns[j];
  }
  body_ += '\n';
}

void CsvWriter::add_row(const std::vector<double>& cells) {
  if (cells.size() != width_) throw std::invalid_argument("CsvWriter: row width mismatch");
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (j) body_ += ',';
    body_ += format_full(cells[j]);
  }
  body_ += '\n';
  ++rows_;
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec)
      throw std::runtime_error("cannot create directory " + target.parent_path().string() +
                               ": " + ec.message());
  }
  std::string tmp = path + ".tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open " + tmp + ": " + std::strerror(errno));
  std::size_t written = std::fwrite(content.data(), 1, content.size(), f);
  int close_rc = std::fclose(f);
  if (written != content.size() || close_rc != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    int err = errno;
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename " + tmp + " to " + path + ": " +
                             std::strerror(err));
  }
}

}  // namespace karlin
