#pragma once

#include "sugar/dataset.hpp"

#include <filesystem>
#include <string>

namespace sugar {

/// Parse failure with the 1-based physical row and column of the offending cell.
class CsvError : public Error {
 public:
  CsvError(const std::string& what, std::size_t row, std::size_t col)
      : Error(what), row_(row), col_(col) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

DataMatrix load_csv(const std::filesystem::path& path, bool has_header);
DataMatrix parse_csv(const std::string& text, bool has_header);

/// Writes the shortest text that reloads to the same double.
void save_csv(const DataMatrix& m, const std::filesystem::path& path);
std::string format_csv(const DataMatrix& m);

/// Single-column integer label files, with a "label" header.
Labels load_labels(const std::filesystem::path& path);
void save_labels(const Labels& labels, const std::filesystem::path& path);

}  // namespace sugar
