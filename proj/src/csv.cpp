#include "sugar/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sugar {
namespace {

// Splits one CSV record. Quoted fields may contain commas and doubled quotes;
// embedded newlines are not supported since records are read line by line.
std::vector<std::string> split_record(const std::string& line, std::size_t row) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty() && !was_quoted) {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw CsvError("unterminated quoted field at row " + std::to_string(row), row, fields.size() + 1);
  fields.push_back(std::move(cur));
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& cell, double& out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

DataMatrix parse_csv(const std::string& text, bool has_header) {
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  std::vector<std::string> names;
  std::vector<double> values;
  std::size_t width = 0;
  std::size_t data_rows = 0;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_record(line, row);
    if (width == 0) {
      width = fields.size();
    } else if (fields.size() != width) {
      throw CsvError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                         " fields, expected " + std::to_string(width),
                     row, std::min(fields.size(), width) + 1);
    }
    if (has_header && !header_seen) {
      header_seen = true;
      for (auto& f : fields) names.push_back(trim(f));
      continue;
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      if (!parse_double(fields[c], v)) {
        throw CsvError("cannot parse '" + fields[c] + "' as a finite number at row " + std::to_string(row) +
                           " col " + std::to_string(c + 1),
                       row, c + 1);
      }
      values.push_back(v);
    }
    ++data_rows;
  }
  if (data_rows == 0) throw CsvError("CSV contains no data rows", row, 0);

  PointMatrix m(static_cast<Index>(data_rows), static_cast<Index>(width));
  std::copy(values.begin(), values.end(), m.data());
  return DataMatrix(std::move(m), std::move(names));
}

DataMatrix load_csv(const std::filesystem::path& path, bool has_header) {
  try {
    return parse_csv(read_file(path), has_header);
  } catch (const CsvError& e) {
    throw CsvError(path.string() + ": " + e.what(), e.row(), e.col());
  }
}

std::string format_csv(const DataMatrix& m) {
  std::string out;
  if (m.has_col_names()) {
    for (std::size_t j = 0; j < m.col_names().size(); ++j) {
      if (j) out.push_back(',');
      out += quote_if_needed(m.col_names()[j]);
    }
    out.push_back('\n');
  }
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out.push_back(',');
      out += format_double(m(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

void save_csv(const DataMatrix& m, const std::filesystem::path& path) { write_file(path, format_csv(m)); }

Labels load_labels(const std::filesystem::path& path) {
  const DataMatrix m = load_csv(path, true);
  if (m.cols() != 1) throw Error(path.string() + ": label file must have exactly one column");
  Labels out;
  out.reserve(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) {
    const double v = m(i, 0);
    if (v != std::floor(v) || v < 0) {
      throw CsvError(path.string() + ": label at row " + std::to_string(i + 2) + " is not a nonnegative integer",
                     static_cast<std::size_t>(i + 2), 1);
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void save_labels(const Labels& labels, const std::filesystem::path& path) {
  std::string out = "label\n";
  for (int l : labels) out += std::to_string(l) + "\n";
  write_file(path, out);
}

}  // namespace sugar
