#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "spacobi/errors.hpp"
#include "spacobi/matrix.hpp"

namespace spacobi {

// A data matrix with optional entity labels. Column labels round-trip
// through the CSV header; row labels are carried for report output only.
struct DataMatrix {
  DenseMatrix values;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline bool parse_double(std::string_view field, double& out) {
  field = trim(field);
  if (field.empty()) return false;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

// Parses comma-separated numeric data. A single header row of column
// labels is autodetected when the first row has any non-numeric field.
inline DataMatrix read_csv_text(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      lines.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  while (!lines.empty() && detail::trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw CsvParseError("empty CSV input", 1);

  DataMatrix out;
  std::size_t first_data_line = 0;
  std::size_t cols = 0;
  {
    const auto fields = detail::split_fields(lines[0]);
    cols = fields.size();
    bool numeric = true;
    double v;
    for (const auto& f : fields)
      if (!detail::parse_double(f, v)) {
        numeric = false;
        break;
      }
    if (!numeric) {
      for (const auto& f : fields)
        out.col_labels.emplace_back(detail::trim(f));
      first_data_line = 1;
      if (lines.size() == 1)
        throw CsvParseError("header row with no data rows", 1);
    }
  }

  std::vector<double> entries;
  std::size_t rows = 0;
  entries.reserve((lines.size() - first_data_line) * cols);
  for (std::size_t li = first_data_line; li < lines.size(); ++li) {
    const auto fields = detail::split_fields(lines[li]);
    if (fields.size() != cols)
      throw CsvParseError("expected " + std::to_string(cols) + " fields, got " +
                              std::to_string(fields.size()),
                          li + 1);
    for (const auto& f : fields) {
      double v;
      if (!detail::parse_double(f, v))
        throw CsvParseError("could not parse numeric field '" +
                                std::string(detail::trim(f)) + "'",
                            li + 1);
      if (!std::isfinite(v))
        throw CsvParseError("non-finite value", li + 1);
      entries.push_back(v);
    }
    ++rows;
  }
  out.values = DenseMatrix(rows, cols, std::move(entries));
  return out;
}

inline DataMatrix read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_csv_text(buf.str());
}

// Full-precision CSV text: shortest round-trip formatting, LF endings.
inline std::string to_csv_text(const DataMatrix& m) {
  std::string out;
  const std::size_t rows = m.values.rows(), cols = m.values.cols();
  if (!m.col_labels.empty()) {
    if (m.col_labels.size() != cols)
      throw DimensionMismatchError("to_csv_text: column label count mismatch");
    for (std::size_t j = 0; j < cols; ++j) {
      if (j) out += ',';
      out += m.col_labels[j];
    }
    out += '\n';
  }
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (j) out += ',';
      out += detail::format_double(m.values(i, j));
    }
    out += '\n';
  }
  return out;
}

inline void write_csv(const DataMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << to_csv_text(m);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace spacobi
