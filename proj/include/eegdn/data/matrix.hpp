#pragma once

// EDNB matrix file (little-endian):
//   "EDNB" | u32 rows | u32 cols | rows*cols x f64, row-major
// The file ends exactly after the payload.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "eegdn/error.hpp"

namespace eegdn::data {

/// Rows are epochs, columns are samples.
class EpochMatrix {
 public:
  EpochMatrix() = default;
  EpochMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  EpochMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw ShapeError("EpochMatrix: data size does not match rows*cols");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<double>& data() const { return data_; }

  void append_row(std::span<const double> r) {
    if (rows_ == 0 && data_.empty()) cols_ = r.size();
    if (r.size() != cols_) throw ShapeError("EpochMatrix: row length " + std::to_string(r.size()) + " != " + std::to_string(cols_));
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  friend bool operator==(const EpochMatrix&, const EpochMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class MatrixFormat { ednb, csv };

inline std::vector<std::uint8_t> encode_ednb(const EpochMatrix& m) {
  std::vector<std::uint8_t> out;
  out.reserve(12 + m.data().size() * 8);
  for (char c : {'E', 'D', 'N', 'B'}) out.push_back(static_cast<std::uint8_t>(c));
  const auto put = [&](std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
  };
  put(m.rows(), 4);
  put(m.cols(), 4);
  for (double v : m.data()) put(std::bit_cast<std::uint64_t>(v), 8);
  return out;
}

inline EpochMatrix decode_ednb(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 12) throw FormatError("EDNB: header truncated (" + std::to_string(bytes.size()) + " bytes)");
  if (!(bytes[0] == 'E' && bytes[1] == 'D' && bytes[2] == 'N' && bytes[3] == 'B')) {
    throw FormatError("EDNB: bad magic at byte offset 0");
  }
  const auto get = [&](std::size_t off, int n) {
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes[off + i]) << (8 * i);
    return v;
  };
  const std::uint64_t rows = get(4, 4), cols = get(8, 4);
  const std::uint64_t expected = 12 + rows * cols * 8;
  if (bytes.size() != expected) {
    throw FormatError("EDNB: payload size mismatch: header declares " + std::to_string(rows) + "x" +
                      std::to_string(cols) + " (" + std::to_string(expected) + " bytes), file has " +
                      std::to_string(bytes.size()));
  }
  std::vector<double> data(rows * cols);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t off = 12 + i * 8;
    data[i] = std::bit_cast<double>(get(off, 8));
    if (!std::isfinite(data[i])) {
      throw FormatError("EDNB: non-finite value at byte offset " + std::to_string(off) + " (row " +
                        std::to_string(i / cols) + ")");
    }
  }
  return EpochMatrix(rows, cols, std::move(data));
}

/// Headerless CSV, one epoch per line.
inline EpochMatrix parse_csv(const std::string& text) {
  EpochMatrix m;
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> values;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        if (cell.find_first_not_of(" \t", pos) != std::string::npos) throw std::invalid_argument(cell);
        if (!std::isfinite(v)) throw FormatError("CSV: non-finite value in row " + std::to_string(row));
        values.push_back(v);
      } catch (const FormatError&) {
        throw;
      } catch (const std::exception&) {
        throw FormatError("CSV: unparsable value '" + cell + "' in row " + std::to_string(row));
      }
    }
    if (m.rows() > 0 && values.size() != m.cols()) {
      throw FormatError("CSV: row " + std::to_string(row) + " has " + std::to_string(values.size()) +
                        " columns, expected " + std::to_string(m.cols()));
    }
    m.append_row(values);
    ++row;
  }
  return m;
}

inline std::string format_csv(const EpochMatrix& m) {
  std::string out;
  char buf[32];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      if (c) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

inline std::string read_text(const std::filesystem::path& path) {
  const auto b = read_bytes(path);
  return {b.begin(), b.end()};
}

inline MatrixFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? MatrixFormat::csv : MatrixFormat::ednb;
}

inline EpochMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  if (format == MatrixFormat::csv) return parse_csv(read_text(path));
  try {
    return decode_ednb(read_bytes(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

inline EpochMatrix load_matrix(const std::filesystem::path& path) { return load_matrix(path, format_from_path(path)); }

inline void save_matrix(const EpochMatrix& m, const std::filesystem::path& path, MatrixFormat format) {
  if (format == MatrixFormat::csv) {
    write_text(path, format_csv(m));
  } else {
    write_bytes(path, encode_ednb(m));
  }
}

inline void save_matrix(const EpochMatrix& m, const std::filesystem::path& path) {
  save_matrix(m, path, format_from_path(path));
}

}  // namespace eegdn::data
