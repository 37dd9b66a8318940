#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <variant>

#include "acspec/model.hpp"

namespace acspec {

std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

// CSV with one leading '#' metadata line, a header row, '.' decimals.
class CsvFile {
 public:
  CsvFile(const std::string& path, const std::string& meta, const std::string& header);

  template <class... Ts>
  void row(Ts... vals) {
    bool first = true;
    ((write_cell(vals, first), first = false), ...);
    out_ << '\n';
  }

  // Preassembled line, for rows whose width is only known at runtime.
  void raw_row(const std::string& line);

 private:
  void write_cell(double v, bool first);
  void write_cell(int v, bool first);
  void write_cell(long v, bool first);
  std::ofstream out_;
};

std::string format_double(double v);

// Raw observation dump: 16-byte header (magic "LSDX", u32 p, u32 n, u32 flags
// with bit0 = complex), then row-major little-endian 64-bit floats; complex
// entries are written as consecutive (re, im) pairs.
void write_data_matrix(const std::string& path, const Eigen::MatrixXd& X);
void write_data_matrix(const std::string& path, const Eigen::MatrixXcd& X);
std::variant<Eigen::MatrixXd, Eigen::MatrixXcd> read_data_matrix(const std::string& path);

}  // namespace acspec
