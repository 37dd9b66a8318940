#include "acspec/io.hpp"

#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace acspec {

namespace {

constexpr char kMagic[4] = {'L', 'S', 'D', 'X'};

void put_u32(std::ofstream& out, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);  // little-endian host
  out.write(buf, 4);
}

std::uint32_t get_u32(std::ifstream& in) {
  char buf[4];
  in.read(buf, 4);
  std::uint32_t v;
  std::memcpy(&v, buf, 4);
  return v;
}

void write_doubles(std::ofstream& out, const double* p, std::size_t count) {
  out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(count * sizeof(double)));
}

}  // namespace

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

CsvFile::CsvFile(const std::string& path, const std::string& meta, const std::string& header)
    : out_(path) {
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  out_ << "# " << meta << '\n' << header << '\n';
}

void CsvFile::raw_row(const std::string& line) { out_ << line << '\n'; }

void CsvFile::write_cell(double v, bool first) {
  if (!first) out_ << ',';
  out_ << format_double(v);
}

void CsvFile::write_cell(int v, bool first) {
  if (!first) out_ << ',';
  out_ << v;
}

void CsvFile::write_cell(long v, bool first) {
  if (!first) out_ << ',';
  out_ << v;
}

void write_data_matrix(const std::string& path, const Eigen::MatrixXd& X) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(X.rows()));
  put_u32(out, static_cast<std::uint32_t>(X.cols()));
  put_u32(out, 0u);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    Eigen::RowVectorXd row = X.row(i);
    write_doubles(out, row.data(), static_cast<std::size_t>(row.size()));
  }
}

void write_data_matrix(const std::string& path, const Eigen::MatrixXcd& X) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(X.rows()));
  put_u32(out, static_cast<std::uint32_t>(X.cols()));
  put_u32(out, 1u);
  std::vector<double> row(2 * static_cast<std::size_t>(X.cols()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      row[2 * static_cast<std::size_t>(j)] = X(i, j).real();
      row[2 * static_cast<std::size_t>(j) + 1] = X(i, j).imag();
    }
    write_doubles(out, row.data(), row.size());
  }
}

std::variant<Eigen::MatrixXd, Eigen::MatrixXcd> read_data_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error(path + " is not a data matrix dump (bad magic)");
  const std::uint32_t p = get_u32(in);
  const std::uint32_t n = get_u32(in);
  const std::uint32_t flags = get_u32(in);
  if (!in || p == 0 || n == 0) throw std::runtime_error(path + ": corrupt dump header");
  const bool complex_data = (flags & 1u) != 0;
  const std::size_t scalars = static_cast<std::size_t>(p) * n * (complex_data ? 2 : 1);
  std::vector<double> buf(scalars);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(scalars * sizeof(double)));
  if (!in) throw std::runtime_error(path + ": truncated dump payload");
  if (complex_data) {
    Eigen::MatrixXcd X(p, n);
    std::size_t k = 0;
    for (std::uint32_t i = 0; i < p; ++i)
      for (std::uint32_t j = 0; j < n; ++j, k += 2) X(i, j) = Complex(buf[k], buf[k + 1]);
    return X;
  }
  Eigen::MatrixXd X(p, n);
  std::size_t k = 0;
  for (std::uint32_t i = 0; i < p; ++i)
    for (std::uint32_t j = 0; j < n; ++j, ++k) X(i, j) = buf[k];
  return X;
}

}  // namespace acspec
