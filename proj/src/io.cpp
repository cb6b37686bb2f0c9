#include "memrx/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace memrx {

std::string format_double(double x) { return fmt::format("{}", x); }

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream f(path, mode);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  return f;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ifstream f(path, mode);
  if (!f) throw std::runtime_error("cannot open for reading: " + path.string());
  return f;
}

}  // namespace

void write_csv_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  auto f = open_out(path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) f << ',';
      f << format_double(m(r, c));
    }
    f << '\n';
  }
}

void write_csv_vector(const std::filesystem::path& path, const Eigen::VectorXd& v) {
  auto f = open_out(path);
  for (Eigen::Index i = 0; i < v.size(); ++i) f << format_double(v(i)) << '\n';
}

Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path) {
  auto f = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("read_csv_matrix: ragged rows in " + path.string());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("read_csv_matrix: empty file " + path.string());
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

void write_pgm(const std::filesystem::path& path, const ConcentrationImage& img) {
  const int n = img.grid.n_per_side;
  auto f = open_out(path);
  f << "P2\n" << n << ' ' << n << "\n255\n";
  // PGM scans top-to-bottom; the grid's row 0 is the bottom of the region.
  for (int r = n - 1; r >= 0; --r) {
    for (int c = 0; c < n; ++c) {
      if (c) f << ' ';
      f << static_cast<int>(std::lround(255.0 * img.values(r * n + c) / img.n_max));
    }
    f << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<IterationRecord>& trace) {
  auto f = open_out(path);
  f << "iteration,objective,relative_change,feasibility_violation\n";
  for (const auto& rec : trace)
    f << rec.iteration << ',' << format_double(rec.objective) << ','
      << format_double(rec.relative_change) << ','
      << format_double(rec.feasibility_violation) << '\n';
}

namespace {
constexpr char kCacheMagic[8] = {'M', 'R', 'X', 'L', 'F', '0', '1', '\0'};
}

void write_lead_field_cache(const std::filesystem::path& path, const LeadField& lf) {
  auto f = open_out(path, std::ios::binary);
  f.write(kCacheMagic, sizeof(kCacheMagic));
  const std::int64_t rows = lf.matrix.rows(), cols = lf.matrix.cols();
  const std::int64_t ns = lf.n_sensors, nc = lf.n_coils;
  f.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  f.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
  f.write(reinterpret_cast<const char*>(&ns), sizeof(ns));
  f.write(reinterpret_cast<const char*>(&nc), sizeof(nc));
  f.write(reinterpret_cast<const char*>(&lf.scale), sizeof(lf.scale));
  f.write(reinterpret_cast<const char*>(lf.matrix.data()),
          static_cast<std::streamsize>(sizeof(double) * lf.matrix.size()));
}

LeadField read_lead_field_cache(const std::filesystem::path& path) {
  auto f = open_in(path, std::ios::binary);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0)
    throw std::runtime_error("bad lead field cache: " + path.string());
  std::int64_t rows, cols, ns, nc;
  f.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  f.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  f.read(reinterpret_cast<char*>(&ns), sizeof(ns));
  f.read(reinterpret_cast<char*>(&nc), sizeof(nc));
  LeadField lf;
  f.read(reinterpret_cast<char*>(&lf.scale), sizeof(lf.scale));
  lf.matrix.resize(rows, cols);
  lf.n_sensors = static_cast<int>(ns);
  lf.n_coils = static_cast<int>(nc);
  f.read(reinterpret_cast<char*>(lf.matrix.data()),
         static_cast<std::streamsize>(sizeof(double) * lf.matrix.size()));
  if (!f) throw std::runtime_error("truncated lead field cache: " + path.string());
  return lf;
}

std::uint64_t fnv1a_hash(const void* data, std::size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t hash_file(const std::filesystem::path& path) {
  auto f = open_in(path, std::ios::binary);
  std::uint64_t h = 14695981039346656037ull;
  char buf[1 << 16];
  while (f) {
    f.read(buf, sizeof(buf));
    const auto got = f.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::uint64_t hash_string(const std::string& s) { return fnv1a_hash(s.data(), s.size()); }

}  // namespace memrx
