#include "georbf/sparse.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace georbf {

SparseMatrix csr_from_columns(std::size_t rows, std::size_t cols,
                              std::span<const std::vector<std::pair<std::uint32_t, double>>> columns) {
  if (columns.size() != cols) throw ShapeError("csr_from_columns: column count mismatch");
  SparseMatrix a;
  a.rows = rows;
  a.cols = cols;
  a.row_ptr.assign(rows + 1, 0);
  for (const auto& column : columns)
    for (const auto& [row, value] : column) {
      (void)value;
      if (row >= rows) throw ShapeError("csr_from_columns: row index out of range");
      ++a.row_ptr[row + 1];
    }
  for (std::size_t r = 0; r < rows; ++r) a.row_ptr[r + 1] += a.row_ptr[r];
  a.col.resize(a.row_ptr[rows]);
  a.val.resize(a.row_ptr[rows]);
  std::vector<std::size_t> cursor(a.row_ptr.begin(), a.row_ptr.end() - 1);
  // Walking columns in ascending order leaves every row sorted by column.
  for (std::size_t c = 0; c < cols; ++c)
    for (const auto& [row, value] : columns[c]) {
      const std::size_t k = cursor[row]++;
      a.col[k] = static_cast<std::uint32_t>(c);
      a.val[k] = value;
    }
  return a;
}

void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.cols || y.size() != a.rows)
    throw ShapeError("matvec: got x of length " + std::to_string(x.size()) + ", y of length " +
                     std::to_string(y.size()) + " for a " + std::to_string(a.rows) + "x" +
                     std::to_string(a.cols) + " matrix");
  for (std::size_t r = 0; r < a.rows; ++r) {
    double s = 0.0;
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.val[k] * x[a.col[k]];
    y[r] = s;
  }
}

std::vector<double> matvec(const SparseMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.rows);
  matvec(a, x, y);
  return y;
}

void write_matrix_market(const SparseMatrix& a, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows << ' ' << a.cols << ' ' << a.nnz() << '\n';
  char buf[64];
  for (std::size_t r = 0; r < a.rows; ++r)
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      std::snprintf(buf, sizeof(buf), "%zu %u %.17g\n", r + 1, a.col[k] + 1, a.val[k]);
      out << buf;
    }
  if (!out) throw IoError("write failed on " + path);
}

}  // namespace georbf
