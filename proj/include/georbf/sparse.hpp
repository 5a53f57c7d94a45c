#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "georbf/error.hpp"

namespace georbf {

/// Compressed sparse row matrix. Column ids are sorted and unique per row.
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr;  // size rows + 1
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  std::size_t nnz() const { return val.size(); }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.row_ptr == b.row_ptr && a.col == b.col &&
           a.val == b.val;
  }
};

/// Builds CSR from per-column entry lists; each column's rows need not be
/// sorted, duplicates within a column are invalid.
SparseMatrix csr_from_columns(std::size_t rows, std::size_t cols,
                              std::span<const std::vector<std::pair<std::uint32_t, double>>> columns);

/// y = A x. Row sums are accumulated sequentially, so the result does not
/// depend on thread count or call site.
void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
std::vector<double> matvec(const SparseMatrix& a, std::span<const double> x);

/// Matrix Market coordinate format, for debugging.
void write_matrix_market(const SparseMatrix& a, const std::string& path);

}  // namespace georbf
