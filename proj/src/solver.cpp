#include "georbf/solver.hpp"

#include <algorithm>
#include <cmath>

#include "georbf/kernels.hpp"

namespace georbf {

void IdentityPrecond::apply(std::span<const double> in, std::span<double> out) const {
  std::copy(in.begin(), in.end(), out.begin());
}

JacobiPrecond::JacobiPrecond(const SparseMatrix& a) {
  if (a.rows != a.cols) throw ShapeError("JacobiPrecond: matrix must be square");
  inv_diag_.assign(a.rows, 0.0);
  for (std::size_t r = 0; r < a.rows; ++r) {
    double d = 0.0;
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
      if (a.col[k] == r) d = a.val[k];
    if (d == 0.0) throw FactorizationError(r);
    inv_diag_[r] = 1.0 / d;
  }
}

void JacobiPrecond::apply(std::span<const double> in, std::span<double> out) const {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = inv_diag_[i] * in[i];
}

Ilu0 Ilu0::factorize(const SparseMatrix& a) {
  if (a.rows != a.cols) throw ShapeError("Ilu0: matrix must be square");
  Ilu0 f;
  f.lu_ = a;
  const std::size_t n = a.rows;
  f.diag_.assign(n, static_cast<std::size_t>(-1));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
      if (a.col[k] == r) f.diag_[r] = k;

  std::vector<std::ptrdiff_t> pos(n, -1);  // scatter of the current row's pattern
  auto& lu = f.lu_;
  for (std::size_t i = 0; i < n; ++i) {
    if (f.diag_[i] == static_cast<std::size_t>(-1)) throw FactorizationError(i);
    for (std::size_t k = lu.row_ptr[i]; k < lu.row_ptr[i + 1]; ++k)
      pos[lu.col[k]] = static_cast<std::ptrdiff_t>(k);
    for (std::size_t kk = lu.row_ptr[i]; kk < lu.row_ptr[i + 1] && lu.col[kk] < i; ++kk) {
      const std::uint32_t k = lu.col[kk];
      const double pivot = lu.val[f.diag_[k]];
      if (pivot == 0.0) {
        for (std::size_t c = lu.row_ptr[i]; c < lu.row_ptr[i + 1]; ++c) pos[lu.col[c]] = -1;
        throw FactorizationError(k);
      }
      const double factor = lu.val[kk] / pivot;
      lu.val[kk] = factor;
      for (std::size_t jj = f.diag_[k] + 1; jj < lu.row_ptr[k + 1]; ++jj) {
        const std::ptrdiff_t p = pos[lu.col[jj]];
        if (p >= 0) lu.val[p] -= factor * lu.val[jj];
      }
    }
    if (lu.val[f.diag_[i]] == 0.0) {
      for (std::size_t c = lu.row_ptr[i]; c < lu.row_ptr[i + 1]; ++c) pos[lu.col[c]] = -1;
      throw FactorizationError(i);
    }
    for (std::size_t k = lu.row_ptr[i]; k < lu.row_ptr[i + 1]; ++k) pos[lu.col[k]] = -1;
  }
  return f;
}

void Ilu0::apply(std::span<const double> in, std::span<double> out) const {
  const std::size_t n = lu_.rows;
  // L z = in (unit diagonal)
  for (std::size_t i = 0; i < n; ++i) {
    double s = in[i];
    for (std::size_t k = lu_.row_ptr[i]; k < diag_[i]; ++k) s -= lu_.val[k] * out[lu_.col[k]];
    out[i] = s;
  }
  // U out = z
  for (std::size_t ii = n; ii-- > 0;) {
    double s = out[ii];
    for (std::size_t k = diag_[ii] + 1; k < lu_.row_ptr[ii + 1]; ++k)
      s -= lu_.val[k] * out[lu_.col[k]];
    out[ii] = s / lu_.val[diag_[ii]];
  }
}

SolveReport gmres(const SparseMatrix& a, std::span<const double> b, const Preconditioner& precond,
                  std::span<double> x, const SolverOptions& options) {
  if (a.rows != a.cols) throw ShapeError("gmres: matrix must be square");
  if (b.size() != a.rows || x.size() != a.rows) throw ShapeError("gmres: vector length mismatch");
  const std::size_t n = a.rows;
  const auto& ops = kernels::active();

  SolveReport report;
  std::fill(x.begin(), x.end(), 0.0);
  const double bnorm = ops.nrm2(b.data(), n);
  if (bnorm == 0.0) {
    report.converged = true;
    report.relative_residual = 0.0;
    return report;
  }

  const std::size_t m = std::max<std::size_t>(1, options.restart);
  std::vector<std::vector<double>> basis(m + 1);  // columns allocated on demand
  std::vector<double> hess((m + 1) * m, 0.0);
  std::vector<double> cs(m), sn(m), g(m + 1);
  std::vector<double> r(n), w(n), z(n);

  const auto true_relres = [&]() {
    matvec(a, x, std::span<double>(r));
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    return ops.nrm2(r.data(), n) / bnorm;
  };

  while (true) {
    const double relres = true_relres();  // r holds b - A x afterwards
    report.relative_residual = relres;
    if (relres <= options.tol) {
      report.converged = true;
      return report;
    }
    if (report.iterations >= options.max_iter) return report;

    const double beta = ops.nrm2(r.data(), n);
    basis[0] = r;
    ops.scal(1.0 / beta, basis[0].data(), n);
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    std::fill(hess.begin(), hess.end(), 0.0);

    std::size_t j = 0;
    for (; j < m && report.iterations < options.max_iter; ++j) {
      // Right preconditioning: w = A M^-1 v_j.
      precond.apply(basis[j], z);
      matvec(a, z, std::span<double>(w));
      // Modified Gram-Schmidt.
      for (std::size_t i = 0; i <= j; ++i) {
        const double h = ops.dot(w.data(), basis[i].data(), n);
        hess[i * m + j] = h;
        ops.axpy(-h, basis[i].data(), w.data(), n);
      }
      const double hnext = ops.nrm2(w.data(), n);
      hess[(j + 1) * m + j] = hnext;
      if (hnext != 0.0) {
        basis[j + 1] = w;
        ops.scal(1.0 / hnext, basis[j + 1].data(), n);
      } else {
        basis[j + 1].assign(n, 0.0);
      }
      // Apply accumulated Givens rotations to the new column.
      for (std::size_t i = 0; i < j; ++i) {
        const double t1 = hess[i * m + j];
        const double t2 = hess[(i + 1) * m + j];
        hess[i * m + j] = cs[i] * t1 + sn[i] * t2;
        hess[(i + 1) * m + j] = -sn[i] * t1 + cs[i] * t2;
      }
      const double h1 = hess[j * m + j];
      const double h2 = hess[(j + 1) * m + j];
      const double rho = std::sqrt(h1 * h1 + h2 * h2);
      if (rho == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else {
        cs[j] = h1 / rho;
        sn[j] = h2 / rho;
      }
      hess[j * m + j] = cs[j] * h1 + sn[j] * h2;
      hess[(j + 1) * m + j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      ++report.iterations;
      const double estimate = std::abs(g[j + 1]) / bnorm;
      report.residual_history.push_back(estimate);
      if (estimate <= options.tol || hnext == 0.0) {
        ++j;
        break;
      }
    }

    // y from the j x j triangular system, then x += M^-1 (V y).
    std::vector<double> y(j, 0.0);
    for (std::size_t ii = j; ii-- > 0;) {
      double s = g[ii];
      for (std::size_t k = ii + 1; k < j; ++k) s -= hess[ii * m + k] * y[k];
      y[ii] = s / hess[ii * m + ii];
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t k = 0; k < j; ++k) ops.axpy(y[k], basis[k].data(), w.data(), n);
    precond.apply(w, z);
    for (std::size_t i = 0; i < n; ++i) x[i] += z[i];
  }
}

}  // namespace georbf
