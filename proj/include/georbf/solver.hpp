#pragma once

#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "georbf/sparse.hpp"

namespace georbf {

struct SolverOptions {
  double tol = 1e-10;  // relative true-residual target
  // Geodesic thresholding makes the interpolation systems noticeably harder
  // than plain RBF ones; GMRES(100) can cycle on them, so the default
  // restart is generous. The basis is allocated lazily, so easy systems pay
  // only for the iterations they use.
  std::size_t restart = 400;
  std::size_t max_iter = 4000;
};

struct SolveReport {
  std::size_t iterations = 0;
  double relative_residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  // Per-inner-iteration residual estimates (relative); nonincreasing within
  // each restart cycle by the Arnoldi least-squares property.
  std::vector<double> residual_history;
};

class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual void apply(std::span<const double> in, std::span<double> out) const = 0;
};

class IdentityPrecond final : public Preconditioner {
 public:
  void apply(std::span<const double> in, std::span<double> out) const override;
};

/// diag(A)^-1; always well-defined for matrices with unit diagonal.
class JacobiPrecond final : public Preconditioner {
 public:
  explicit JacobiPrecond(const SparseMatrix& a);
  void apply(std::span<const double> in, std::span<double> out) const override;

 private:
  std::vector<double> inv_diag_;
};

/// Incomplete LU with zero fill-in on the sparsity pattern of A.
/// Exact for diagonal and triangular matrices. Throws FactorizationError on
/// a zero pivot.
class Ilu0 final : public Preconditioner {
 public:
  static Ilu0 factorize(const SparseMatrix& a);
  void apply(std::span<const double> in, std::span<double> out) const override;

 private:
  Ilu0() = default;
  SparseMatrix lu_;                 // L (unit diagonal, implicit) and U share A's pattern
  std::vector<std::size_t> diag_;   // position of the diagonal in each row
};

/// Restarted GMRES with right preconditioning, so the reported residual is
/// the true residual. On convergence the solution is re-verified with a
/// fresh matvec; if the recurrence estimate was optimistic the iteration
/// resumes. Single-threaded with fixed-order reductions: results are
/// reproducible across runs and thread counts.
SolveReport gmres(const SparseMatrix& a, std::span<const double> b, const Preconditioner& precond,
                  std::span<double> x, const SolverOptions& options = {});

}  // namespace georbf
