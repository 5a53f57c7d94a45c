#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "georbf/kernels.hpp"
#include "georbf/solver.hpp"
#include "support.hpp"

using namespace georbf;

namespace {

SparseMatrix from_dense(const std::vector<std::vector<double>>& dense) {
  SparseMatrix a;
  a.rows = dense.size();
  a.cols = dense.empty() ? 0 : dense[0].size();
  a.row_ptr.assign(a.rows + 1, 0);
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t c = 0; c < a.cols; ++c)
      if (dense[r][c] != 0.0) {
        a.col.push_back(std::uint32_t(c));
        a.val.push_back(dense[r][c]);
      }
    a.row_ptr[r + 1] = a.col.size();
  }
  return a;
}

SparseMatrix random_dd_matrix(std::mt19937_64& gen, std::size_t n, double density) {
  std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    double off = 0.0;
    for (std::size_t c = 0; c < n; ++c)
      if (c != r && testing::uniform(gen, 0, 1) < density) {
        dense[r][c] = testing::uniform(gen, -1, 1);
        off += std::abs(dense[r][c]);
      }
    dense[r][r] = off + testing::uniform(gen, 0.5, 1.5);  // strictly dominant
  }
  return from_dense(dense);
}

double true_relres(const SparseMatrix& a, std::span<const double> b, std::span<const double> x) {
  auto r = matvec(a, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return kernels::active().nrm2(r.data(), r.size()) / kernels::active().nrm2(b.data(), b.size());
}

}  // namespace

TEST_CASE("matvec: identity, zero, dense oracle") {
  const SparseMatrix eye = from_dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const std::vector<double> x{3, -1, 2};
  CHECK(matvec(eye, x) == x);

  SparseMatrix zero;
  zero.rows = zero.cols = 3;
  zero.row_ptr = {0, 0, 0, 0};
  CHECK(matvec(zero, x) == std::vector<double>{0, 0, 0});

  auto gen = testing::rng(61);
  std::vector<std::vector<double>> dense(50, std::vector<double>(50, 0.0));
  for (auto& row : dense)
    for (auto& v : row)
      if (testing::uniform(gen, 0, 1) < 0.2) v = testing::uniform(gen, -2, 2);
  const SparseMatrix a = from_dense(dense);
  std::vector<double> v(50);
  for (auto& e : v) e = testing::uniform(gen, -1, 1);
  const auto got = matvec(a, v);
  for (std::size_t r = 0; r < 50; ++r) {
    double want = 0;
    for (std::size_t c = 0; c < 50; ++c) want += dense[r][c] * v[c];
    CHECK(got[r] == doctest::Approx(want).epsilon(1e-13));
  }

  CHECK_THROWS_AS(matvec(a, std::vector<double>(49)), ShapeError);
}

TEST_CASE("ilu0: exact for diagonal and triangular matrices") {
  const SparseMatrix diag = from_dense({{2, 0, 0}, {0, 4, 0}, {0, 0, 8}});
  const Ilu0 fd = Ilu0::factorize(diag);
  std::vector<double> out(3);
  fd.apply(std::vector<double>{2, 4, 8}, out);
  CHECK(out == std::vector<double>{1, 1, 1});

  const SparseMatrix lower = from_dense({{2, 0, 0}, {1, 3, 0}, {-1, 2, 4}});
  const Ilu0 fl = Ilu0::factorize(lower);
  const std::vector<double> x{1, -2, 0.5};
  fl.apply(matvec(lower, x), out);
  for (int i = 0; i < 3; ++i) CHECK(out[i] == doctest::Approx(x[i]).epsilon(1e-14));

  const SparseMatrix singular = from_dense({{0, 1}, {1, 0}});
  CHECK_THROWS_AS(Ilu0::factorize(singular), FactorizationError);
}

TEST_CASE("gmres: identity converges immediately") {
  const SparseMatrix eye = from_dense({{1, 0}, {0, 1}});
  const std::vector<double> b{5, -3};
  std::vector<double> x(2);
  const SolveReport rep = gmres(eye, b, IdentityPrecond{}, x);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 1);
  CHECK(x[0] == doctest::Approx(5.0));
  CHECK(x[1] == doctest::Approx(-3.0));
}

TEST_CASE("gmres: 2x2 diagonal") {
  const SparseMatrix a = from_dense({{2, 0}, {0, 4}});
  std::vector<double> x(2);
  const SolveReport rep = gmres(a, std::vector<double>{2, 4}, IdentityPrecond{}, x);
  CHECK(rep.converged);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gmres: preconditioning cuts iterations; histories are monotone; residual verified") {
  auto gen = testing::rng(62);
  const SparseMatrix a = random_dd_matrix(gen, 100, 0.08);
  std::vector<double> b(100);
  for (auto& v : b) v = testing::uniform(gen, -1, 1);

  std::vector<double> x_plain(100), x_ilu(100);
  SolverOptions opts;
  opts.tol = 1e-10;
  const SolveReport plain = gmres(a, b, IdentityPrecond{}, x_plain, opts);
  const SolveReport with_ilu = gmres(a, b, Ilu0::factorize(a), x_ilu, opts);
  CHECK(plain.converged);
  CHECK(with_ilu.converged);
  CHECK(with_ilu.iterations < plain.iterations);

  for (const SolveReport* rep : {&plain, &with_ilu}) {
    for (std::size_t k = 1; k < rep->residual_history.size(); ++k)
      CHECK(rep->residual_history[k] <= rep->residual_history[k - 1] * (1.0 + 1e-12));
  }
  CHECK(true_relres(a, b, x_plain) <= 1e-10);
  CHECK(true_relres(a, b, x_ilu) <= 1e-10);
  CHECK(plain.relative_residual <= 1e-10);
}

TEST_CASE("gmres: non-convergence is reported, not thrown") {
  // Rotation-like system with a tiny iteration budget.
  const SparseMatrix a = from_dense({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  std::vector<double> x(3);
  SolverOptions opts;
  opts.max_iter = 1;
  opts.restart = 1;
  const SolveReport rep = gmres(a, std::vector<double>{1, 2, 3}, IdentityPrecond{}, x, opts);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 1);
}

TEST_CASE("jacobi preconditioner handles unit diagonals") {
  const SparseMatrix a = from_dense({{1, 0.2}, {0.1, 1}});
  const JacobiPrecond jac(a);
  std::vector<double> out(2);
  jac.apply(std::vector<double>{2, 3}, out);
  CHECK(out == std::vector<double>{2, 3});
}

TEST_CASE("matrix market dump") {
  const SparseMatrix a = from_dense({{1.5, 0}, {0, -2.25}});
  const auto path = std::filesystem::temp_directory_path() / "georbf_mm.mtx";
  write_matrix_market(a, path.string());
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "%%MatrixMarket matrix coordinate real general");
  std::getline(in, line);
  CHECK(line == "2 2 2");
  std::getline(in, line);
  CHECK(line == "1 1 1.5");
  std::filesystem::remove(path);
}

TEST_CASE("csr_from_columns sorts rows by construction") {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> cols(3);
  cols[2] = {{0, 5.0}};
  cols[0] = {{1, 2.0}, {0, 1.0}};
  cols[1] = {{1, 3.0}};
  const SparseMatrix a = csr_from_columns(2, 3, cols);
  CHECK(a.row_ptr == std::vector<std::size_t>{0, 2, 4});
  CHECK(a.col == std::vector<std::uint32_t>{0, 2, 0, 1});
  CHECK(a.val == std::vector<double>{1.0, 5.0, 2.0, 3.0});
}
