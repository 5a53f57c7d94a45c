#pragma once

#include <cstddef>

namespace georbf::kernels {

/// Data-parallel inner loops behind the interpolation and solver hot paths.
/// Every backend implements the same pinned operation order, so outputs are
/// bit-identical across backends (reductions use a fixed 4-lane blocked
/// pattern that the scalar reference reproduces). Backend selection happens
/// once, at first use: GEORBF_SIMD=scalar|avx2 overrides CPU detection.
struct Ops {
  // out[i] = max(1 - t[i]/r, 0)^4 * (1 + 4 t[i]/r); t[i] = +inf maps to 0.
  void (*wendland)(const double* t, double r, double* out, std::size_t n);
  // out[i] = Euclidean distance from (x[i], y[i], z[i]) to (cx, cy, cz).
  void (*point_distance)(const double* x, const double* y, const double* z, double cx, double cy,
                         double cz, double* out, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*nrm2)(const double* v, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);  // y += a*x
  void (*scal)(double a, double* x, std::size_t n);                   // x *= a
  const char* name;
};

enum class Backend { Scalar, Avx2 };

const Ops& scalar_ops();
bool avx2_supported();

/// Active backend (selected on first call, thread-safe).
const Ops& active();
Backend active_backend();

/// Force a backend; throws ParameterError if unsupported on this machine.
void force_backend(Backend backend);

}  // namespace georbf::kernels
