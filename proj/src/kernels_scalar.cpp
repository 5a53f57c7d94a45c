#include <cmath>

#include "georbf/kernels.hpp"

// Reference kernels. The SIMD backends replicate these operation-for-
// operation; any change here must be mirrored there to keep the backends
// bitwise equivalent.

namespace georbf::kernels {

namespace {

void wendland_scalar(const double* t, double r, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double q = t[i] / r;
    double u = 1.0 - q;
    u = u < 0.0 ? 0.0 : u;
    const double s = u * u;
    const double p = s * s;
    const double w = 1.0 + 4.0 * q;
    out[i] = q < 1.0 ? p * w : 0.0;
  }
}

void point_distance_scalar(const double* x, const double* y, const double* z, double cx, double cy,
                           double cz, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - cx;
    const double dy = y[i] - cy;
    const double dz = z[i] - cz;
    out[i] = std::sqrt((dx * dx + dy * dy) + dz * dz);
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    acc0 += a[i] * b[i];
    acc1 += a[i + 1] * b[i + 1];
    acc2 += a[i + 2] * b[i + 2];
    acc3 += a[i + 3] * b[i + 3];
  }
  double s = (acc0 + acc1) + (acc2 + acc3);
  for (std::size_t i = n4; i < n; ++i) s += a[i] * b[i];
  return s;
}

double nrm2_scalar(const double* v, std::size_t n) { return std::sqrt(dot_scalar(v, v, n)); }

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scal_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = a * x[i];
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{wendland_scalar, point_distance_scalar, dot_scalar,
                       nrm2_scalar,     axpy_scalar,           scal_scalar, "scalar"};
  return ops;
}

}  // namespace georbf::kernels
