// AVX2 backend. Compiled with -mavx2 only (no -mfma): fused multiply-adds
// would change rounding relative to the scalar reference. Per-element ops
// use the exact operation sequence of kernels_scalar.cpp; reductions use the
// same 4-lane blocked pattern, so results match the scalar backend bitwise.

#include "georbf/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>

namespace georbf::kernels {

namespace {

void wendland_avx2(const double* t, double r, double* out, std::size_t n) {
  const __m256d vr = _mm256_set1_pd(r);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d four = _mm256_set1_pd(4.0);
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d q = _mm256_div_pd(_mm256_loadu_pd(t + i), vr);
    __m256d u = _mm256_sub_pd(one, q);
    u = _mm256_max_pd(u, zero);
    const __m256d s = _mm256_mul_pd(u, u);
    const __m256d p = _mm256_mul_pd(s, s);
    const __m256d w = _mm256_add_pd(one, _mm256_mul_pd(four, q));
    const __m256d val = _mm256_mul_pd(p, w);
    const __m256d mask = _mm256_cmp_pd(q, one, _CMP_LT_OQ);
    _mm256_storeu_pd(out + i, _mm256_and_pd(val, mask));
  }
  for (std::size_t i = n4; i < n; ++i) {
    const double q = t[i] / r;
    double u = 1.0 - q;
    u = u < 0.0 ? 0.0 : u;
    const double s = u * u;
    const double p = s * s;
    const double w = 1.0 + 4.0 * q;
    out[i] = q < 1.0 ? p * w : 0.0;
  }
}

void point_distance_avx2(const double* x, const double* y, const double* z, double cx, double cy,
                         double cz, double* out, std::size_t n) {
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vcy = _mm256_set1_pd(cy);
  const __m256d vcz = _mm256_set1_pd(cz);
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i), vcx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + i), vcy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(z + i), vcz);
    const __m256d s =
        _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
                      _mm256_mul_pd(dz, dz));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(s));
  }
  for (std::size_t i = n4; i < n; ++i) {
    const double dx = x[i] - cx;
    const double dy = y[i] - cy;
    const double dz = z[i] - cz;
    out[i] = std::sqrt((dx * dx + dy * dy) + dz * dz);
  }
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  double lanes[4];
  _mm256_storeu_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (std::size_t i = n4; i < n; ++i) s += a[i] * b[i];
  return s;
}

double nrm2_avx2(const double* v, std::size_t n) { return std::sqrt(dot_avx2(v, v, n)); }

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d r =
        _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, r);
  }
  for (std::size_t i = n4; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scal_avx2(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (std::size_t i = n4; i < n; ++i) x[i] = a * x[i];
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops{wendland_avx2, point_distance_avx2, dot_avx2,
                       nrm2_avx2,     axpy_avx2,           scal_avx2, "avx2"};
  return ops;
}

}  // namespace georbf::kernels

#endif  // __AVX2__
