#include "georbf/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "georbf/error.hpp"

namespace georbf::kernels {

#if defined(GEORBF_HAVE_AVX2_TU)
const Ops& avx2_ops();  // defined in kernels_avx2.cpp
#endif

namespace {

bool cpu_has_avx2() {
#if defined(GEORBF_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<const Ops*> g_active{nullptr};

const Ops* select_default() {
  const char* env = std::getenv("GEORBF_SIMD");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
#if defined(GEORBF_HAVE_AVX2_TU)
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return &avx2_ops();
#endif
  }
#if defined(GEORBF_HAVE_AVX2_TU)
  if (cpu_has_avx2()) return &avx2_ops();
#endif
  return &scalar_ops();
}

}  // namespace

bool avx2_supported() { return cpu_has_avx2(); }

const Ops& active() {
  const Ops* ops = g_active.load(std::memory_order_acquire);
  if (ops == nullptr) {
    ops = select_default();
    const Ops* expected = nullptr;
    if (!g_active.compare_exchange_strong(expected, ops, std::memory_order_acq_rel))
      ops = expected;
  }
  return *ops;
}

Backend active_backend() {
  return std::strcmp(active().name, "avx2") == 0 ? Backend::Avx2 : Backend::Scalar;
}

void force_backend(Backend backend) {
  if (backend == Backend::Scalar) {
    g_active.store(&scalar_ops(), std::memory_order_release);
    return;
  }
#if defined(GEORBF_HAVE_AVX2_TU)
  if (cpu_has_avx2()) {
    g_active.store(&avx2_ops(), std::memory_order_release);
    return;
  }
#endif
  throw ParameterError("AVX2 backend is not available on this machine");
}

}  // namespace georbf::kernels
