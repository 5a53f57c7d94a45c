#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "georbf/interp.hpp"
#include "georbf/kernels.hpp"
#include "support.hpp"

using namespace georbf;

namespace {

std::vector<double> random_values(std::mt19937_64& gen, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = testing::uniform(gen, lo, hi);
  return v;
}

bool bitwise_equal(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("wendland: closed-form values") {
  CHECK(wendland(0.0, 2.0) == 1.0);
  CHECK(wendland(1.0, 2.0) == doctest::Approx(0.1875));  // phi(r/2, r) = (1/2)^4 * 3
  CHECK(wendland(2.0, 2.0) == 0.0);
  CHECK(wendland(5.0, 2.0) == 0.0);
  CHECK(wendland(std::numeric_limits<double>::infinity(), 2.0) == 0.0);
  CHECK_THROWS_AS(wendland(1.0, 0.0), ParameterError);
  CHECK_THROWS_AS(wendland(1.0, -1.0), ParameterError);
}

TEST_CASE("wendland: range and compact support on random inputs") {
  auto gen = testing::rng(41);
  for (int trial = 0; trial < 2000; ++trial) {
    const double r = testing::uniform(gen, 0.01, 5.0);
    const double t = testing::uniform(gen, 0.0, 8.0);
    const double v = wendland(t, r);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    if (t >= r) CHECK(v == 0.0);
    if (t < r) CHECK(v > 0.0);
  }
}

#if defined(__x86_64__)
TEST_CASE("scalar and avx2 backends agree bitwise") {
  if (!kernels::avx2_supported()) return;
  const auto& scalar = kernels::scalar_ops();
  kernels::force_backend(kernels::Backend::Avx2);
  const auto& avx2 = kernels::active();
  REQUIRE(std::string(avx2.name) == "avx2");

  auto gen = testing::rng(42);
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
    const auto t = random_values(gen, n, 0.0, 3.0);
    const double r = 1.7;
    std::vector<double> out_s(n), out_v(n);
    scalar.wendland(t.data(), r, out_s.data(), n);
    avx2.wendland(t.data(), r, out_v.data(), n);
    CHECK(bitwise_equal(out_s, out_v));

    const auto xs = random_values(gen, n, -2.0, 2.0);
    const auto ys = random_values(gen, n, -2.0, 2.0);
    const auto zs = random_values(gen, n, -2.0, 2.0);
    scalar.point_distance(xs.data(), ys.data(), zs.data(), 0.3, -0.2, 0.9, out_s.data(), n);
    avx2.point_distance(xs.data(), ys.data(), zs.data(), 0.3, -0.2, 0.9, out_v.data(), n);
    CHECK(bitwise_equal(out_s, out_v));

    const auto a = random_values(gen, n, -1.0, 1.0);
    const auto b = random_values(gen, n, -1.0, 1.0);
    CHECK(scalar.dot(a.data(), b.data(), n) == avx2.dot(a.data(), b.data(), n));
    CHECK(scalar.nrm2(a.data(), n) == avx2.nrm2(a.data(), n));

    auto y1 = b;
    auto y2 = b;
    scalar.axpy(0.37, a.data(), y1.data(), n);
    avx2.axpy(0.37, a.data(), y2.data(), n);
    CHECK(bitwise_equal(y1, y2));

    auto x1 = a;
    auto x2 = a;
    scalar.scal(-1.91, x1.data(), n);
    avx2.scal(-1.91, x2.data(), n);
    CHECK(bitwise_equal(x1, x2));
  }

  // Infinity must map to zero through both paths.
  const double inf = std::numeric_limits<double>::infinity();
  double t_inf[5] = {0.0, 0.5, inf, 2.0, inf};
  double out_s[5], out_v[5];
  scalar.wendland(t_inf, 1.0, out_s, 5);
  avx2.wendland(t_inf, 1.0, out_v, 5);
  CHECK(bitwise_equal({out_s, 5}, {out_v, 5}));
  CHECK(out_s[2] == 0.0);
  CHECK(out_v[4] == 0.0);

  kernels::force_backend(kernels::Backend::Scalar);
}
#endif

TEST_CASE("batch wendland equals the scalar entry point") {
  auto gen = testing::rng(43);
  const auto t = random_values(gen, 257, 0.0, 3.0);
  std::vector<double> out(t.size());
  kernels::active().wendland(t.data(), 1.3, out.data(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(out[i] == wendland(t[i], 1.3));
}

TEST_CASE("batch point_distance matches Vec3 distance bitwise") {
  auto gen = testing::rng(44);
  const std::size_t n = 123;
  const auto xs = random_values(gen, n, -1, 1);
  const auto ys = random_values(gen, n, -1, 1);
  const auto zs = random_values(gen, n, -1, 1);
  const Vec3 c{0.4, -0.1, 0.7};
  std::vector<double> out(n);
  kernels::active().point_distance(xs.data(), ys.data(), zs.data(), c.x, c.y, c.z, out.data(), n);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(out[i] == distance(Vec3{xs[i], ys[i], zs[i]}, c));
}
