#include <cmath>
#include <cstdlib>
#include <limits>
#include <string_view>
#include <vector>

#include "doctest.h"
#include "nfb/simd/kernels.hpp"
#include "test_support.hpp"

using nfb::simd::KernelTable;

namespace {

std::vector<double> draw(std::size_t n, std::uint64_t seed, double scale) {
  const auto v = testing_support::random_vector(n, seed, scale);
  return v.values();
}

const KernelTable* simd_table() { return nfb::simd::avx2_kernels(); }

double sum_abs_products(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] * y[i]);
  return s;
}

}  // namespace

TEST_CASE("scalar table is always available and named") {
  CHECK(nfb::simd::scalar_kernels().name == "scalar");
  const auto& active = nfb::simd::active_kernels();
  CHECK((active.name == "scalar" || active.name == "avx2"));
  const char* forced = std::getenv("NFB_SIMD");
  if (forced != nullptr && std::string_view(forced) == "scalar") {
    CHECK(active.name == "scalar");
  } else if (simd_table() != nullptr) {
    CHECK(active.name == "avx2");
  }
}

TEST_CASE("avx2 kernels agree with scalar reference on sizes 0..67") {
  const KernelTable* simd = simd_table();
  if (simd == nullptr) {
    MESSAGE("avx2 not available on this CPU; equivalence test skipped");
    return;
  }
  const KernelTable& ref = nfb::simd::scalar_kernels();
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t n = 0; n <= 67; ++n) {
    CAPTURE(n);
    const auto x = draw(n, 100 + n, 3.0);
    const auto y = draw(n, 900 + n, 2.0);
    const double bound = 4.0 * static_cast<double>(n + 1) * eps * sum_abs_products(x, y);

    CHECK(std::abs(simd->dot(x.data(), y.data(), n) - ref.dot(x.data(), y.data(), n)) <= bound);

    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
    CHECK(std::abs(simd->dist2(x.data(), y.data(), n) - ref.dist2(x.data(), y.data(), n)) <=
          4.0 * static_cast<double>(n + 1) * eps * d2);

    std::vector<double> a = y, b = y;
    simd->axpy(-0.7, x.data(), a.data(), n);
    ref.axpy(-0.7, x.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(a[i] - b[i]) <= 2 * eps * (0.7 * std::abs(x[i]) + std::abs(y[i])));
    }

    std::vector<double> o1(n), o2(n);
    simd->axpby(1.3, x.data(), -0.4, y.data(), o1.data(), n);
    ref.axpby(1.3, x.data(), -0.4, y.data(), o2.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(o1[i] - o2[i]) <= 2 * eps * (1.3 * std::abs(x[i]) + 0.4 * std::abs(y[i])));
    }

    // Selection-type kernels are bitwise identical.
    simd->clamp(x.data(), -1.0, 0.5, o1.data(), n);
    ref.clamp(x.data(), -1.0, 0.5, o2.data(), n);
    CHECK(o1 == o2);
    simd->soft_threshold(x.data(), 0.8, o1.data(), n);
    ref.soft_threshold(x.data(), 0.8, o2.data(), n);
    CHECK(o1 == o2);
    simd->huber_grad(x.data(), 1.1, o1.data(), n);
    ref.huber_grad(x.data(), 1.1, o2.data(), n);
    CHECK(o1 == o2);
  }
}

TEST_CASE("avx2 gemv and gemv_t agree with scalar reference") {
  const KernelTable* simd = simd_table();
  if (simd == nullptr) return;
  const KernelTable& ref = nfb::simd::scalar_kernels();
  for (std::size_t rows : {1u, 3u, 8u, 17u}) {
    for (std::size_t cols : {1u, 4u, 9u, 33u}) {
      const auto a = draw(rows * cols, rows * 131 + cols, 1.0);
      const auto x = draw(cols, 7 + cols, 1.0);
      const auto u = draw(rows, 11 + rows, 1.0);
      std::vector<double> y1(rows), y2(rows), z1(cols), z2(cols);
      simd->gemv(a.data(), rows, cols, x.data(), y1.data());
      ref.gemv(a.data(), rows, cols, x.data(), y2.data());
      simd->gemv_t(a.data(), rows, cols, u.data(), z1.data());
      ref.gemv_t(a.data(), rows, cols, u.data(), z2.data());
      for (std::size_t i = 0; i < rows; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-13));
      for (std::size_t i = 0; i < cols; ++i) CHECK(z1[i] == doctest::Approx(z2[i]).epsilon(1e-13));
    }
  }
}

TEST_CASE("soft threshold returns +0 inside the dead zone and keeps sign outside") {
  const std::vector<double> x{-0.3, 0.3, -2.0, 2.0, 0.0, -0.0};
  std::vector<double> out(x.size());
  for (const KernelTable* t : {&nfb::simd::scalar_kernels(), simd_table()}) {
    if (t == nullptr) continue;
    t->soft_threshold(x.data(), 0.5, out.data(), out.size());
    CHECK(out[0] == 0.0);
    CHECK_FALSE(std::signbit(out[0]));
    CHECK(out[2] == -1.5);
    CHECK(out[3] == 1.5);
  }
}

TEST_CASE("clamp propagates NaN identically in both tables") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> x{nan, 1.0, -3.0, 0.2, nan, 5.0, -5.0, 0.0};
  std::vector<double> o1(x.size()), o2(x.size());
  const KernelTable* simd = simd_table();
  if (simd == nullptr) return;
  simd->clamp(x.data(), -1.0, 1.0, o1.data(), x.size());
  nfb::simd::scalar_kernels().clamp(x.data(), -1.0, 1.0, o2.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(std::isnan(o1[i]) == std::isnan(o2[i]));
    if (!std::isnan(o1[i])) CHECK(o1[i] == o2[i]);
  }
}
