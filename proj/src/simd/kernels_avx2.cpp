// Compiled with -mavx2 -mfma on x86-64; empty table elsewhere.

#include "nfb/simd/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace nfb::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

const __m256d kSignMask = _mm256_set1_pd(-0.0);

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double dist2_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void axpby_avx2(double a, const double* x, double b, const double* y, double* out,
                std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  const __m256d bv = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d by = _mm256_mul_pd(bv, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), by));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void clamp_avx2(const double* x, double lo, double hi, double* out, std::size_t n) {
  const __m256d lov = _mm256_set1_pd(lo);
  const __m256d hiv = _mm256_set1_pd(hi);
  std::size_t i = 0;
  // Operand order keeps NaN propagation identical to std::min/std::max.
  for (; i + 4 <= n; i += 4) {
    const __m256d m = _mm256_max_pd(lov, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, _mm256_min_pd(hiv, m));
  }
  for (; i < n; ++i) out[i] = std::min(std::max(x[i], lo), hi);
}

void soft_threshold_avx2(const double* x, double t, double* out, std::size_t n) {
  const __m256d tv = _mm256_set1_pd(t);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d mag = _mm256_sub_pd(_mm256_andnot_pd(kSignMask, v), tv);
    const __m256d pos = _mm256_cmp_pd(mag, zero, _CMP_GT_OQ);
    const __m256d sign = _mm256_and_pd(_mm256_and_pd(kSignMask, v), pos);
    _mm256_storeu_pd(out + i, _mm256_or_pd(_mm256_and_pd(mag, pos), sign));
  }
  for (; i < n; ++i) {
    const double m = std::abs(x[i]) - t;
    out[i] = m > 0.0 ? std::copysign(m, x[i]) : 0.0;
  }
}

void huber_grad_avx2(const double* x, double delta, double* out, std::size_t n) {
  const __m256d dv = _mm256_set1_pd(delta);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d inside = _mm256_cmp_pd(_mm256_andnot_pd(kSignMask, v), dv, _CMP_LE_OQ);
    const __m256d sat = _mm256_or_pd(one, _mm256_and_pd(kSignMask, v));
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(sat, _mm256_div_pd(v, dv), inside));
  }
  for (; i < n; ++i) {
    out[i] = std::abs(x[i]) <= delta ? x[i] / delta : std::copysign(1.0, x[i]);
  }
}

void gemv_avx2(const double* a, std::size_t rows, std::size_t cols, const double* x,
               double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_avx2(a + r * cols, x, cols);
}

void gemv_t_avx2(const double* a, std::size_t rows, std::size_t cols, const double* x,
                 double* y) {
  std::fill(y, y + cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) axpy_avx2(x[r], a + r * cols, y, cols);
}

constexpr KernelTable kAvx2{
    "avx2",     dot_avx2,           dist2_avx2,       axpy_avx2, axpby_avx2,
    clamp_avx2, soft_threshold_avx2, huber_grad_avx2, gemv_avx2, gemv_t_avx2,
};

}  // namespace

const KernelTable* avx2_kernels() {
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &kAvx2 : nullptr;
}

}  // namespace nfb::simd

#else

namespace nfb::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace nfb::simd

#endif
