#pragma once

// Data-parallel inner loops used by every solver iteration.
//
// Each kernel exists as a scalar reference implementation and, on x86-64,
// an AVX2+FMA variant.  The active table is chosen once per process from the
// CPU feature bits; setting NFB_SIMD=scalar in the environment forces the
// reference path.  Tests compare the two tables directly.

#include <cstddef>
#include <string_view>

namespace nfb::simd {

struct KernelTable {
  std::string_view name;

  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i (x_i - y_i)^2
  double (*dist2)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out = a * x + b * y
  void (*axpby)(double a, const double* x, double b, const double* y, double* out,
                std::size_t n);
  void (*clamp)(const double* x, double lo, double hi, double* out, std::size_t n);
  // out_i = sign(x_i) * max(|x_i| - t, 0)
  void (*soft_threshold)(const double* x, double t, double* out, std::size_t n);
  // out_i = x_i / delta if |x_i| <= delta, sign(x_i) otherwise
  void (*huber_grad)(const double* x, double delta, double* out, std::size_t n);
  // y = A x, A row-major rows x cols
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // y = A^T x, A row-major rows x cols
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols, const double* x,
                 double* y);
};

const KernelTable& scalar_kernels();

/// AVX2+FMA table, or nullptr when the CPU (or the build target) lacks it.
const KernelTable* avx2_kernels();

/// Table used by the library; selected once on first use.
const KernelTable& active_kernels();

}  // namespace nfb::simd
