#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

#include "nfb/linalg/dense.hpp"
#include "nfb/linalg/image.hpp"

namespace nfb {

struct LinearOperator {
  using Map = std::function<DenseVector(const DenseVector&)>;

  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  Map apply;
  Map adjoint_apply;
  std::optional<double> norm_bound;  // nullopt: unknown

  DenseVector operator()(const DenseVector& x) const { return apply(x); }
  DenseVector adjoint(const DenseVector& y) const { return adjoint_apply(y); }
};

LinearOperator identity_operator(std::size_t n);
LinearOperator diagonal_operator(const DenseVector& diag);
LinearOperator matrix_operator(DenseMatrix m);

/// Gradient of a width x height image, output stacked as (horizontal, vertical).
LinearOperator gradient_operator(std::size_t width, std::size_t height);
LinearOperator haar_operator(std::size_t width, std::size_t height, int level);
LinearOperator blur_operator(std::size_t width, std::size_t height, DenseMatrix kernel);

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool hit_cap = false;
};

/// Power method on A^T A from a seeded Gaussian start.  Stops when the
/// relative change drops below 1e-10 or after `iters` steps.
NormEstimate op_norm_estimate_detailed(const LinearOperator& op, std::size_t dim, int iters,
                                       std::uint64_t seed);
double op_norm_estimate(const LinearOperator& op, std::size_t dim, int iters, std::uint64_t seed);

}  // namespace nfb
