#include "nfb/linalg/linear_operator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "nfb/errors.hpp"
#include "nfb/linalg/random.hpp"

namespace nfb {
namespace {

GradientField unstack(const DenseVector& y, std::size_t w, std::size_t h) {
  const std::size_t n = w * h;
  require_same_size(2 * n, y.size(), "gradient adjoint");
  std::vector<double> hx(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<double> vy(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
  return {GrayImage(w, h, std::move(hx)), GrayImage(w, h, std::move(vy))};
}

}  // namespace

LinearOperator identity_operator(std::size_t n) {
  auto id = [n](const DenseVector& x) {
    require_same_size(n, x.size(), "identity");
    return x;
  };
  return {n, n, id, id, 1.0};
}

LinearOperator diagonal_operator(const DenseVector& diag) {
  auto map = [d = diag](const DenseVector& x) {
    require_same_size(d.size(), x.size(), "diagonal");
    DenseVector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = d[i] * x[i];
    return y;
  };
  return {diag.size(), diag.size(), map, map, max_abs(diag)};
}

LinearOperator matrix_operator(DenseMatrix m) {
  auto shared = std::make_shared<const DenseMatrix>(std::move(m));
  return {shared->cols(), shared->rows(),
          [shared](const DenseVector& x) { return shared->multiply(x); },
          [shared](const DenseVector& y) { return shared->multiply_transpose(y); }, std::nullopt};
}

LinearOperator gradient_operator(std::size_t width, std::size_t height) {
  const std::size_t n = width * height;
  auto fwd = [width, height](const DenseVector& x) {
    const GradientField g = discrete_gradient(GrayImage::from_vector(width, height, x));
    return concat(g.horizontal.to_vector(), g.vertical.to_vector());
  };
  auto adj = [width, height](const DenseVector& y) {
    DenseVector d = discrete_divergence(unstack(y, width, height)).to_vector();
    for (double& v : d) v = -v;
    return d;
  };
  // ||grad||^2 <= 8 for forward differences in 2-D.
  return {n, 2 * n, fwd, adj, std::sqrt(8.0)};
}

LinearOperator haar_operator(std::size_t width, std::size_t height, int level) {
  const std::size_t n = width * height;
  auto fwd = [=](const DenseVector& x) {
    return haar_transform(GrayImage::from_vector(width, height, x), level).to_vector();
  };
  auto inv = [=](const DenseVector& y) {
    return haar_inverse(GrayImage::from_vector(width, height, y), level).to_vector();
  };
  return {n, n, fwd, inv, 1.0};
}

LinearOperator blur_operator(std::size_t width, std::size_t height, DenseMatrix kernel) {
  const std::size_t n = width * height;
  auto k = std::make_shared<const DenseMatrix>(std::move(kernel));
  auto fwd = [=](const DenseVector& x) {
    return blur_apply(GrayImage::from_vector(width, height, x), *k).to_vector();
  };
  auto adj = [=](const DenseVector& y) {
    return blur_adjoint(GrayImage::from_vector(width, height, y), *k).to_vector();
  };
  return {n, n, fwd, adj, std::nullopt};
}

NormEstimate op_norm_estimate_detailed(const LinearOperator& op, std::size_t dim, int iters,
                                       std::uint64_t seed) {
  if (dim != op.in_dim) {
    throw DimensionError("op_norm_estimate: dim " + std::to_string(dim) +
                         " does not match operator domain " + std::to_string(op.in_dim));
  }
  if (iters < 1) throw std::invalid_argument("op_norm_estimate: iters must be >= 1");
  NormEstimate out;
  if (dim == 0) return out;

  Rng rng(seed);
  DenseVector x = rng.normal_vector(dim);
  double nx = norm(x);
  if (nx == 0.0) return out;
  x = (1.0 / nx) * x;

  // Rayleigh quotients of A^T A are nondecreasing in exact arithmetic; the
  // running max keeps that true under rounding as well.
  double prev = 0.0;
  for (int k = 1; k <= iters; ++k) {
    const DenseVector y = op.apply(x);
    const double est = norm(y);
    out.value = std::max(out.value, est);
    out.iterations = k;
    if (est == 0.0) return out;
    if (k > 1 && std::abs(est - prev) <= 1e-10 * est) return out;
    prev = est;
    x = op.adjoint_apply(y);
    nx = norm(x);
    if (nx == 0.0) return out;
    x = (1.0 / nx) * x;
  }
  out.hit_cap = true;
  return out;
}

double op_norm_estimate(const LinearOperator& op, std::size_t dim, int iters, std::uint64_t seed) {
  return op_norm_estimate_detailed(op, dim, iters, seed).value;
}

}  // namespace nfb
