#include "nfb/operators/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "nfb/errors.hpp"
#include "nfb/simd/kernels.hpp"

namespace nfb {

void SplitProblem::validate() const {
  if (primal_dim == 0) throw std::invalid_argument("SplitProblem: primal_dim must be positive");
  if (!resolvent_A.eval) throw std::invalid_argument("SplitProblem: resolvent_A is required");
  if (resolvent_Binv.has_value() != L.has_value()) {
    throw std::invalid_argument("SplitProblem: B and L must be both present or both absent");
  }
  if (L) {
    if (L->in_dim != primal_dim || L->out_dim != dual_dim) {
      throw DimensionError("SplitProblem: L dimensions do not match primal/dual sizes");
    }
    if (!(norm_L >= 0.0) || !std::isfinite(norm_L)) {
      throw std::invalid_argument("SplitProblem: norm_L must be finite and nonnegative");
    }
  } else if (dual_dim != 0) {
    throw DimensionError("SplitProblem: dual_dim must be 0 without L");
  }
  if (std::isinf(beta)) {
    if (C) throw std::invalid_argument("SplitProblem: beta = inf requires C absent");
  } else if (!(beta > 0.0)) {
    throw std::invalid_argument("SplitProblem: beta must be positive or +inf");
  }
  if (!(zeta >= 0.0) || !std::isfinite(zeta)) {
    throw std::invalid_argument("SplitProblem: zeta must be finite and nonnegative");
  }
  if (zeta == 0.0 && D) throw std::invalid_argument("SplitProblem: zeta = 0 requires D absent");
}

DenseVector project_box(const DenseVector& x, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("project_box: lo > hi");
  DenseVector out(x.size());
  simd::active_kernels().clamp(x.data(), lo, hi, out.data(), x.size());
  return out;
}

DenseVector project_nonneg(const DenseVector& x) {
  DenseVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
  return out;
}

DenseVector soft_threshold(const DenseVector& x, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("soft_threshold: t must be nonnegative");
  DenseVector out(x.size());
  simd::active_kernels().soft_threshold(x.data(), t, out.data(), x.size());
  return out;
}

DenseVector resolvent_of_inverse(const ResolventHandle& resolvent_B, const DenseVector& u,
                                 double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("resolvent_of_inverse: sigma must be positive");
  const DenseVector inner = resolvent_B(1.0 / sigma * u, 1.0 / sigma);
  return lincomb(1.0, u, -sigma, inner);
}

double huber_value(const DenseVector& x, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("huber: delta must be positive");
  double s = 0.0;
  for (double t : x) {
    const double a = std::abs(t);
    s += a <= delta ? t * t / (2.0 * delta) : a - 0.5 * delta;
  }
  return s;
}

DenseVector huber_gradient(const DenseVector& x, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("huber: delta must be positive");
  DenseVector out(x.size());
  simd::active_kernels().huber_grad(x.data(), delta, out.data(), x.size());
  return out;
}

DenseVector least_squares_gradient(const DenseMatrix& M, const DenseVector& b,
                                   const DenseVector& x) {
  require_same_size(M.rows(), b.size(), "least_squares_gradient");
  DenseVector r = M.multiply(x);
  axpy(-1.0, b, r);
  return M.multiply_transpose(r);
}

std::pair<DenseVector, DenseVector> skew_constraint_map(const DenseMatrix& R, const DenseVector& x,
                                                        const DenseVector& u) {
  DenseVector rx = R.multiply(x);
  for (double& v : rx) v = -v;
  return {R.multiply_transpose(u), std::move(rx)};
}

ResolventHandle box_resolvent(double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("box_resolvent: lo > hi");
  return {[lo, hi](const DenseVector& x, double) { return project_box(x, lo, hi); }};
}

ResolventHandle nonneg_resolvent() {
  return {[](const DenseVector& x, double) { return project_nonneg(x); }};
}

ResolventHandle identity_resolvent() {
  return {[](const DenseVector& x, double) { return x; }};
}

ResolventHandle zero_inverse_resolvent() {
  return {[](const DenseVector& x, double) { return DenseVector(x.size()); }};
}

ResolventHandle l1_resolvent(double weight) {
  if (!(weight >= 0.0)) throw std::invalid_argument("l1_resolvent: weight must be nonnegative");
  return {[weight](const DenseVector& x, double step) { return soft_threshold(x, step * weight); }};
}

ResolventHandle linf_ball_resolvent(double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("linf_ball_resolvent: radius must be nonnegative");
  return {[radius](const DenseVector& x, double) { return project_box(x, -radius, radius); }};
}

}  // namespace nfb
