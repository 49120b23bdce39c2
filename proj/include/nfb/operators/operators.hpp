#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "nfb/linalg/dense.hpp"
#include "nfb/linalg/linear_operator.hpp"

namespace nfb {

/// Resolvent family J_{step T}.  For B^{-1} resolvents the step is sigma.
struct ResolventHandle {
  std::function<DenseVector(const DenseVector&, double)> eval;

  DenseVector operator()(const DenseVector& x, double step) const { return eval(x, step); }
};

enum class SmoothRole { cocoercive, lipschitz };

struct SmoothMapHandle {
  std::function<DenseVector(const DenseVector&)> eval;
  double constant = 0.0;  // beta for cocoercive maps, zeta for Lipschitz ones
  SmoothRole role = SmoothRole::lipschitz;

  DenseVector operator()(const DenseVector& x) const { return eval(x); }
};

/// Find x with 0 in A x + L^T B L x + C x + D x.
///
/// Absent operators are std::nullopt so methods can specialise on structure
/// rather than on zero-valued closures.
struct SplitProblem {
  std::size_t primal_dim = 0;
  std::size_t dual_dim = 0;
  ResolventHandle resolvent_A;
  std::optional<ResolventHandle> resolvent_Binv;  // (u, sigma) -> J_{sigma B^{-1}} u
  std::optional<SmoothMapHandle> C;
  std::optional<SmoothMapHandle> D;
  std::optional<LinearOperator> L;
  double beta = std::numeric_limits<double>::infinity();
  double zeta = 0.0;
  double norm_L = 0.0;
  // Caller asserts that (x, u) -> (D x, -tau L D x) is monotone, which lets
  // the certificate use nu = 0.
  bool coupling_monotone = false;

  /// Throws std::invalid_argument / DimensionError on a malformed problem.
  void validate() const;
};

DenseVector project_box(const DenseVector& x, double lo, double hi);
DenseVector project_nonneg(const DenseVector& x);
DenseVector soft_threshold(const DenseVector& x, double t);

/// J_{sigma B^{-1}}(u) = u - sigma J_{B/sigma}(u / sigma), where `resolvent_B`
/// evaluates J_{step B}.
DenseVector resolvent_of_inverse(const ResolventHandle& resolvent_B, const DenseVector& u,
                                 double sigma);

double huber_value(const DenseVector& x, double delta);
DenseVector huber_gradient(const DenseVector& x, double delta);

/// M^T (M x - b).
DenseVector least_squares_gradient(const DenseMatrix& M, const DenseVector& b, const DenseVector& x);

/// (R^T u, -R x).
std::pair<DenseVector, DenseVector> skew_constraint_map(const DenseMatrix& R, const DenseVector& x,
                                                        const DenseVector& u);

// Resolvent catalog.
ResolventHandle box_resolvent(double lo, double hi);
ResolventHandle nonneg_resolvent();
ResolventHandle identity_resolvent();            // J of the zero operator
ResolventHandle zero_inverse_resolvent();        // J_{sigma B^{-1}} for B = 0
ResolventHandle l1_resolvent(double weight);     // J_{step * weight * d|.|_1}
ResolventHandle linf_ball_resolvent(double radius);  // prox of sigma (weight|.|_1)^*

}  // namespace nfb
