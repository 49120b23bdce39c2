#include "nfb/experiments/random_problem.hpp"

#include <memory>

#include "nfb/linalg/linear_operator.hpp"

namespace nfb {

DenseMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
  DenseVector v = rng.normal_vector(rows * cols);
  for (double& x : v) x *= scale;
  return DenseMatrix(rows, cols, v.values());
}

double matrix_norm(const DenseMatrix& m) {
  return op_norm_estimate(matrix_operator(m), m.cols(), 20000, 99);
}

SplitProblem random_problem(std::uint64_t seed, const ProblemShape& shape) {
  Rng rng(seed);
  const std::size_t n = shape.primal;
  const std::size_t m = shape.dual;
  if (n < 2 || m < 1) throw std::invalid_argument("random_problem: need primal >= 2, dual >= 1");
  SplitProblem p;
  p.primal_dim = n;
  p.resolvent_A = box_resolvent(-1.0, 1.0);

  const DenseMatrix M = random_matrix(rng, n / 2, n, 0.5);
  const DenseVector b = rng.normal_vector(n / 2);
  DenseMatrix K = random_matrix(rng, n, n, 0.0);
  {
    const DenseMatrix G = random_matrix(rng, n, n, 0.3);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) K(i, j) = G(i, j) - G(j, i);
      K(i, i) = 0.1;
    }
  }
  const DenseMatrix Lm = random_matrix(rng, m, n, 0.4);

  if (shape.C == Part::present) {
    auto Mp = std::make_shared<DenseMatrix>(M);
    auto bp = std::make_shared<DenseVector>(b);
    const double nm = matrix_norm(M);
    p.C = SmoothMapHandle{[Mp, bp](const DenseVector& x) { return least_squares_gradient(*Mp, *bp, x); },
                          1.0 / (nm * nm), SmoothRole::cocoercive};
    p.beta = p.C->constant;
  } else if (shape.C == Part::zero) {
    p.C = SmoothMapHandle{[n](const DenseVector&) { return DenseVector(n); }, 1.0,
                          SmoothRole::cocoercive};
    p.beta = 1.0;
  }
  if (shape.D == Part::present) {
    auto Kp = std::make_shared<DenseMatrix>(K);
    p.D = SmoothMapHandle{[Kp](const DenseVector& x) { return Kp->multiply(x); }, matrix_norm(K),
                          SmoothRole::lipschitz};
    p.zeta = p.D->constant;
  } else if (shape.D == Part::zero) {
    p.D = SmoothMapHandle{[n](const DenseVector&) { return DenseVector(n); }, 0.5,
                          SmoothRole::lipschitz};
    p.zeta = 0.5;
  }
  if (shape.L == Part::present) {
    p.dual_dim = m;
    p.L = matrix_operator(Lm);
    p.norm_L = matrix_norm(Lm);
    p.resolvent_Binv = linf_ball_resolvent(1.0);
  } else if (shape.L == Part::zero) {
    p.dual_dim = m;
    p.L = matrix_operator(DenseMatrix(m, n, 0.0));
    p.norm_L = 0.0;
    p.resolvent_Binv = zero_inverse_resolvent();
  }
  p.validate();
  return p;
}

}  // namespace nfb
