#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nfb/linalg/dense.hpp"

namespace nfb {

enum class NuMode { monotone, general };

/// (2 - eps + nu) / (1 + zeta^2 + nu) with nu = 0 or 2 zeta.
/// Throws FeasibilityError("lipschitz_margin") unless 1 - zeta^2 - eps > 0.
double psi_value(double zeta, double epsilon, NuMode mode);

/// (1 - a)^2 / (2 a^2 - a + 1) on [0, 1).
double phi_value(double alpha);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;  // open at both ends
  bool contains(double v) const noexcept { return v > lo && v < hi; }
  bool empty() const noexcept { return !(hi > lo); }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
};

/// Admissible relaxation range ]0, phi(alpha) psi[.
Interval lambda_interval(double psi, double alpha);

struct AlphaBound {
  double value = 0.0;
  bool feasible = false;  // false when lambda >= psi (empty inertia range)
};

/// Positive root of a t^2 - (2a+3) t + (a+1) with a = psi/lambda - 2.
AlphaBound alpha_bound(double psi, double lambda);

double rho_value(double psi, double lambda);
double delta_n(double alpha_n, double alpha_np1, double rho_n, double rho_np1);

struct StepParams {
  double epsilon = 0.0;
  double tau = 0.0;  // gamma for primal-only methods
  double sigma = 0.0;
  double zeta_tilde = 0.0;
  double beta_tilde = std::numeric_limits<double>::infinity();
  double nu = 0.0;
  double coupling = 1.0;  // 1 - sigma tau ||L||^2

  double psi() const;
};

/// beta~ = beta (1 - s t |L|^2), zeta~ = t zeta / sqrt(1 - s t |L|^2).
StepParams fpdhf_constants(double beta, double zeta, double tau, double sigma, double norm_L,
                           double epsilon, NuMode mode);

struct InequalityCheck {
  std::string name;
  std::string statement;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// Step conditions alone (no inertia/relaxation).
std::vector<InequalityCheck> check_step_params(const StepParams& p);

struct Certificate {
  StepParams steps;
  double psi = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
  double rho = 0.0;
  Interval lambda_range;   // for the chosen alpha
  AlphaBound alpha_max;    // for the chosen lambda
  double delta_hat = 0.0;  // constant-schedule delta
  std::vector<InequalityCheck> checks;

  bool feasible() const;
  const InequalityCheck* first_failure() const;
  double alpha_max_for(double lam) const { return alpha_bound(psi, lam).value; }
  nlohmann::json to_json() const;
};

/// Certificate for constant (alpha, lambda).  Never throws on infeasible
/// parameters; the failures are listed in `checks`.
Certificate certify(const StepParams& steps, double alpha, double lambda);

using MetricWeight = std::function<double(const DenseVector&, const DenseVector&)>;

struct FejerReport {
  double H_prev = 0.0;
  double H_next = 0.0;
  double delta = 0.0;
  double allowance = 0.0;  // (alpha_{n-1} - alpha_n)_+ |z_{n-1} - z|^2_S
  bool flagged = false;
};

/// Tracks H_n against a fixed reference solution.  For decreasing inertia the
/// one-step bound carries the extra allowance term, which vanishes when the
/// sequence is nondecreasing.
class FejerMonitor {
 public:
  FejerMonitor(DenseVector reference, MetricWeight metric, double slack = 1e-10);

  FejerReport step(const DenseVector& z_n, const DenseVector& z_nm1, const DenseVector& z_np1,
                   double alpha_n, double alpha_np1, double rho_n, double rho_np1);

  const DenseVector& reference() const noexcept { return reference_; }
  int violations() const noexcept { return violations_; }
  int steps() const noexcept { return steps_; }
  double dz_sq_sum() const noexcept { return dz_sq_sum_; }
  double last_dz_sq() const noexcept { return last_dz_sq_; }
  std::optional<double> last_H() const noexcept { return last_H_; }
  double max_excess() const noexcept { return max_excess_; }

 private:
  double sq(const DenseVector& v) const { return metric_(v, v); }

  DenseVector reference_;
  MetricWeight metric_;
  double slack_;
  std::optional<double> last_H_;
  std::optional<double> prev_alpha_;
  int violations_ = 0;
  int steps_ = 0;
  double dz_sq_sum_ = 0.0;
  double last_dz_sq_ = 0.0;
  double max_excess_ = -std::numeric_limits<double>::infinity();
};

/// H_n with alpha_{n-1} given explicitly.
double fejer_H(const DenseVector& z_n, const DenseVector& z_nm1, const DenseVector& reference,
               double alpha_nm1, double alpha_n, double rho_n, const MetricWeight& metric);

}  // namespace nfb
