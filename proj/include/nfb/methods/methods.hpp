#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "nfb/certificates/certificates.hpp"
#include "nfb/engine/engine.hpp"
#include "nfb/operators/operators.hpp"

namespace nfb {

/// (x, u) in H x G, flattened primal-first for the engine.
struct PrimalDualPoint {
  DenseVector x;
  DenseVector u;

  DenseVector flatten() const { return concat(x, u); }
  static PrimalDualPoint split(const DenseVector& z, std::size_t primal_dim);
};

enum class InitScenario { pick_alpha_then_lambda, pick_lambda_then_alpha };

struct InitResult {
  double eps_bar = 0.0;
  double one_minus_eps_bar = 1.0;  // computed without cancellation
  double chi = 0.0;
  double epsilon = 0.0;
  double tau = 0.0;
  double sigma = 0.0;
  double psi = 0.0;
  double lambda_chosen = 0.0;
  double alpha_chosen = 0.0;
  // provenance
  double t = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  InitScenario scenario = InitScenario::pick_alpha_then_lambda;
  NuMode nu_mode = NuMode::general;
  StepParams steps;
  Certificate certificate;

  nlohmann::json to_json() const;
};

/// Picks eps, tau, sigma from (t, kappa1, kappa2) and then lambda or alpha.
///
/// `chosen` is alpha (scenario 1) or lambda (scenario 2).  The other value
/// defaults to the midpoint of its admissible interval unless `second` is
/// given.  Throws FeasibilityError naming the violated bound.
InitResult initialize_fpdhf(double beta, double zeta, double norm_L, double t, double kappa1,
                            double kappa2, InitScenario scenario, double chosen,
                            NuMode nu_mode = NuMode::general,
                            std::optional<double> second = std::nullopt);

/// nu = 0 is only safe when the coupling term is known to be monotone.
NuMode default_nu_mode(const SplitProblem& problem);

InitResult initialize_for(const SplitProblem& problem, double t, double kappa1, double kappa2,
                          InitScenario scenario, double chosen,
                          std::optional<double> second = std::nullopt);

// <(x,u), S(x',u')> with S(x,u) = (x - tau L^T u, -tau L x + (tau/sigma) u).
double product_metric(const LinearOperator& L, double tau, double sigma, const DenseVector& a,
                      const DenseVector& b, std::size_t primal_dim);

// Product-space operators from the convergence proof, acting on flat (x, u).
DenseVector product_M(const SplitProblem& p, double tau, double sigma, const DenseVector& z);
DenseVector product_S(const SplitProblem& p, double tau, double sigma, const DenseVector& z);
DenseVector product_T(const SplitProblem& p, double tau, const DenseVector& z);

MethodKernel kernel_fpdhf(const SplitProblem& problem, double tau, double sigma);
MethodKernel kernel_nfb_product(const SplitProblem& problem, double tau, double sigma);
MethodKernel kernel_condat_vu(const SplitProblem& problem, double tau, double sigma);
MethodKernel kernel_chambolle_pock(const SplitProblem& problem, double tau, double sigma);
MethodKernel kernel_cp_fbf(const SplitProblem& problem, double tau, double sigma);
MethodKernel kernel_fbhf(const SplitProblem& problem, double tau);
MethodKernel kernel_fbf(const SplitProblem& problem, double tau);
MethodKernel kernel_fb(const SplitProblem& problem, double gamma);

/// "fb", "fbf", "fbhf", "cp", "cv", "cp-fbf", "fpdhf", "fpdhf-oracle".
/// For primal-only methods sigma is ignored.
MethodKernel make_kernel(std::string_view method, const SplitProblem& problem, double tau,
                         double sigma);
bool is_primal_dual(std::string_view method);

}  // namespace nfb
