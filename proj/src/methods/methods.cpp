#include "nfb/methods/methods.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include "nfb/errors.hpp"

namespace nfb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Stand-in for eps -> 0 when there is no cocoercive part.
constexpr double kEpsilonFloor = 1e-6;

using ProblemPtr = std::shared_ptr<const SplitProblem>;

void require_positive_step(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

void forbid(bool present, const char* method, const char* op) {
  if (present) {
    throw std::invalid_argument(std::string(method) + ": operator " + op +
                                " must be structurally absent");
  }
}

double coupling(const SplitProblem& p, double tau, double sigma) {
  return 1.0 - sigma * tau * p.norm_L * p.norm_L;
}

void require_coupling(const SplitProblem& p, double tau, double sigma) {
  if (!(coupling(p, tau, sigma) > 0.0)) {
    throw FeasibilityError("coupling_margin", "1 - sigma tau |L|^2 must be positive");
  }
}

MetricWeight primal_metric() {
  return [](const DenseVector& a, const DenseVector& b) { return dot(a, b); };
}

MetricWeight pd_metric(const ProblemPtr& pr, double tau, double sigma) {
  return [pr, tau, sigma](const DenseVector& a, const DenseVector& b) {
    return product_metric(*pr->L, tau, sigma, a, b, pr->primal_dim);
  };
}

// Primal-only step: x = J_{tau A}(p - tau(Dp + Cp)), w = x - tau(Dx - Dp).
MethodKernel primal_kernel(ProblemPtr pr, double tau, std::string name) {
  MethodKernel k;
  k.name = std::move(name);
  k.dim = pr->primal_dim;
  k.metric_weight = primal_metric();
  k.warp_step = [pr, tau](const DenseVector& p, std::int64_t) {
    const SplitProblem& P = *pr;
    DenseVector x;
    if (P.D) {
      const DenseVector Dp = P.D->eval(p);
      DenseVector g = Dp;
      if (P.C) axpy(1.0, P.C->eval(p), g);
      x = P.resolvent_A(lincomb(1.0, p, -tau, g), tau);
      DenseVector w = x;
      axpy(-tau, P.D->eval(x) - Dp, w);
      return WarpResult{std::move(x), std::move(w)};
    }
    if (P.C) {
      x = P.resolvent_A(lincomb(1.0, p, -tau, P.C->eval(p)), tau);
    } else {
      x = P.resolvent_A(p, tau);
    }
    DenseVector w = x;
    return WarpResult{std::move(x), std::move(w)};
  };
  return k;
}

// Primal-dual step on flat (p, q):
//   x = J_{tau A}(p - tau(L^T q + Dp + Cp))
//   w = x - tau(Dx - Dp)
//   v = J_{sigma B^{-1}}(q + sigma L(x + w - p))
MethodKernel primal_dual_kernel(ProblemPtr pr, double tau, double sigma, std::string name) {
  MethodKernel k;
  k.name = std::move(name);
  k.dim = pr->primal_dim + pr->dual_dim;
  k.metric_weight = pd_metric(pr, tau, sigma);
  k.warp_step = [pr, tau, sigma](const DenseVector& y, std::int64_t) {
    const SplitProblem& P = *pr;
    const DenseVector p = slice(y, 0, P.primal_dim);
    const DenseVector q = slice(y, P.primal_dim, P.dual_dim);

    DenseVector g = P.L->adjoint(q);
    DenseVector Dp;
    if (P.D) {
      Dp = P.D->eval(p);
      axpy(1.0, Dp, g);
    }
    if (P.C) axpy(1.0, P.C->eval(p), g);
    DenseVector x = P.resolvent_A(lincomb(1.0, p, -tau, g), tau);

    DenseVector w = x;
    if (P.D) axpy(-tau, P.D->eval(x) - Dp, w);

    DenseVector dual_arg = q;
    axpy(sigma, (*P.L)(x + w - p), dual_arg);
    const DenseVector v = (*P.resolvent_Binv)(dual_arg, sigma);

    return WarpResult{concat(x, v), concat(w, v)};
  };
  return k;
}

ProblemPtr checked_pd(const SplitProblem& problem, double tau, double sigma, const char* method) {
  problem.validate();
  if (!problem.L || !problem.resolvent_Binv) {
    throw std::invalid_argument(std::string(method) + ": needs L and B (use a primal method)");
  }
  require_positive_step(tau, "tau");
  require_positive_step(sigma, "sigma");
  require_coupling(problem, tau, sigma);
  return std::make_shared<const SplitProblem>(problem);
}

ProblemPtr checked_primal(const SplitProblem& problem, double tau, const char* method) {
  problem.validate();
  forbid(problem.L.has_value(), method, "L");
  forbid(problem.resolvent_Binv.has_value(), method, "B");
  require_positive_step(tau, "step");
  return std::make_shared<const SplitProblem>(problem);
}

// Largest admissible tau for FBHF: 4 beta / (1 + sqrt(1 + 16 beta^2 zeta^2)).
double fbhf_chi(double beta, double zeta) {
  if (std::isinf(beta)) return zeta > 0.0 ? 1.0 / zeta : kInf;
  return 4.0 * beta / (1.0 + std::sqrt(1.0 + 16.0 * beta * beta * zeta * zeta));
}

}  // namespace

PrimalDualPoint PrimalDualPoint::split(const DenseVector& z, std::size_t primal_dim) {
  if (primal_dim > z.size()) throw DimensionError("PrimalDualPoint::split: primal_dim too large");
  return {slice(z, 0, primal_dim), slice(z, primal_dim, z.size() - primal_dim)};
}

double product_metric(const LinearOperator& L, double tau, double sigma, const DenseVector& a,
                      const DenseVector& b, std::size_t primal_dim) {
  require_same_size(a.size(), b.size(), "product_metric");
  const DenseVector ax = slice(a, 0, primal_dim);
  const DenseVector au = slice(a, primal_dim, a.size() - primal_dim);
  const DenseVector bx = slice(b, 0, primal_dim);
  const DenseVector bu = slice(b, primal_dim, b.size() - primal_dim);
  return dot(ax, bx) - tau * dot(L(ax), bu) - tau * dot(L(bx), au) + (tau / sigma) * dot(au, bu);
}

DenseVector product_M(const SplitProblem& p, double tau, double sigma, const DenseVector& z) {
  const DenseVector x = slice(z, 0, p.primal_dim);
  const DenseVector u = slice(z, p.primal_dim, p.dual_dim);
  DenseVector top = (1.0 / tau) * x;
  DenseVector bottom = (1.0 / sigma) * u;
  if (p.L) {
    axpy(-1.0, p.L->adjoint(u), top);
    axpy(-1.0, (*p.L)(x), bottom);
  }
  if (p.D) {
    const DenseVector Dx = p.D->eval(x);
    axpy(-1.0, Dx, top);
    if (p.L) axpy(tau, (*p.L)(Dx), bottom);
  }
  return concat(top, bottom);
}

DenseVector product_S(const SplitProblem& p, double tau, double sigma, const DenseVector& z) {
  const DenseVector x = slice(z, 0, p.primal_dim);
  const DenseVector u = slice(z, p.primal_dim, p.dual_dim);
  DenseVector top = x;
  DenseVector bottom = (tau / sigma) * u;
  if (p.L) {
    axpy(-tau, p.L->adjoint(u), top);
    axpy(-tau, (*p.L)(x), bottom);
  }
  return concat(top, bottom);
}

DenseVector product_T(const SplitProblem& p, double tau, const DenseVector& z) {
  const DenseVector x = slice(z, 0, p.primal_dim);
  const DenseVector u = slice(z, p.primal_dim, p.dual_dim);
  DenseVector top = (1.0 / tau) * x;
  if (p.D) axpy(-1.0, p.D->eval(x), top);
  return concat(top, (1.0 / tau) * u);
}

MethodKernel kernel_fpdhf(const SplitProblem& problem, double tau, double sigma) {
  return primal_dual_kernel(checked_pd(problem, tau, sigma, "fpdhf"), tau, sigma, "fpdhf");
}

// Literal warped resolvent from the proof: r = (M - C) y, x = (M + A)^{-1} r
// solved blockwise, then w = y - tau S^{-1}(M y - M x) = y - tau (T y - T x).
MethodKernel kernel_nfb_product(const SplitProblem& problem, double tau, double sigma) {
  ProblemPtr pr = checked_pd(problem, tau, sigma, "fpdhf-oracle");
  MethodKernel k;
  k.name = "fpdhf-oracle";
  k.dim = pr->primal_dim + pr->dual_dim;
  k.metric_weight = pd_metric(pr, tau, sigma);
  k.warp_step = [pr, tau, sigma](const DenseVector& y, std::int64_t) {
    const SplitProblem& P = *pr;
    const std::size_t n = P.primal_dim;
    const DenseVector My = product_M(P, tau, sigma, y);
    DenseVector r = slice(My, 0, n);
    const DenseVector s = slice(My, n, P.dual_dim);
    if (P.C) axpy(-1.0, P.C->eval(slice(y, 0, n)), r);

    const DenseVector x = P.resolvent_A(tau * r, tau);
    DenseVector dual_arg = s;
    axpy(2.0, (*P.L)(x), dual_arg);
    if (P.D) axpy(-tau, (*P.L)(P.D->eval(x)), dual_arg);
    const DenseVector v = (*P.resolvent_Binv)(sigma * dual_arg, sigma);

    DenseVector xx = concat(x, v);
    DenseVector w = y;
    axpy(-tau, product_T(P, tau, y) - product_T(P, tau, xx), w);
    return WarpResult{std::move(xx), std::move(w)};
  };
  return k;
}

MethodKernel kernel_condat_vu(const SplitProblem& problem, double tau, double sigma) {
  forbid(problem.D.has_value(), "cv", "D");
  ProblemPtr pr = checked_pd(problem, tau, sigma, "cv");
  const double lhs = sigma * tau * pr->norm_L * pr->norm_L + tau / (2.0 * pr->beta);
  if (!(lhs < 1.0)) {
    throw FeasibilityError("condat_vu_step", "sigma tau |L|^2 + tau / (2 beta) must be below 1");
  }
  return primal_dual_kernel(std::move(pr), tau, sigma, "cv");
}

MethodKernel kernel_chambolle_pock(const SplitProblem& problem, double tau, double sigma) {
  forbid(problem.C.has_value(), "cp", "C");
  forbid(problem.D.has_value(), "cp", "D");
  return primal_dual_kernel(checked_pd(problem, tau, sigma, "cp"), tau, sigma, "cp");
}

MethodKernel kernel_cp_fbf(const SplitProblem& problem, double tau, double sigma) {
  forbid(problem.C.has_value(), "cp-fbf", "C");
  ProblemPtr pr = checked_pd(problem, tau, sigma, "cp-fbf");
  if (!(tau * pr->zeta / std::sqrt(coupling(*pr, tau, sigma)) < 1.0)) {
    throw FeasibilityError("zeta_tilde_bound", "tau zeta / sqrt(1 - sigma tau |L|^2) must be below 1");
  }
  return primal_dual_kernel(std::move(pr), tau, sigma, "cp-fbf");
}

MethodKernel kernel_fbhf(const SplitProblem& problem, double tau) {
  ProblemPtr pr = checked_primal(problem, tau, "fbhf");
  const double chi = fbhf_chi(pr->beta, pr->zeta);
  if (!(tau < chi)) throw FeasibilityError("fbhf_step", "tau must lie in ]0, chi[");
  return primal_kernel(std::move(pr), tau, "fbhf");
}

MethodKernel kernel_fbf(const SplitProblem& problem, double tau) {
  forbid(problem.C.has_value(), "fbf", "C");
  ProblemPtr pr = checked_primal(problem, tau, "fbf");
  if (pr->zeta > 0.0 && !(tau < 1.0 / pr->zeta)) {
    throw FeasibilityError("fbf_step", "tau must lie in ]0, 1/zeta[");
  }
  return primal_kernel(std::move(pr), tau, "fbf");
}

MethodKernel kernel_fb(const SplitProblem& problem, double gamma) {
  forbid(problem.D.has_value(), "fb", "D");
  ProblemPtr pr = checked_primal(problem, gamma, "fb");
  if (!(gamma < 2.0 * pr->beta)) throw FeasibilityError("fb_step", "gamma must be below 2 beta");
  return primal_kernel(std::move(pr), gamma, "fb");
}

bool is_primal_dual(std::string_view method) {
  return method == "cp" || method == "cv" || method == "cp-fbf" || method == "fpdhf" ||
         method == "fpdhf-oracle";
}

MethodKernel make_kernel(std::string_view method, const SplitProblem& problem, double tau,
                         double sigma) {
  if (method == "fb") return kernel_fb(problem, tau);
  if (method == "fbf") return kernel_fbf(problem, tau);
  if (method == "fbhf") return kernel_fbhf(problem, tau);
  if (method == "cp") return kernel_chambolle_pock(problem, tau, sigma);
  if (method == "cv") return kernel_condat_vu(problem, tau, sigma);
  if (method == "cp-fbf") return kernel_cp_fbf(problem, tau, sigma);
  if (method == "fpdhf") return kernel_fpdhf(problem, tau, sigma);
  if (method == "fpdhf-oracle") return kernel_nfb_product(problem, tau, sigma);
  throw std::invalid_argument("unknown method '" + std::string(method) + "'");
}

// ---------------------------------------------------------------------------
// Initialization

nlohmann::json InitResult::to_json() const {
  auto num = [](double v) -> nlohmann::json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  return {{"eps_bar", num(eps_bar)},
          {"one_minus_eps_bar", num(one_minus_eps_bar)},
          {"chi", num(chi)},
          {"epsilon", num(epsilon)},
          {"tau", num(tau)},
          {"sigma", num(sigma)},
          {"psi", num(psi)},
          {"lambda", num(lambda_chosen)},
          {"alpha", num(alpha_chosen)},
          {"t", t},
          {"kappa1", kappa1},
          {"kappa2", kappa2},
          {"scenario", scenario == InitScenario::pick_alpha_then_lambda ? "alpha_then_lambda"
                                                                        : "lambda_then_alpha"},
          {"nu_mode", nu_mode == NuMode::general ? "general" : "monotone"},
          {"certificate", certificate.to_json()}};
}

InitResult initialize_fpdhf(double beta, double zeta, double norm_L, double t, double kappa1,
                            double kappa2, InitScenario scenario, double chosen, NuMode nu_mode,
                            std::optional<double> second) {
  auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!open_unit(t) || !open_unit(kappa1)) {
    throw std::invalid_argument("initialize: t and kappa1 must lie in ]0,1[");
  }
  if (!(kappa2 >= 0.0 && kappa2 < 1.0)) throw std::invalid_argument("initialize: kappa2 must lie in [0,1[");
  if (!(beta > 0.0) || !(zeta >= 0.0) || !std::isfinite(zeta) || !(norm_L >= 0.0)) {
    throw std::invalid_argument("initialize: need beta > 0, zeta >= 0, |L| >= 0");
  }
  if (norm_L > 0.0 && kappa2 == 0.0) {
    throw std::invalid_argument("initialize: kappa2 = 0 only makes sense without L");
  }

  InitResult r;
  r.t = t;
  r.kappa1 = kappa1;
  r.kappa2 = kappa2;
  r.scenario = scenario;
  r.nu_mode = nu_mode;

  // Usable room left in the coupling once tau is fixed: sigma tau |L|^2 must
  // stay below 1 - tau / (2 beta eps) with 2 beta eps = t chi.
  double sigma_room = 1.0;
  if (std::isfinite(beta)) {
    if (zeta == 0.0) {
      r.eps_bar = 1.0;
      r.one_minus_eps_bar = 0.0;
      r.chi = 2.0 * beta;
    } else {
      const double q = 16.0 * beta * beta * zeta * zeta;
      const double s = std::sqrt(1.0 + q);
      r.eps_bar = 2.0 / (1.0 + s);
      // 1 - eps_bar = (s - 1)/(s + 1) and s - 1 = q/(s + 1).
      r.one_minus_eps_bar = q / ((1.0 + s) * (1.0 + s));
      r.chi = 4.0 * beta / (1.0 + s);
    }
    r.epsilon = t * r.eps_bar;
    r.tau = kappa1 * r.chi;
    sigma_room = 1.0 - r.tau / (t * r.chi);
    if (norm_L > 0.0 && !(sigma_room > 0.0)) {
      throw FeasibilityError("cocoercive_step", "kappa1 must be below t so that tau < 2 beta eps");
    }
  } else {
    r.eps_bar = 0.0;
    r.one_minus_eps_bar = 1.0;
    r.chi = zeta > 0.0 ? 1.0 / zeta : (norm_L > 0.0 ? 1.0 / norm_L : 1.0);
    r.epsilon = t * kEpsilonFloor;
    r.tau = kappa1 * r.chi;
    sigma_room = zeta > 0.0 ? 1.0 - r.tau / r.chi : 1.0;
  }
  r.sigma = norm_L > 0.0 ? kappa2 / (r.tau * norm_L * norm_L) * sigma_room : 0.0;

  r.steps = fpdhf_constants(beta, zeta, r.tau, r.sigma, norm_L, r.epsilon, nu_mode);
  const double margin = 1.0 - r.steps.zeta_tilde * r.steps.zeta_tilde - r.epsilon;
  if (!(margin > 0.0)) {
    throw FeasibilityError("lipschitz_margin", "1 - zeta~^2 - epsilon must be positive");
  }
  r.psi = r.steps.psi();

  if (scenario == InitScenario::pick_alpha_then_lambda) {
    if (!(chosen >= 0.0 && chosen < 1.0)) {
      throw FeasibilityError("alpha_range", "alpha must lie in [0,1[");
    }
    r.alpha_chosen = chosen;
    r.lambda_chosen = second.value_or(lambda_interval(r.psi, chosen).midpoint());
  } else {
    if (!(chosen > 0.0 && chosen < r.psi)) {
      throw FeasibilityError("lambda_interval", "lambda must lie in ]0, psi[ = ]0, " +
                                                    std::to_string(r.psi) + "[");
    }
    r.lambda_chosen = chosen;
    r.alpha_chosen = second.value_or(0.5 * alpha_bound(r.psi, chosen).value);
  }

  r.certificate = certify(r.steps, r.alpha_chosen, r.lambda_chosen);
  if (const InequalityCheck* bad = r.certificate.first_failure()) {
    throw FeasibilityError(bad->name, "initialize: " + bad->statement + " fails");
  }
  return r;
}

NuMode default_nu_mode(const SplitProblem& problem) {
  if (problem.L && problem.D && !problem.coupling_monotone) return NuMode::general;
  return NuMode::monotone;
}

InitResult initialize_for(const SplitProblem& problem, double t, double kappa1, double kappa2,
                          InitScenario scenario, double chosen, std::optional<double> second) {
  const double norm_L = problem.L ? problem.norm_L : 0.0;
  return initialize_fpdhf(problem.beta, problem.zeta, norm_L, t, kappa1, problem.L ? kappa2 : 0.0,
                          scenario, chosen, default_nu_mode(problem), second);
}

}  // namespace nfb
