#include "nfb/certificates/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nfb/errors.hpp"

namespace nfb {
namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

}  // namespace

double psi_value(double zeta, double epsilon, NuMode mode) {
  if (!(zeta >= 0.0) || !(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("psi_value: need zeta >= 0 and epsilon in ]0,1[");
  }
  if (!(1.0 - zeta * zeta - epsilon > 0.0)) {
    throw FeasibilityError("lipschitz_margin", "1 - zeta^2 - epsilon = " +
                                                   fmt_double(1.0 - zeta * zeta - epsilon) +
                                                   " must be positive");
  }
  const double nu = mode == NuMode::general ? 2.0 * zeta : 0.0;
  return (2.0 - epsilon + nu) / (1.0 + zeta * zeta + nu);
}

double phi_value(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("phi_value: alpha must be in [0,1[");
  const double om = 1.0 - alpha;
  return om * om / (2.0 * alpha * alpha - alpha + 1.0);
}

Interval lambda_interval(double psi, double alpha) { return {0.0, phi_value(alpha) * psi}; }

AlphaBound alpha_bound(double psi, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("alpha_bound: lambda must be positive");
  if (!(lambda < psi)) return {0.0, false};
  const double a = psi / lambda - 2.0;
  // Rationalised form of the smaller root; stays finite as a -> 0.
  return {2.0 * (a + 1.0) / (2.0 * a + 3.0 + std::sqrt(8.0 * a + 9.0)), true};
}

double rho_value(double psi, double lambda) { return psi / lambda - 1.0; }

double delta_n(double alpha_n, double alpha_np1, double rho_n, double rho_np1) {
  return (1.0 - alpha_n) * rho_n - alpha_np1 * (1.0 - alpha_np1) * rho_np1 -
         alpha_np1 * (1.0 + alpha_np1);
}

double StepParams::psi() const {
  return (2.0 - epsilon + nu) / (1.0 + zeta_tilde * zeta_tilde + nu);
}

StepParams fpdhf_constants(double beta, double zeta, double tau, double sigma, double norm_L,
                           double epsilon, NuMode mode) {
  if (!(tau > 0.0) || !(sigma >= 0.0) || !(norm_L >= 0.0) || !(zeta >= 0.0) || !(beta > 0.0)) {
    throw std::invalid_argument("fpdhf_constants: invalid argument sign");
  }
  StepParams p;
  p.epsilon = epsilon;
  p.tau = tau;
  p.sigma = sigma;
  p.coupling = 1.0 - sigma * tau * norm_L * norm_L;
  if (!(p.coupling > 0.0)) {
    throw FeasibilityError("coupling_margin", "1 - sigma tau |L|^2 = " + fmt_double(p.coupling) +
                                                  " must be positive");
  }
  p.beta_tilde = beta * p.coupling;
  p.zeta_tilde = tau * zeta / std::sqrt(p.coupling);
  p.nu = mode == NuMode::general ? 2.0 * p.zeta_tilde : 0.0;
  return p;
}

std::vector<InequalityCheck> check_step_params(const StepParams& p) {
  std::vector<InequalityCheck> out;
  out.push_back({"coupling_margin", "1 - sigma tau |L|^2 > 0", p.coupling, 0.0, p.coupling > 0.0});
  out.push_back({"epsilon_range", "0 < epsilon < 1", p.epsilon, 1.0,
                 p.epsilon > 0.0 && p.epsilon < 1.0});
  out.push_back({"zeta_tilde_bound", "zeta~ < 1", p.zeta_tilde, 1.0, p.zeta_tilde < 1.0});
  const double margin = 1.0 - p.zeta_tilde * p.zeta_tilde - p.epsilon;
  out.push_back({"lipschitz_margin", "1 - zeta~^2 - epsilon > 0", margin, 0.0, margin > 0.0});
  const double cap = std::isinf(p.beta_tilde) ? p.beta_tilde : 2.0 * p.beta_tilde * p.epsilon;
  out.push_back({"cocoercive_step", "tau <= 2 beta~ epsilon", p.tau, cap, p.tau <= cap});
  return out;
}

bool Certificate::feasible() const { return first_failure() == nullptr; }

const InequalityCheck* Certificate::first_failure() const {
  for (const auto& c : checks) {
    if (!c.pass) return &c;
  }
  return nullptr;
}

nlohmann::json Certificate::to_json() const {
  nlohmann::json j;
  j["epsilon"] = number(steps.epsilon);
  j["tau"] = number(steps.tau);
  j["sigma"] = number(steps.sigma);
  j["beta_tilde"] = number(steps.beta_tilde);
  j["zeta_tilde"] = number(steps.zeta_tilde);
  j["nu"] = number(steps.nu);
  j["psi"] = number(psi);
  j["alpha"] = number(alpha);
  j["lambda"] = number(lambda);
  j["rho"] = number(rho);
  j["lambda_interval"] = {number(lambda_range.lo), number(lambda_range.hi)};
  j["alpha_bar"] = number(alpha_max.value);
  j["alpha_bar_feasible"] = alpha_max.feasible;
  j["delta_hat"] = number(delta_hat);
  j["feasible"] = feasible();
  auto& arr = j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"statement", c.statement},
                   {"lhs", number(c.lhs)},
                   {"rhs", number(c.rhs)},
                   {"pass", c.pass}});
  }
  return j;
}

Certificate certify(const StepParams& steps, double alpha, double lambda) {
  Certificate c;
  c.steps = steps;
  c.alpha = alpha;
  c.lambda = lambda;
  c.checks = check_step_params(steps);
  c.psi = steps.psi();
  c.rho = rho_value(c.psi, lambda);
  const bool alpha_ok = alpha >= 0.0 && alpha < 1.0;
  c.lambda_range = alpha_ok ? lambda_interval(c.psi, alpha) : Interval{0.0, 0.0};
  c.alpha_max = lambda > 0.0 ? alpha_bound(c.psi, lambda) : AlphaBound{};
  c.delta_hat = delta_n(alpha, alpha, c.rho, c.rho);

  c.checks.push_back({"alpha_range", "0 <= alpha < 1", alpha, 1.0, alpha_ok});
  c.checks.push_back({"rho_nonneg", "rho = psi/lambda - 1 >= 0", c.rho, 0.0, c.rho >= 0.0});
  c.checks.push_back({"lambda_interval", "lambda < phi(alpha) psi", lambda, c.lambda_range.hi,
                      lambda > 0.0 && c.lambda_range.contains(lambda)});
  c.checks.push_back({"asymptotic_decrease", "delta = (1-alpha)^2 rho - alpha(1+alpha) > 0",
                      c.delta_hat, 0.0, c.delta_hat > 0.0});
  return c;
}

double fejer_H(const DenseVector& z_n, const DenseVector& z_nm1, const DenseVector& reference,
               double alpha_nm1, double alpha_n, double rho_n, const MetricWeight& metric) {
  const DenseVector a = z_n - reference;
  const DenseVector b = z_nm1 - reference;
  const DenseVector d = z_n - z_nm1;
  const double coef = alpha_n * (1.0 - alpha_n) * rho_n + alpha_n * (1.0 + alpha_n);
  return metric(a, a) - alpha_nm1 * metric(b, b) + coef * metric(d, d);
}

FejerMonitor::FejerMonitor(DenseVector reference, MetricWeight metric, double slack)
    : reference_(std::move(reference)), metric_(std::move(metric)), slack_(slack) {}

FejerReport FejerMonitor::step(const DenseVector& z_n, const DenseVector& z_nm1,
                               const DenseVector& z_np1, double alpha_n, double alpha_np1,
                               double rho_n, double rho_np1) {
  FejerReport r;
  const double alpha_nm1 = prev_alpha_.value_or(alpha_n);
  r.H_prev = last_H_.value_or(fejer_H(z_n, z_nm1, reference_, alpha_nm1, alpha_n, rho_n, metric_));
  r.H_next = fejer_H(z_np1, z_n, reference_, alpha_n, alpha_np1, rho_np1, metric_);
  r.delta = delta_n(alpha_n, alpha_np1, rho_n, rho_np1);
  if (alpha_nm1 > alpha_n) r.allowance = (alpha_nm1 - alpha_n) * sq(z_nm1 - reference_);

  const double excess = r.H_next - r.H_prev - r.allowance;
  max_excess_ = std::max(max_excess_, excess);
  r.flagged = r.delta > 0.0 && excess > slack_;
  if (r.flagged) ++violations_;

  last_dz_sq_ = sq(z_np1 - z_n);
  dz_sq_sum_ += last_dz_sq_;
  last_H_ = r.H_next;
  prev_alpha_ = alpha_n;
  ++steps_;
  return r;
}

}  // namespace nfb
