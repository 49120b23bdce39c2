#include "nfb/schedules/schedules.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nfb {
namespace {

std::vector<double> parse_numbers(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item(text.substr(pos, comma - pos));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw std::invalid_argument("schedule '" + std::string(what) + "': bad number '" + item + "'");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

ScheduleSpec ScheduleSpec::constant(double alpha, double lambda) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("constant schedule: alpha in [0,1[");
  ScheduleSpec s;
  s.kind = ScheduleKind::constant;
  s.limit_alpha = alpha;
  s.lambda = lambda;
  char buf[48];
  std::snprintf(buf, sizeof buf, "const:%.17g", alpha);
  s.name = buf;
  return s;
}

ScheduleSpec ScheduleSpec::decreasing(double c0, double c1, double exponent, double lambda) {
  if (!(c0 >= 1.0) || !(c1 > 0.0) || !(exponent > 0.0)) {
    throw std::invalid_argument("decreasing schedule: need c0 >= 1, c1 > 0, e > 0");
  }
  ScheduleSpec s;
  s.kind = ScheduleKind::decreasing_summable;
  s.c0 = c0;
  s.c1 = c1;
  s.exponent = exponent;
  s.limit_alpha = 0.0;
  s.lambda = lambda;
  char buf[96];
  std::snprintf(buf, sizeof buf, "custom:%.17g,%.17g,%.17g", c0, c1, exponent);
  s.name = buf;
  return s;
}

double alpha_at(const ScheduleSpec& spec, std::int64_t n) {
  switch (spec.kind) {
    case ScheduleKind::constant:
      return spec.limit_alpha;
    case ScheduleKind::nondecreasing: {
      const double m = static_cast<double>(std::max<std::int64_t>(n, 0));
      return spec.ramp > 0.0 ? spec.limit_alpha * m / (m + spec.ramp) : spec.limit_alpha;
    }
    case ScheduleKind::decreasing_summable: {
      double logf = 0.0;
      if (n > 1) logf = std::pow(std::log(static_cast<double>(n)), spec.exponent);
      return 1.0 / (spec.c0 + spec.c1 * static_cast<double>(n) * logf);
    }
  }
  return 0.0;
}

double lambda_at(const ScheduleSpec& spec, std::int64_t n) {
  return spec.lambda_fn ? spec.lambda_fn(n) : spec.lambda;
}

ScheduleSpec parse_schedule(std::string_view name, double lambda) {
  ScheduleSpec s;
  if (name == "dec1") {
    s = ScheduleSpec::decreasing(1.0, 0.001, 1.001, lambda);
  } else if (name == "dec2") {
    s = ScheduleSpec::decreasing(3.0, 0.00001, 1.00001, lambda);
  } else if (name == "dec3") {
    s = ScheduleSpec::decreasing(9.0, 0.00001, 1.00001, lambda);
  } else if (name.rfind("const:", 0) == 0) {
    const auto v = parse_numbers(name.substr(6), name);
    if (v.size() != 1) throw std::invalid_argument("schedule 'const:' takes one value");
    s = ScheduleSpec::constant(v[0], lambda);
  } else if (name.rfind("custom:", 0) == 0) {
    const auto v = parse_numbers(name.substr(7), name);
    if (v.size() != 3) throw std::invalid_argument("schedule 'custom:' takes c0,c1,e");
    s = ScheduleSpec::decreasing(v[0], v[1], v[2], lambda);
  } else if (name.rfind("ramp:", 0) == 0) {
    const auto v = parse_numbers(name.substr(5), name);
    if (v.size() != 2 || !(v[0] >= 0.0 && v[0] < 1.0) || !(v[1] >= 0.0)) {
      throw std::invalid_argument("schedule 'ramp:' takes alpha in [0,1[ and c >= 0");
    }
    s.kind = ScheduleKind::nondecreasing;
    s.limit_alpha = v[0];
    s.ramp = v[1];
    s.lambda = lambda;
  } else {
    throw std::invalid_argument("unknown schedule '" + std::string(name) + "'");
  }
  s.name = std::string(name);
  return s;
}

const char* to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::nondecreasing: return "nondecreasing";
    case ScheduleKind::decreasing_summable: return "decreasing_summable";
  }
  return "?";
}

nlohmann::json ScheduleReport::to_json() const {
  return {{"feasible", feasible},
          {"first_violation", first_violation},
          {"detail", detail},
          {"min_rho", min_rho},
          {"delta_hat", delta_hat},
          {"delta_limit", delta_limit},
          {"decrease_from", decrease_from},
          {"monotone_ok", monotone_ok},
          {"summable_analytic", summable_analytic},
          {"horizon", horizon}};
}

ScheduleReport validate_schedule(const ScheduleSpec& spec, double psi, std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("validate_schedule: horizon must be >= 1");
  ScheduleReport r;
  r.horizon = horizon;
  auto fail = [&r](const char* name, std::string detail) {
    if (r.first_violation.empty()) {
      r.first_violation = name;
      r.detail = std::move(detail);
    }
  };

  if (spec.kind == ScheduleKind::constant && !spec.lambda_fn) {
    const double a = spec.limit_alpha;
    const double lam = spec.lambda;
    r.min_rho = rho_value(psi, lam);
    r.delta_hat = delta_n(a, a, r.min_rho, r.min_rho);
    r.delta_limit = r.delta_hat;
    r.decrease_from = r.delta_hat > 0.0 ? 0 : horizon;
    if (!(a >= 0.0 && a < 1.0)) fail("alpha_range", "alpha must lie in [0,1[");
    if (!(lam > 0.0)) fail("lambda_positive", "lambda must be positive");
    if (r.min_rho < 0.0) fail("rho_nonneg", "lambda exceeds psi");
    // Closed form decides; delta_hat is reported for information.
    if (a >= 0.0 && a < 1.0 && !(lam < phi_value(a) * psi)) {
      fail("lambda_interval", "lambda >= phi(alpha) psi");
    }
    r.feasible = r.first_violation.empty();
    return r;
  }

  r.min_rho = std::numeric_limits<double>::infinity();
  r.delta_hat = std::numeric_limits<double>::infinity();
  const std::int64_t tail_start = std::max<std::int64_t>(horizon / 2, 0);
  double a_n = alpha_at(spec, 0);
  double rho_n = rho_value(psi, lambda_at(spec, 0));
  r.min_rho = rho_n;
  for (std::int64_t n = 0; n < horizon; ++n) {
    const double a_np1 = alpha_at(spec, n + 1);
    const double lam_np1 = lambda_at(spec, n + 1);
    const double rho_np1 = rho_value(psi, lam_np1);
    r.min_rho = std::min(r.min_rho, rho_np1);
    if (!(a_np1 >= 0.0 && a_np1 <= 1.0)) fail("alpha_range", "alpha_n left [0,1]");
    if (spec.kind == ScheduleKind::decreasing_summable && n >= 2 && !(a_np1 < a_n)) {
      r.monotone_ok = false;
    }
    if (spec.kind == ScheduleKind::nondecreasing && (a_np1 < a_n || a_np1 > spec.limit_alpha)) {
      r.monotone_ok = false;
    }
    const double d = delta_n(a_n, a_np1, rho_n, rho_np1);
    if (n >= tail_start) r.delta_hat = std::min(r.delta_hat, d);
    if (!(d > 0.0)) r.decrease_from = n + 1;
    a_n = a_np1;
    rho_n = rho_np1;
  }
  if (r.min_rho < 0.0) fail("rho_nonneg", "some lambda_n exceeds psi");
  if (!r.monotone_ok) {
    fail("monotonicity", spec.kind == ScheduleKind::decreasing_summable
                             ? "alpha_n not strictly decreasing for n >= 2"
                             : "alpha_n not nondecreasing towards its limit");
  }
  if (spec.kind == ScheduleKind::decreasing_summable) {
    r.summable_analytic = spec.c1 > 0.0 && spec.exponent > 1.0;
    if (!r.summable_analytic) fail("summability", "exponent must exceed 1");
  }
  // alpha_n converges monotonically to its limit, so liminf delta_n is the
  // constant-schedule delta at that limit.  This is exact where the window
  // minimum over [h/2, h] is only a surrogate.
  const double limit = spec.kind == ScheduleKind::decreasing_summable ? 0.0 : spec.limit_alpha;
  const double rho_h = rho_value(psi, lambda_at(spec, horizon));
  r.delta_limit = delta_n(limit, limit, rho_h, rho_h);
  if (!(r.delta_limit > 0.0)) fail("asymptotic_decrease", "liminf delta_n is not positive");
  r.feasible = r.first_violation.empty();
  return r;
}

ScheduleReport validate_schedule(const ScheduleSpec& spec, const Certificate& cert,
                                 std::int64_t horizon) {
  return validate_schedule(spec, cert.psi, horizon);
}

}  // namespace nfb
