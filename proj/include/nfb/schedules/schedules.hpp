#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "nfb/certificates/certificates.hpp"

namespace nfb {

enum class ScheduleKind { constant, nondecreasing, decreasing_summable };

/// Inertial sequence plus relaxation.
///
///   constant:            alpha_n = limit_alpha
///   nondecreasing:       alpha_n = limit_alpha * n / (n + ramp)
///   decreasing_summable: alpha_n = 1 / (c0 + c1 n (ln n)^e), log factor 0 for n <= 1
struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::constant;
  std::string name = "const:0";
  double limit_alpha = 0.0;
  double c0 = 1.0;
  double c1 = 0.0;
  double exponent = 1.0;
  double ramp = 0.0;
  double lambda = 1.0;
  std::function<double(std::int64_t)> lambda_fn;  // overrides `lambda` when set

  static ScheduleSpec constant(double alpha, double lambda = 1.0);
  static ScheduleSpec decreasing(double c0, double c1, double exponent, double lambda = 1.0);
};

double alpha_at(const ScheduleSpec& spec, std::int64_t n);
double lambda_at(const ScheduleSpec& spec, std::int64_t n);

/// "const:a", "dec1", "dec2", "dec3", "custom:c0,c1,e", "ramp:a,c".
/// Throws std::invalid_argument on an unknown or malformed name.
ScheduleSpec parse_schedule(std::string_view name, double lambda = 1.0);

const char* to_string(ScheduleKind kind);

struct ScheduleReport {
  bool feasible = false;
  std::string first_violation;  // empty when feasible
  std::string detail;
  double min_rho = 0.0;
  double delta_hat = 0.0;         // constant: closed form; otherwise min over [h/2, h]
  double delta_limit = 0.0;       // liminf delta_n, decides asymptotic_decrease
  std::int64_t decrease_from = 0; // delta_n > 0 for all n in [decrease_from, horizon]
  bool monotone_ok = true;        // strict decrease / nondecrease as the kind requires
  bool summable_analytic = true;  // decreasing kind: exponent > 1
  std::int64_t horizon = 0;

  nlohmann::json to_json() const;
};

ScheduleReport validate_schedule(const ScheduleSpec& spec, double psi, std::int64_t horizon);
ScheduleReport validate_schedule(const ScheduleSpec& spec, const Certificate& cert,
                                 std::int64_t horizon);

}  // namespace nfb
