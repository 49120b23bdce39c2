#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nfb/certificates/certificates.hpp"
#include "nfb/linalg/dense.hpp"
#include "nfb/schedules/schedules.hpp"

namespace nfb {

struct WarpResult {
  DenseVector x;
  DenseVector w;
};

/// One warped-resolvent step plus the forward correction.  The engine only
/// wraps this with inertia and relaxation.
struct MethodKernel {
  std::string name;
  std::size_t dim = 0;
  std::function<WarpResult(const DenseVector& y, std::int64_t n)> warp_step;
  MetricWeight metric_weight;  // <a, S b>
};

enum class RunStatus { converged, max_iters, diverged };
const char* to_string(RunStatus s);

struct TraceRecord {
  std::int64_t n = 0;
  double rel_err = 0.0;
  double dz_sq = 0.0;  // |z_{n+1} - z_n|^2_S
  std::optional<double> H;
  double elapsed_s = 0.0;
};

struct IterateTrace {
  std::vector<TraceRecord> records;
  RunStatus status = RunStatus::max_iters;
  std::int64_t iterations = 0;  // number of updates computed
  double final_rel_err = 0.0;
  double wall_time_s = 0.0;
  double dz_sq_sum = 0.0;
  double last_dz_sq = 0.0;
  int fejer_violations = 0;

  void write_csv(std::ostream& os) const;
  nlohmann::json summary_json() const;
};

struct RunConfig {
  std::int64_t max_iters = 1000000;
  double rel_tol = 1e-6;
  ScheduleSpec schedule;
  // Every iteration up to dense_until, then every trace_every iterations.
  std::int64_t trace_dense_until = 100;
  std::int64_t trace_every = 100;
  // psi of the certified parameters; needed to validate the schedule and
  // to feed rho_n to the monitor.
  std::optional<double> psi;
  bool skip_validation = false;
  FejerMonitor* monitor = nullptr;
  // Called after every update with (n + 1, z_{n+1}).
  std::function<void(std::int64_t, const DenseVector&)> on_iterate;
  double divergence_bound = 1e100;
};

struct RunResult {
  DenseVector z;       // last finite iterate
  DenseVector z_prev;  // its predecessor
  IterateTrace trace;
};

/// |z_new - z_old| / max(|z_old|, 1).
double relative_error(const DenseVector& z_new, const DenseVector& z_old);

RunResult run_nfb(const MethodKernel& kernel, const DenseVector& z0, const DenseVector& zm1,
                  const RunConfig& cfg);

}  // namespace nfb
