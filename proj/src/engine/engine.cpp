#include "nfb/engine/engine.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "nfb/errors.hpp"

namespace nfb {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::max_iters: return "max_iters";
    case RunStatus::diverged: return "diverged";
  }
  return "unknown";
}

void IterateTrace::write_csv(std::ostream& os) const {
  bool with_H = false;
  for (const auto& r : records) with_H = with_H || r.H.has_value();
  os << "n,rel_err,dz_sq," << (with_H ? "H_n," : "") << "elapsed_s\n";
  const auto old = os.precision(17);
  for (const auto& r : records) {
    os << r.n << ',' << r.rel_err << ',' << r.dz_sq << ',';
    if (with_H) {
      if (r.H) os << *r.H;
      os << ',';
    }
    os << r.elapsed_s << '\n';
  }
  os.precision(old);
}

nlohmann::json IterateTrace::summary_json() const {
  return {{"status", to_string(status)},
          {"iterations", iterations},
          {"final_rel_err", final_rel_err},
          {"wall_time_s", wall_time_s},
          {"dz_sq_sum", dz_sq_sum},
          {"fejer_violations", fejer_violations}};
}

double relative_error(const DenseVector& z_new, const DenseVector& z_old) {
  return std::sqrt(dist2(z_new, z_old)) / std::max(norm(z_old), 1.0);
}

namespace {

bool finite_and_bounded(const DenseVector& v, double bound) {
  for (double x : v) {
    if (!(std::abs(x) <= bound)) return false;
  }
  return true;
}

double rho_at(double psi, double lambda) { return psi / lambda - 1.0; }

}  // namespace

RunResult run_nfb(const MethodKernel& kernel, const DenseVector& z0, const DenseVector& zm1,
                  const RunConfig& cfg) {
  require_same_size(z0.size(), zm1.size(), "run_nfb");
  require_same_size(kernel.dim, z0.size(), "run_nfb kernel");
  if (cfg.max_iters < 1) throw std::invalid_argument("run_nfb: max_iters must be positive");
  if (!(cfg.rel_tol > 0.0)) throw std::invalid_argument("run_nfb: rel_tol must be positive");
  if (cfg.trace_every < 1) throw std::invalid_argument("run_nfb: trace_every must be positive");
  if (!cfg.skip_validation) {
    if (!cfg.psi) throw std::invalid_argument("run_nfb: schedule not validated (psi missing)");
    const auto rep = validate_schedule(cfg.schedule, *cfg.psi, std::min<std::int64_t>(cfg.max_iters, 1000000));
    if (!rep.feasible) throw FeasibilityError(rep.first_violation, "run_nfb: " + rep.detail);
  }
  if (cfg.monitor != nullptr && !cfg.psi) {
    throw std::invalid_argument("run_nfb: the Fejer monitor needs psi");
  }

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto seconds = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

  RunResult out;
  IterateTrace& trace = out.trace;
  DenseVector z = z0;
  DenseVector z_prev = zm1;
  const ScheduleSpec& sched = cfg.schedule;

  for (std::int64_t n = 0; n < cfg.max_iters; ++n) {
    const double alpha = alpha_at(sched, n);
    const double lambda = lambda_at(sched, n);

    DenseVector y = alpha == 0.0 ? z : lincomb(1.0 + alpha, z, -alpha, z_prev);
    WarpResult step = kernel.warp_step(y, n);
    DenseVector z_next = lambda == 1.0 ? std::move(step.w) : lincomb(lambda, step.w, 1.0 - lambda, y);

    if (!finite_and_bounded(z_next, cfg.divergence_bound)) {
      trace.status = RunStatus::diverged;
      trace.iterations = n;
      break;
    }

    const DenseVector dz = z_next - z;
    const double dz_sq = kernel.metric_weight(dz, dz);
    const double rel = std::sqrt(dot(dz, dz)) / std::max(norm(z), 1.0);
    trace.dz_sq_sum += dz_sq;
    trace.last_dz_sq = dz_sq;

    std::optional<double> H;
    if (cfg.monitor != nullptr) {
      const double psi = *cfg.psi;
      const FejerReport rep =
          cfg.monitor->step(z, z_prev, z_next, alpha, alpha_at(sched, n + 1),
                            rho_at(psi, lambda), rho_at(psi, lambda_at(sched, n + 1)));
      H = rep.H_prev;
      trace.fejer_violations = cfg.monitor->violations();
    }

    if (n < cfg.trace_dense_until || n % cfg.trace_every == 0) {
      trace.records.push_back({n, rel, dz_sq, H, seconds()});
    }

    z_prev = std::move(z);
    z = std::move(z_next);
    trace.iterations = n + 1;
    trace.final_rel_err = rel;
    if (cfg.on_iterate) cfg.on_iterate(n + 1, z);

    if (rel < cfg.rel_tol) {
      trace.status = RunStatus::converged;
      if (trace.records.empty() || trace.records.back().n != n) {
        trace.records.push_back({n, rel, dz_sq, H, seconds()});
      }
      break;
    }
  }

  if (trace.status == RunStatus::max_iters && !trace.records.empty() &&
      trace.records.back().n != trace.iterations - 1) {
    trace.records.push_back({trace.iterations - 1, trace.final_rel_err, trace.last_dz_sq, std::nullopt,
                             seconds()});
  }
  trace.wall_time_s = seconds();
  out.z = std::move(z);
  out.z_prev = std::move(z_prev);
  return out;
}

}  // namespace nfb
