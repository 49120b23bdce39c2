#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nfb/engine/engine.hpp"
#include "nfb/linalg/image.hpp"
#include "nfb/linalg/linear_operator.hpp"
#include "nfb/methods/methods.hpp"
#include "nfb/operators/operators.hpp"

namespace nfb {

/// "none" (plain fixed-point loop, no engine), "abar:f" (constant
/// f * alpha_bar(psi, lambda)), or anything parse_schedule accepts.
ScheduleSpec resolve_schedule(std::string_view name, double psi, double lambda);

/// z_{n+1} = w(z_n) with the engine's stopping rule.  Baseline for the
/// reduction identity.
RunResult run_plain(const MethodKernel& kernel, const DenseVector& z0, std::int64_t max_iters,
                    double rel_tol);

// ---------------------------------------------------------------------------
// Box- and cone-constrained least squares
//
//   min 1/2 |M x - b|^2  s.t.  x in [0,1]^N, R x <= 0
//
// posed as 0 in A(x,u) + C(x,u) + D(x,u) over R^N x R^p.

struct QpConfig {
  std::size_t N = 200;
  std::size_t m = 100;
  std::size_t p = 20;
  std::uint64_t seed = 1;
  double t = 0.9;
  double kappa1 = 0.85;
  std::string method = "fbhf";
  std::string schedule = "const:0";
  double lambda = 1.0;
  double lambda_psi = 0.0;  // > 0: lambda = lambda_psi * psi of each instance
  std::int64_t max_iters = 100000;
  double rel_tol = 1e-6;
  // "normal":  b standard normal.
  // "planted": b = M x* + b_noise * g with x* uniform in [0,1]^N.  Usually
  //            fits exactly, which leaves a whole face of minimisers.
  std::string b_mode = "normal";
  double b_noise = 0.01;
  // Redraw b while a quick solve finds a zero-residual optimum, so that the
  // minimiser is unique (M has more columns than rows).
  bool require_unique = true;

  void validate() const;
  nlohmann::json to_json() const;
};

struct QpInstance {
  QpConfig cfg;
  DenseMatrix M;
  DenseMatrix R;
  DenseVector b;
  double norm_M = 0.0;
  double norm_R = 0.0;
  int b_redraws = 0;
  double screened_objective = 0.0;  // NaN when the screen is off
  SplitProblem problem;
};

QpInstance gen_qp(const QpConfig& cfg);

/// |z - J_A(z - (C + D) z)|_inf, zero exactly at solutions.
double qp_kkt_residual(const QpInstance& inst, const DenseVector& z);
double qp_objective(const QpInstance& inst, const DenseVector& x);

struct QpRun {
  std::uint64_t seed = 0;
  InitResult init;
  RunResult result;
};

/// Initialise, build the kernel and solve from z0 = z_{-1} = 0.
QpRun run_qp(const QpInstance& inst, FejerMonitor* monitor = nullptr);

struct BenchRow {
  std::string method;
  std::string schedule;
  std::string lambda;  // "1" or "psi*0.95"
  double t = 0.0;
  std::size_t N = 0, m = 0, p = 0;
  int runs = 0;
  int converged = 0;
  int diverged = 0;
  double mean_iters_all = 0.0;
  double mean_time_all = 0.0;
  double mean_iters_converged = 0.0;
  double mean_time_converged = 0.0;
  std::vector<std::int64_t> iterations;  // per seed, ascending seed order
};

/// Each grid cell runs seeds cfg.seed .. cfg.seed + realizations - 1, spread
/// over `threads` workers.  Averages are taken in seed order.
std::vector<BenchRow> run_qp_bench(const std::vector<QpConfig>& grid, int realizations,
                                   int threads = 1);
std::string bench_csv(const std::vector<BenchRow>& rows);

// ---------------------------------------------------------------------------
// Image restoration
//
//   min_{x in [0,1]^{NxN}} 1/2 |T x - z|^2 + mu1 |grad x|_1 + mu2 H_delta(W x)

struct RestoreConfig {
  std::string image_path;  // empty: synthetic image
  std::size_t N = 64;
  std::string kernel = "avg3";  // avg3, avg9, gauss3, identity
  double noise_std = 1e-3;
  double mu1 = 1e-2;
  double mu2 = 1e-3;
  double delta = 1e-2;
  std::uint64_t seed = 1;
  std::string method = "fpdhf";
  std::string schedule = "const:0";
  double lambda = 1.0;
  double lambda_psi = 0.0;
  double t = 0.999;
  double kappa1 = 0.17;
  double kappa2 = 0.99;
  std::int64_t max_iters = 50000;
  double rel_tol = 1e-6;
  int haar_level = 3;

  void validate() const;
  nlohmann::json to_json() const;
};

struct RestoreInstance {
  RestoreConfig cfg;
  GrayImage original;
  GrayImage observed;
  DenseMatrix blur_kernel;
  LinearOperator T;
  LinearOperator W;
  LinearOperator grad;
  SplitProblem problem;
};

DenseMatrix make_blur_kernel(std::string_view name);

/// Piecewise-constant test scene with values in [0.1, 0.9].
GrayImage synthetic_image(std::size_t n);

RestoreInstance gen_restore(const RestoreConfig& cfg);
double restore_objective(const RestoreInstance& inst, const DenseVector& x);

/// 10 log10(1 / MSE); +inf when the images are identical.
double psnr(const GrayImage& restored, const GrayImage& original);

struct RestoreResult {
  GrayImage restored;
  InitResult init;
  IterateTrace trace;
  double psnr_observed = 0.0;
  double psnr_restored = 0.0;
  double objective_observed = 0.0;
  double objective_restored = 0.0;
};

RestoreResult run_restore(const RestoreInstance& inst);

// ---------------------------------------------------------------------------
// Side-by-side run of the primal-dual kernel and its product-space form.

struct EquivConfig {
  std::size_t primal = 20;
  std::size_t dual = 8;
  std::int64_t iters = 200;
  std::uint64_t seed = 0;
  int seeds = 1;
  double t = 0.9;
  double kappa1 = 0.5;
  double kappa2 = 0.9;
  double alpha = 0.1;  // lambda is the midpoint of its interval
  double tolerance = 1e-9;

  void validate() const;
  nlohmann::json to_json() const;
};

struct EquivReport {
  std::vector<double> max_dev;  // per seed
  double worst = 0.0;
  bool pass = false;
  nlohmann::json to_json() const;
};

EquivReport run_equiv(const EquivConfig& cfg);

// ---------------------------------------------------------------------------
// Feasibility and iteration counts over a (alpha, lambda, t, kappa1, kappa2)
// grid with constant schedules.

struct SweepConfig {
  std::string problem = "qp";  // "qp" or "restore"
  std::vector<double> alpha{0.0, 0.05, 0.1, 0.2};
  std::vector<double> lambda{0.5, 1.0};
  std::vector<double> t{0.9};
  std::vector<double> kappa1{0.5, 0.85};
  std::vector<double> kappa2{0.99};
  bool run = true;
  int threads = 1;

  void validate() const;
  nlohmann::json to_json() const;
};

struct SweepCell {
  double alpha = 0.0, lambda = 0.0, t = 0.0, kappa1 = 0.0, kappa2 = 0.0;
  bool feasible = false;
  std::string violated;  // inequality name when infeasible
  double psi = 0.0;      // NaN when the step conditions already fail
  double alpha_bar = 0.0;
  bool ran = false;
  RunStatus status = RunStatus::max_iters;
  std::int64_t iterations = 0;
  double final_rel_err = 0.0;
};

std::vector<SweepCell> run_sweep(const SweepConfig& sweep, const QpConfig& qp,
                                 const RestoreConfig& restore);
std::string sweep_csv(const std::vector<SweepCell>& cells);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace nfb
