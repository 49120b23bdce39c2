#include "nfb/experiments/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nfb/errors.hpp"
#include "nfb/experiments/random_problem.hpp"
#include "nfb/linalg/random.hpp"

namespace nfb {
namespace {

constexpr int kNormIters = 5000;

double parse_double(std::string_view s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(s), &used);
    if (used != s.size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::logic_error&) {
    throw std::invalid_argument(std::string("bad number in ") + what + ": '" + std::string(s) + "'");
  }
}

// Steps from the alpha = 0 certificate.  A positive lambda_psi first reads psi
// off that certificate and then asks for lambda = lambda_psi * psi.
InitResult init_alpha_zero(const SplitProblem& P, double t, double kappa1, double kappa2,
                           double lambda, double lambda_psi) {
  const auto scenario = InitScenario::pick_alpha_then_lambda;
  if (lambda_psi > 0.0) lambda = lambda_psi * initialize_for(P, t, kappa1, kappa2, scenario, 0.0).psi;
  return initialize_for(P, t, kappa1, kappa2, scenario, 0.0, lambda);
}

}  // namespace

ScheduleSpec resolve_schedule(std::string_view name, double psi, double lambda) {
  if (name == "none") return ScheduleSpec::constant(0.0, 1.0);
  if (name.rfind("abar:", 0) == 0) {
    const double f = parse_double(name.substr(5), "abar schedule");
    if (!(f >= 0.0 && f < 1.0)) throw std::invalid_argument("abar factor must lie in [0,1[");
    ScheduleSpec s = ScheduleSpec::constant(f * alpha_bound(psi, lambda).value, lambda);
    s.name = std::string(name);
    return s;
  }
  return parse_schedule(name, lambda);
}

RunResult run_plain(const MethodKernel& kernel, const DenseVector& z0, std::int64_t max_iters,
                    double rel_tol) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  RunResult out;
  DenseVector z = z0;
  DenseVector prev = z0;
  for (std::int64_t n = 0; n < max_iters; ++n) {
    DenseVector next = kernel.warp_step(z, n).w;
    if (!next.all_finite()) {
      out.trace.status = RunStatus::diverged;
      break;
    }
    const double rel = relative_error(next, z);
    prev = std::move(z);
    z = std::move(next);
    out.trace.iterations = n + 1;
    out.trace.final_rel_err = rel;
    if (rel < rel_tol) {
      out.trace.status = RunStatus::converged;
      break;
    }
  }
  out.trace.wall_time_s = std::chrono::duration<double>(clock::now() - start).count();
  out.z = std::move(z);
  out.z_prev = std::move(prev);
  return out;
}

// ---------------------------------------------------------------------------

void QpConfig::validate() const {
  if (N < 1 || m < 1 || p < 1) throw std::invalid_argument("qp: N, m, p must be positive");
  if (m > N) throw std::invalid_argument("qp: need N >= m");
  if (!(t > 0.0 && t < 1.0) || !(kappa1 > 0.0 && kappa1 < 1.0)) {
    throw std::invalid_argument("qp: t and kappa1 must lie in ]0,1[");
  }
  if (b_mode != "planted" && b_mode != "normal") {
    throw std::invalid_argument("qp: b_mode must be 'planted' or 'normal'");
  }
  if (max_iters < 1 || !(rel_tol > 0.0)) throw std::invalid_argument("qp: bad stopping rule");
  if (!(lambda > 0.0) || !(lambda_psi >= 0.0 && lambda_psi < 1.0)) {
    throw std::invalid_argument("qp: need lambda > 0 and lambda_psi in [0,1[");
  }
}

nlohmann::json QpConfig::to_json() const {
  return {{"N", N},           {"m", m},
          {"p", p},           {"seed", seed},
          {"t", t},           {"kappa1", kappa1},
          {"method", method}, {"schedule", schedule},
          {"lambda", lambda}, {"lambda_psi", lambda_psi},
          {"max_iters", max_iters},
          {"rel_tol", rel_tol}, {"b_mode", b_mode},
          {"b_noise", b_noise}, {"require_unique", require_unique}};
}

namespace {

// Builds the splitting for the current (M, R, b).
void assemble_qp(QpInstance& inst) {
  const std::size_t N = inst.cfg.N;
  const std::size_t p = inst.cfg.p;
  auto M = std::make_shared<const DenseMatrix>(inst.M);
  auto R = std::make_shared<const DenseMatrix>(inst.R);
  auto b = std::make_shared<const DenseVector>(inst.b);

  SplitProblem P;
  P.primal_dim = N + p;
  P.resolvent_A.eval = [N, p](const DenseVector& z, double) {
    return concat(project_box(slice(z, 0, N), 0.0, 1.0), project_nonneg(slice(z, N, p)));
  };
  P.C = SmoothMapHandle{[M, b, N, p](const DenseVector& z) {
                          return concat(least_squares_gradient(*M, *b, slice(z, 0, N)),
                                        DenseVector(p));
                        },
                        1.0 / (inst.norm_M * inst.norm_M), SmoothRole::cocoercive};
  P.D = SmoothMapHandle{[R, N, p](const DenseVector& z) {
                          auto [top, bottom] = skew_constraint_map(*R, slice(z, 0, N), slice(z, N, p));
                          return concat(top, bottom);
                        },
                        inst.norm_R, SmoothRole::lipschitz};
  P.beta = P.C->constant;
  P.zeta = P.D->constant;
  P.validate();
  inst.problem = std::move(P);
}

double screen_objective(const QpInstance& inst) {
  const InitResult init = initialize_for(inst.problem, 0.9, 0.85, 0.0,
                                         InitScenario::pick_alpha_then_lambda, 0.0, 1.0);
  const RunResult r = run_plain(kernel_fbhf(inst.problem, init.tau), DenseVector(inst.problem.primal_dim),
                                100000, 1e-6);
  return qp_objective(inst, slice(r.z, 0, inst.cfg.N));
}

}  // namespace

QpInstance gen_qp(const QpConfig& cfg) {
  cfg.validate();
  QpInstance inst;
  inst.cfg = cfg;
  Rng rng(cfg.seed);
  inst.M = DenseMatrix(cfg.m, cfg.N, rng.normal_vector(cfg.m * cfg.N).values());
  inst.R = DenseMatrix(cfg.p, cfg.N, rng.normal_vector(cfg.p * cfg.N).values());
  inst.norm_M = op_norm_estimate(matrix_operator(inst.M), cfg.N, kNormIters, cfg.seed + 1);
  inst.norm_R = op_norm_estimate(matrix_operator(inst.R), cfg.N, kNormIters, cfg.seed + 2);
  inst.screened_objective = std::numeric_limits<double>::quiet_NaN();

  constexpr int kMaxRedraws = 20;
  for (;;) {
    if (cfg.b_mode == "planted") {
      const DenseVector x_star = rng.uniform_vector(cfg.N, 0.0, 1.0);
      inst.b = inst.M.multiply(x_star);
      axpy(cfg.b_noise, rng.normal_vector(cfg.m), inst.b);
    } else {
      inst.b = rng.normal_vector(cfg.m);
    }
    assemble_qp(inst);
    if (!cfg.require_unique) break;
    // Zero residual means b lies in M(P) and the minimisers form a face.
    inst.screened_objective = screen_objective(inst);
    if (inst.screened_objective > 1e-4 * 0.5 * dot(inst.b, inst.b)) break;
    if (++inst.b_redraws > kMaxRedraws) {
      throw std::runtime_error("qp: no b with a unique minimiser after " +
                               std::to_string(kMaxRedraws) + " redraws");
    }
  }
  return inst;
}

double qp_kkt_residual(const QpInstance& inst, const DenseVector& z) {
  const SplitProblem& P = inst.problem;
  DenseVector g = P.C->eval(z);
  axpy(1.0, P.D->eval(z), g);
  return max_abs_diff(z, P.resolvent_A(z - g, 1.0));
}

double qp_objective(const QpInstance& inst, const DenseVector& x) {
  const DenseVector r = inst.M.multiply(x) - inst.b;
  return 0.5 * dot(r, r);
}

QpRun run_qp(const QpInstance& inst, FejerMonitor* monitor) {
  const QpConfig& cfg = inst.cfg;
  QpRun run;
  run.seed = cfg.seed;
  // Steps come from the alpha = 0 certificate at the requested lambda; the
  // schedule itself is validated by the engine against the same psi.
  run.init = init_alpha_zero(inst.problem, cfg.t, cfg.kappa1, 0.0, cfg.lambda, cfg.lambda_psi);
  const MethodKernel kernel = make_kernel(cfg.method, inst.problem, run.init.tau, run.init.sigma);
  const DenseVector z0(kernel.dim);
  if (cfg.schedule == "none") {
    run.result = run_plain(kernel, z0, cfg.max_iters, cfg.rel_tol);
    return run;
  }
  RunConfig rc;
  rc.max_iters = cfg.max_iters;
  rc.rel_tol = cfg.rel_tol;
  rc.schedule = resolve_schedule(cfg.schedule, run.init.psi, run.init.lambda_chosen);
  rc.psi = run.init.psi;
  rc.monitor = monitor;
  run.result = run_nfb(kernel, z0, z0, rc);
  return run;
}

std::vector<BenchRow> run_qp_bench(const std::vector<QpConfig>& grid, int realizations,
                                   int threads) {
  if (grid.empty()) throw std::invalid_argument("qp bench: empty grid");
  if (realizations < 1) throw std::invalid_argument("qp bench: realizations must be positive");
  for (const auto& c : grid) c.validate();
  threads = std::max(1, threads);

  struct Job {
    std::size_t cell;
    int r;
  };
  struct Outcome {
    RunStatus status = RunStatus::max_iters;
    std::int64_t iterations = 0;
    double seconds = 0.0;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    for (int r = 0; r < realizations; ++r) jobs.push_back({c, r});
  }
  std::vector<Outcome> outcomes(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        QpConfig cfg = grid[jobs[j].cell];
        cfg.seed += static_cast<std::uint64_t>(jobs[j].r);
        const QpRun run = run_qp(gen_qp(cfg));
        outcomes[j] = {run.result.trace.status, run.result.trace.iterations,
                       run.result.trace.wall_time_s};
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<BenchRow> rows;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const QpConfig& cfg = grid[c];
    BenchRow row;
    row.method = cfg.method;
    row.schedule = cfg.schedule;
    if (cfg.lambda_psi > 0.0) {
      std::ostringstream lab;
      lab << "psi*" << cfg.lambda_psi;
      row.lambda = lab.str();
    } else {
      std::ostringstream lab;
      lab << cfg.lambda;
      row.lambda = lab.str();
    }
    row.t = cfg.t;
    row.N = cfg.N;
    row.m = cfg.m;
    row.p = cfg.p;
    double it_all = 0, t_all = 0, it_conv = 0, t_conv = 0;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      if (jobs[j].cell != c) continue;  // jobs are laid out in seed order
      const Outcome& o = outcomes[j];
      ++row.runs;
      row.iterations.push_back(o.iterations);
      it_all += static_cast<double>(o.iterations);
      t_all += o.seconds;
      if (o.status == RunStatus::converged) {
        ++row.converged;
        it_conv += static_cast<double>(o.iterations);
        t_conv += o.seconds;
      }
      if (o.status == RunStatus::diverged) ++row.diverged;
    }
    row.mean_iters_all = it_all / row.runs;
    row.mean_time_all = t_all / row.runs;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.mean_iters_converged = row.converged > 0 ? it_conv / row.converged : nan;
    row.mean_time_converged = row.converged > 0 ? t_conv / row.converged : nan;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os.precision(10);
  os << "algorithm,alpha_n,lambda,t,N,m,p,runs,converged,failures,IN,T,IN_converged,T_converged\n";
  for (const auto& r : rows) {
    os << r.method << ',' << r.schedule << ',' << r.lambda << ',' << r.t << ',' << r.N << ','
       << r.m << ',' << r.p << ',' << r.runs << ',' << r.converged << ','
       << (r.runs - r.converged) << ',' << r.mean_iters_all << ',' << r.mean_time_all << ','
       << r.mean_iters_converged << ',' << r.mean_time_converged << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

void RestoreConfig::validate() const {
  if (N < 8 || (N & (N - 1)) != 0) throw std::invalid_argument("restore: N must be a power of 2, >= 8");
  make_blur_kernel(kernel);
  if (!(noise_std >= 0.0) || !(mu1 >= 0.0) || !(mu2 >= 0.0) || !(delta > 0.0)) {
    throw std::invalid_argument("restore: noise_std, mu1, mu2 >= 0 and delta > 0");
  }
  if (haar_level < 1) throw std::invalid_argument("restore: haar_level must be positive");
  if (max_iters < 1 || !(rel_tol > 0.0)) throw std::invalid_argument("restore: bad stopping rule");
  if (!(lambda > 0.0) || !(lambda_psi >= 0.0 && lambda_psi < 1.0)) {
    throw std::invalid_argument("restore: need lambda > 0 and lambda_psi in [0,1[");
  }
}

nlohmann::json RestoreConfig::to_json() const {
  return {{"image_path", image_path}, {"N", N},
          {"kernel", kernel},         {"noise_std", noise_std},
          {"mu1", mu1},               {"mu2", mu2},
          {"delta", delta},           {"seed", seed},
          {"method", method},         {"schedule", schedule},
          {"lambda", lambda},         {"lambda_psi", lambda_psi},
          {"t", t},
          {"kappa1", kappa1},         {"kappa2", kappa2},
          {"max_iters", max_iters},   {"rel_tol", rel_tol},
          {"haar_level", haar_level}};
}

DenseMatrix make_blur_kernel(std::string_view name) {
  if (name == "avg3") return averaging_kernel(3);
  if (name == "avg9") return averaging_kernel(9);
  if (name == "gauss3") return gaussian_kernel(3, 0.5);
  if (name == "identity") return averaging_kernel(1);
  throw std::invalid_argument("unknown blur kernel '" + std::string(name) + "'");
}

GrayImage synthetic_image(std::size_t n) {
  GrayImage img(n, n, 0.2);
  const double s = static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double y = (r + 0.5) / s;
      const double x = (c + 0.5) / s;
      if (x > 0.1 && x < 0.45 && y > 0.15 && y < 0.6) img(r, c) = 0.8;
      const double dx = x - 0.68, dy = y - 0.62;
      if (dx * dx + dy * dy < 0.2 * 0.2) img(r, c) = 0.55;
      if (y > 0.75 && x < 0.5 && x > y - 0.7) img(r, c) = 0.9;
      if (x > 0.6 && y < 0.3) img(r, c) = 0.1 + 0.4 * x;  // ramp
    }
  }
  return img;
}

RestoreInstance gen_restore(const RestoreConfig& cfg) {
  cfg.validate();
  RestoreInstance inst;
  inst.cfg = cfg;
  if (cfg.image_path.empty()) {
    inst.original = synthetic_image(cfg.N);
  } else {
    inst.original = read_pgm(cfg.image_path);
    if (inst.original.width() != inst.original.height() || inst.original.width() % 8 != 0) {
      throw DimensionError("restore: image must be square with side a multiple of 8");
    }
    inst.cfg.N = inst.original.width();
  }
  const std::size_t N = inst.cfg.N;
  inst.blur_kernel = make_blur_kernel(cfg.kernel);
  inst.T = blur_operator(N, N, inst.blur_kernel);
  inst.W = haar_operator(N, N, cfg.haar_level);
  inst.grad = gradient_operator(N, N);

  Rng rng(cfg.seed);
  DenseVector z = inst.T(inst.original.to_vector());
  axpy(cfg.noise_std, rng.normal_vector(N * N), z);
  inst.observed = GrayImage::from_vector(N, N, z);

  auto T = std::make_shared<const LinearOperator>(inst.T);
  auto W = std::make_shared<const LinearOperator>(inst.W);
  auto obs = std::make_shared<const DenseVector>(z);
  const double mu1 = cfg.mu1, mu2 = cfg.mu2, delta = cfg.delta;

  SplitProblem& P = inst.problem;
  P.primal_dim = N * N;
  P.dual_dim = 2 * N * N;
  P.resolvent_A = box_resolvent(0.0, 1.0);
  const ResolventHandle l1 = l1_resolvent(mu1);
  P.resolvent_Binv = ResolventHandle{
      [l1](const DenseVector& u, double sigma) { return resolvent_of_inverse(l1, u, sigma); }};
  P.L = inst.grad;
  P.norm_L = *inst.grad.norm_bound;
  // |T| = 1: the kernels are nonnegative, sum to one and the padding is
  // symmetric, and constants are preserved.
  P.C = SmoothMapHandle{[T, obs](const DenseVector& x) { return T->adjoint((*T)(x) - *obs); }, 1.0,
                        SmoothRole::cocoercive};
  P.D = SmoothMapHandle{[W, mu2, delta](const DenseVector& x) {
                          return mu2 * W->adjoint(huber_gradient((*W)(x), delta));
                        },
                        mu2 / delta, SmoothRole::lipschitz};
  P.beta = 1.0;
  P.zeta = mu2 / delta;
  if (mu2 == 0.0) {
    P.D.reset();
    P.zeta = 0.0;
  }
  P.validate();
  return inst;
}

double restore_objective(const RestoreInstance& inst, const DenseVector& x) {
  const DenseVector r = inst.T(x) - inst.observed.to_vector();
  double l1 = 0.0;
  for (double g : inst.grad(x)) l1 += std::abs(g);
  return 0.5 * dot(r, r) + inst.cfg.mu1 * l1 + inst.cfg.mu2 * huber_value(inst.W(x), inst.cfg.delta);
}

double psnr(const GrayImage& restored, const GrayImage& original) {
  if (!restored.same_shape(original)) throw DimensionError("psnr: shape mismatch");
  if (original.size() == 0) throw DimensionError("psnr: empty image");
  double sum = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    const double d = restored.pixels()[i] - original.pixels()[i];
    sum += d * d;
  }
  if (sum == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(original.size()) / sum);
}

RestoreResult run_restore(const RestoreInstance& inst) {
  const RestoreConfig& cfg = inst.cfg;
  const std::size_t N = cfg.N;
  RestoreResult out;
  out.init = init_alpha_zero(inst.problem, cfg.t, cfg.kappa1, cfg.kappa2, cfg.lambda,
                             cfg.lambda_psi);
  const MethodKernel kernel = make_kernel(cfg.method, inst.problem, out.init.tau, out.init.sigma);

  DenseVector z0 = inst.observed.to_vector();
  if (is_primal_dual(cfg.method)) z0 = concat(z0, DenseVector(inst.problem.dual_dim));

  RunResult res;
  if (cfg.schedule == "none") {
    res = run_plain(kernel, z0, cfg.max_iters, cfg.rel_tol);
  } else {
    RunConfig rc;
    rc.max_iters = cfg.max_iters;
    rc.rel_tol = cfg.rel_tol;
    rc.schedule = resolve_schedule(cfg.schedule, out.init.psi, out.init.lambda_chosen);
    rc.psi = out.init.psi;
    res = run_nfb(kernel, z0, z0, rc);
  }
  const DenseVector x = project_box(slice(res.z, 0, N * N), 0.0, 1.0);
  out.restored = GrayImage::from_vector(N, N, x);
  out.trace = std::move(res.trace);
  out.psnr_observed = psnr(inst.observed, inst.original);
  out.psnr_restored = psnr(out.restored, inst.original);
  out.objective_observed = restore_objective(inst, project_box(inst.observed.to_vector(), 0.0, 1.0));
  out.objective_restored = restore_objective(inst, x);
  return out;
}

}  // namespace nfb

namespace nfb {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void EquivConfig::validate() const {
  if (primal < 2 || dual < 1) throw std::invalid_argument("equiv: need primal >= 2, dual >= 1");
  if (iters < 1 || seeds < 1) throw std::invalid_argument("equiv: iters and seeds must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("equiv: tolerance must be positive");
}

nlohmann::json EquivConfig::to_json() const {
  return {{"primal", primal}, {"dual", dual},     {"iters", iters},   {"seed", seed},
          {"seeds", seeds},   {"t", t},           {"kappa1", kappa1}, {"kappa2", kappa2},
          {"alpha", alpha},   {"tolerance", tolerance}};
}

nlohmann::json EquivReport::to_json() const {
  return {{"max_dev", max_dev}, {"worst", worst}, {"pass", pass}};
}

EquivReport run_equiv(const EquivConfig& cfg) {
  cfg.validate();
  EquivReport rep;
  for (int k = 0; k < cfg.seeds; ++k) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(k);
    const SplitProblem P = random_problem(seed, {cfg.primal, cfg.dual});
    const InitResult init = initialize_for(P, cfg.t, cfg.kappa1, cfg.kappa2,
                                           InitScenario::pick_alpha_then_lambda, cfg.alpha);
    Rng rng(seed + 77);
    const DenseVector z0 = rng.normal_vector(cfg.primal + cfg.dual);

    auto trajectory = [&](const MethodKernel& kernel) {
      RunConfig rc;
      rc.max_iters = cfg.iters;
      rc.rel_tol = 1e-300;  // run the full horizon
      rc.schedule = ScheduleSpec::constant(init.alpha_chosen, init.lambda_chosen);
      rc.psi = init.psi;
      std::vector<DenseVector> seq;
      rc.on_iterate = [&](std::int64_t, const DenseVector& z) { seq.push_back(z); };
      run_nfb(kernel, z0, z0, rc);
      return seq;
    };
    const auto a = trajectory(kernel_fpdhf(P, init.tau, init.sigma));
    const auto b = trajectory(kernel_nfb_product(P, init.tau, init.sigma));
    double worst = a.size() == b.size() ? 0.0 : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
      worst = std::max(worst, max_abs_diff(a[i], b[i]));
    }
    rep.max_dev.push_back(worst);
    rep.worst = std::max(rep.worst, worst);
  }
  rep.pass = rep.worst < cfg.tolerance;
  return rep;
}

void SweepConfig::validate() const {
  if (problem != "qp" && problem != "restore") {
    throw std::invalid_argument("sweep: problem must be 'qp' or 'restore'");
  }
  if (alpha.empty() || lambda.empty() || t.empty() || kappa1.empty() || kappa2.empty()) {
    throw std::invalid_argument("sweep: every grid axis needs at least one value");
  }
}

nlohmann::json SweepConfig::to_json() const {
  return {{"problem", problem}, {"alpha", alpha},   {"lambda", lambda}, {"t", t},
          {"kappa1", kappa1},   {"kappa2", kappa2}, {"run", run},       {"threads", threads}};
}

std::vector<SweepCell> run_sweep(const SweepConfig& sweep, const QpConfig& qp,
                                 const RestoreConfig& restore) {
  sweep.validate();
  const bool is_qp = sweep.problem == "qp";
  std::optional<QpInstance> qinst;
  std::optional<RestoreInstance> rinst;
  if (is_qp) {
    qinst = gen_qp(qp);
  } else {
    rinst = gen_restore(restore);
  }
  const SplitProblem& P = is_qp ? qinst->problem : rinst->problem;

  std::vector<SweepCell> cells;
  for (double a : sweep.alpha)
    for (double l : sweep.lambda)
      for (double t : sweep.t)
        for (double k1 : sweep.kappa1)
          for (double k2 : sweep.kappa2) {
            SweepCell c;
            c.alpha = a;
            c.lambda = l;
            c.t = t;
            c.kappa1 = k1;
            c.kappa2 = k2;
            cells.push_back(c);
          }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(cells.size());
  auto worker = [&] {
    for (std::size_t j = next++; j < cells.size(); j = next++) {
      SweepCell& c = cells[j];
      try {
        try {
          const InitResult base = initialize_for(P, c.t, c.kappa1, c.kappa2,
                                                 InitScenario::pick_alpha_then_lambda, 0.0);
          c.psi = base.psi;
          c.alpha_bar = alpha_bound(base.psi, c.lambda).value;
        } catch (const FeasibilityError&) {
          c.psi = c.alpha_bar = std::numeric_limits<double>::quiet_NaN();
        }
        try {
          initialize_for(P, c.t, c.kappa1, c.kappa2, InitScenario::pick_alpha_then_lambda,
                         c.alpha, c.lambda);
          c.feasible = true;
        } catch (const FeasibilityError& e) {
          c.violated = e.inequality();
        }
        if (!c.feasible || !sweep.run) continue;
        const std::string sched = "const:" + format_double(c.alpha);
        IterateTrace trace;
        if (is_qp) {
          QpInstance inst = *qinst;
          inst.cfg.schedule = sched;
          inst.cfg.lambda = c.lambda;
          inst.cfg.lambda_psi = 0.0;
          inst.cfg.t = c.t;
          inst.cfg.kappa1 = c.kappa1;
          trace = run_qp(inst).result.trace;
        } else {
          RestoreInstance inst = *rinst;
          inst.cfg.schedule = sched;
          inst.cfg.lambda = c.lambda;
          inst.cfg.lambda_psi = 0.0;
          inst.cfg.t = c.t;
          inst.cfg.kappa1 = c.kappa1;
          inst.cfg.kappa2 = c.kappa2;
          trace = run_restore(inst).trace;
        }
        c.ran = true;
        c.status = trace.status;
        c.iterations = trace.iterations;
        c.final_rel_err = trace.final_rel_err;
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < std::max(1, sweep.threads); ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
  std::ostringstream os;
  os << "alpha,lambda,t,kappa1,kappa2,feasible,violated,psi,alpha_bar,status,iterations,final_rel_err\n";
  for (const auto& c : cells) {
    os << format_double(c.alpha) << ',' << format_double(c.lambda) << ',' << format_double(c.t)
       << ',' << format_double(c.kappa1) << ',' << format_double(c.kappa2) << ','
       << (c.feasible ? 1 : 0) << ',' << c.violated << ',' << format_double(c.psi) << ','
       << format_double(c.alpha_bar) << ',' << (c.ran ? to_string(c.status) : "skipped") << ','
       << c.iterations << ',' << format_double(c.final_rel_err) << '\n';
  }
  return os.str();
}

}  // namespace nfb
