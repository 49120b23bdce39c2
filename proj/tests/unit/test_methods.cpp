#include <cmath>
#include <limits>

#include "doctest.h"
#include "nfb/errors.hpp"
#include "nfb/methods/methods.hpp"
#include "random_problems.hpp"
#include "test_support.hpp"

using namespace nfb;
using testing_support::Part;
using testing_support::ProblemShape;
using testing_support::random_problem;
using testing_support::random_vector;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<DenseVector> sequence(const MethodKernel& k, const DenseVector& z0, std::int64_t iters,
                                  const ScheduleSpec& sched) {
  RunConfig rc;
  rc.max_iters = iters;
  rc.rel_tol = 1e-300;
  rc.skip_validation = true;
  rc.schedule = sched;
  std::vector<DenseVector> out;
  rc.on_iterate = [&](std::int64_t, const DenseVector& z) { out.push_back(z); };
  run_nfb(k, z0, z0, rc);
  return out;
}

double max_dev(const std::vector<DenseVector>& a, const std::vector<DenseVector>& b,
               std::size_t offset = 0, std::size_t count = 0) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t n = count == 0 ? a[i].size() : count;
    worst = std::max(worst, max_abs_diff(slice(a[i], offset, n), slice(b[i], 0, n)));
  }
  return worst;
}

}  // namespace

TEST_CASE("initialization closed forms at beta = zeta = 1") {
  const InitResult r = initialize_fpdhf(1.0, 1.0, 1.0, 0.9, 0.5, 0.9,
                                        InitScenario::pick_alpha_then_lambda, 0.0);
  CHECK(r.eps_bar == doctest::Approx(0.3903882032022076).epsilon(1e-14));
  CHECK(r.chi == doctest::Approx(0.7807764064044151).epsilon(1e-14));
  CHECK(r.tau == doctest::Approx(0.5 * 0.7807764064044151).epsilon(1e-14));
  CHECK(r.epsilon == doctest::Approx(0.9 * 0.3903882032022076).epsilon(1e-14));
  CHECK(std::sqrt(1.0 - r.eps_bar) / 1.0 == doctest::Approx(2.0 * r.eps_bar).epsilon(1e-14));
  CHECK(r.certificate.feasible());
  CHECK(r.lambda_chosen == doctest::Approx(0.5 * r.psi));
}

TEST_CASE("initialization identity on random (beta, zeta)") {
  Rng rng(17);
  for (int k = 0; k < 1000; ++k) {
    const double beta = std::pow(10.0, -2.0 + 4.0 * rng.uniform());
    const double zeta = std::pow(10.0, -2.0 + 4.0 * rng.uniform());
    const InitResult r = initialize_fpdhf(beta, zeta, 1.0, 0.9, 0.5, 0.9,
                                          InitScenario::pick_alpha_then_lambda, 0.0);
    const double lhs = std::sqrt(r.one_minus_eps_bar) / zeta;
    CHECK(std::abs(lhs - 2.0 * beta * r.eps_bar) <= 1e-12 * (2.0 * beta * r.eps_bar));
    CHECK(r.eps_bar + r.one_minus_eps_bar == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.chi == doctest::Approx(2.0 * beta * r.eps_bar).epsilon(1e-14));
    CHECK(r.certificate.feasible());
  }
}

TEST_CASE("degenerate initialization regimes") {
  const InitResult cv = initialize_fpdhf(1.0, 0.0, 2.0, 0.9, 0.5, 0.9,
                                         InitScenario::pick_alpha_then_lambda, 0.0);
  CHECK(cv.eps_bar == 1.0);
  CHECK(cv.chi == 2.0);
  CHECK(cv.sigma * cv.tau * 4.0 + cv.tau / 2.0 < 1.0);

  const InitResult fbf = initialize_fpdhf(kInf, 4.0, 1.0, 0.9, 0.5, 0.9,
                                          InitScenario::pick_alpha_then_lambda, 0.0);
  CHECK(fbf.chi == 0.25);
  CHECK(fbf.tau < 0.25);
  CHECK(fbf.epsilon == doctest::Approx(0.9e-6));
  CHECK(fbf.certificate.feasible());

  const InitResult cp = initialize_fpdhf(kInf, 0.0, 2.0, 0.9, 0.5, 0.9,
                                         InitScenario::pick_alpha_then_lambda, 0.0);
  CHECK(cp.chi == 0.5);
  CHECK(cp.sigma * cp.tau * 4.0 == doctest::Approx(0.9));

  const InitResult primal = initialize_fpdhf(2.0, 1.0, 0.0, 0.9, 0.9, 0.0,
                                             InitScenario::pick_alpha_then_lambda, 0.0);
  CHECK(primal.sigma == 0.0);
  CHECK(primal.certificate.feasible());
}

TEST_CASE("initialization errors name the violated bound") {
  try {
    initialize_fpdhf(1.0, 1.0, 1.0, 0.9, 0.5, 0.9, InitScenario::pick_lambda_then_alpha, 5.0);
    FAIL("expected FeasibilityError");
  } catch (const FeasibilityError& e) {
    CHECK(e.inequality() == "lambda_interval");
  }
  try {
    initialize_fpdhf(1.0, 1.0, 1.0, 0.5, 0.6, 0.9, InitScenario::pick_alpha_then_lambda, 0.0);
    FAIL("expected FeasibilityError");
  } catch (const FeasibilityError& e) {
    CHECK(e.inequality() == "cocoercive_step");
  }
  try {
    initialize_fpdhf(1.0, 1.0, 1.0, 0.9, 0.5, 0.9, InitScenario::pick_alpha_then_lambda, 0.9, NuMode::general, 1.0);
    FAIL("expected FeasibilityError");
  } catch (const FeasibilityError& e) {
    CHECK(e.inequality() == "lambda_interval");
  }
  CHECK_THROWS_AS(initialize_fpdhf(1.0, 1.0, 1.0, 1.0, 0.5, 0.9,
                                   InitScenario::pick_alpha_then_lambda, 0.0),
                  std::invalid_argument);
}

TEST_CASE("scenario two picks alpha at half the bound") {
  const InitResult r = initialize_fpdhf(1.0, 0.5, 1.0, 0.8, 0.4, 0.5,
                                        InitScenario::pick_lambda_then_alpha, 0.9);
  CHECK(r.lambda_chosen == 0.9);
  CHECK(r.alpha_chosen == doctest::Approx(0.5 * alpha_bound(r.psi, 0.9).value));
  CHECK(r.certificate.feasible());
  const auto j = r.to_json();
  CHECK(j.at("scenario") == "lambda_then_alpha");
}

TEST_CASE("initialized parameters always certify") {
  Rng rng(4);
  for (int k = 0; k < 300; ++k) {
    const double beta = std::pow(10.0, -1.0 + 2.0 * rng.uniform());
    const double zeta = std::pow(10.0, -1.0 + 2.0 * rng.uniform());
    const double normL = 0.1 + 3.0 * rng.uniform();
    const double t = 0.1 + 0.89 * rng.uniform();
    const double k1 = t * (0.05 + 0.9 * rng.uniform());
    const double k2 = 0.05 + 0.9 * rng.uniform();
    for (NuMode mode : {NuMode::monotone, NuMode::general}) {
      const InitResult r = initialize_fpdhf(beta, zeta, normL, t, k1, k2,
                                            InitScenario::pick_alpha_then_lambda, 0.0, mode);
      CHECK(r.certificate.feasible());
      CHECK(r.steps.coupling > 0.0);
      CHECK(r.tau <= 2.0 * r.steps.beta_tilde * r.epsilon);
    }
  }
}

TEST_CASE("product-space operators: M = S T and S is positive") {
  const SplitProblem p = random_problem(3);
  const double tau = 0.3, sigma = 0.4;
  REQUIRE(sigma * tau * p.norm_L * p.norm_L < 1.0);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const DenseVector z = random_vector(28, 1000 + s);
    const DenseVector lhs = product_M(p, tau, sigma, z);
    const DenseVector rhs = product_S(p, tau, sigma, product_T(p, tau, z));
    CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * std::max(1.0, max_abs(lhs)));
    // The flat metric agrees with <z, S z>.
    CHECK(product_metric(*p.L, tau, sigma, z, z, 20) ==
          doctest::Approx(dot(z, product_S(p, tau, sigma, z))).epsilon(1e-12));
  }
  int positive = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const DenseVector z = random_vector(28, 50000 + s);
    positive += product_metric(*p.L, tau, sigma, z, z, 20) > 0.0;
  }
  CHECK(positive == 10000);
}

TEST_CASE("fpdhf matches the literal warped resolvent over 200 iterations") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SplitProblem p = random_problem(seed);
    const InitResult init = initialize_for(p, 0.9, 0.5, 0.9, InitScenario::pick_alpha_then_lambda, 0.1);
    const ScheduleSpec sched = ScheduleSpec::constant(init.alpha_chosen, init.lambda_chosen);
    const DenseVector z0 = random_vector(28, seed + 77);
    const auto a = sequence(kernel_fpdhf(p, init.tau, init.sigma), z0, 200, sched);
    const auto b = sequence(kernel_nfb_product(p, init.tau, init.sigma), z0, 200, sched);
    CHECK(max_dev(a, b) < 1e-9);
  }
}

TEST_CASE("solutions are fixed points of the warped step") {
  // A = box, C = x - c with c interior, B = 0: the solution is (c, 0).
  SplitProblem p;
  p.primal_dim = 3;
  p.dual_dim = 2;
  p.resolvent_A = box_resolvent(-1.0, 1.0);
  const DenseVector c{0.25, -0.5, 0.75};
  p.C = SmoothMapHandle{[c](const DenseVector& x) { return x - c; }, 1.0, SmoothRole::cocoercive};
  p.beta = 1.0;
  p.L = matrix_operator(DenseMatrix(2, 3, std::vector<double>{1, 2, 3, -1, 0, 1}));
  p.norm_L = 3.8;
  p.resolvent_Binv = zero_inverse_resolvent();
  const DenseVector z = concat(c, DenseVector(2));
  const WarpResult w = kernel_fpdhf(p, 0.5, 0.05).warp_step(z, 0);
  CHECK(w.x == z);
  CHECK(w.w == z);
}

TEST_CASE("specialization lattice: zero-valued operators reproduce the specialised kernels") {
  const double tau = 0.05, sigma = 0.5;
  const ScheduleSpec sched = parse_schedule("dec2", 0.8);
  for (std::uint64_t seed = 100; seed < 105; ++seed) {
    const DenseVector z0 = random_vector(28, seed);
    const DenseVector x0 = slice(z0, 0, 20);

    const auto cv = sequence(kernel_condat_vu(random_problem(seed, {20, 8, Part::present, Part::absent}), tau, sigma), z0, 100, sched);
    const auto cv_ref = sequence(kernel_fpdhf(random_problem(seed, {20, 8, Part::present, Part::zero}), tau, sigma), z0, 100, sched);
    CHECK(max_dev(cv, cv_ref) == 0.0);

    const auto cp = sequence(kernel_chambolle_pock(random_problem(seed, {20, 8, Part::absent, Part::absent}), tau, sigma), z0, 100, sched);
    const auto cp_ref = sequence(kernel_fpdhf(random_problem(seed, {20, 8, Part::zero, Part::zero}), tau, sigma), z0, 100, sched);
    CHECK(max_dev(cp, cp_ref) == 0.0);

    const auto cpf = sequence(kernel_cp_fbf(random_problem(seed, {20, 8, Part::absent, Part::present}), tau, sigma), z0, 100, sched);
    const auto cpf_ref = sequence(kernel_fpdhf(random_problem(seed, {20, 8, Part::zero, Part::present}), tau, sigma), z0, 100, sched);
    CHECK(max_dev(cpf, cpf_ref) == 0.0);

    // L = 0 and B^{-1} resolvent 0: the primal block evolves on its own.
    const auto fbhf = sequence(kernel_fbhf(random_problem(seed, {20, 8, Part::present, Part::present, Part::absent}), tau), x0, 100, sched);
    const auto fbhf_ref = sequence(kernel_fpdhf(random_problem(seed, {20, 8, Part::present, Part::present, Part::zero}), tau, sigma), z0, 100, sched);
    CHECK(max_dev(fbhf_ref, fbhf, 0, 20) == 0.0);

    const auto fbf = sequence(kernel_fbf(random_problem(seed, {20, 8, Part::absent, Part::present, Part::absent}), tau), x0, 100, sched);
    const auto fbf_ref = sequence(kernel_fbhf(random_problem(seed, {20, 8, Part::zero, Part::present, Part::absent}), tau), x0, 100, sched);
    CHECK(max_dev(fbf, fbf_ref) == 0.0);

    const SplitProblem fb_problem = random_problem(seed, {20, 8, Part::present, Part::absent, Part::absent});
    const auto fb = sequence(kernel_fb(fb_problem, 1.5 * fb_problem.beta), x0, 100, sched);
    const auto fb_ref = sequence(kernel_fbhf(random_problem(seed, {20, 8, Part::present, Part::zero, Part::absent}), 1.5 * fb_problem.beta), x0, 100, sched);
    CHECK(max_dev(fb, fb_ref) == 0.0);
  }
}

TEST_CASE("specialisations refuse forbidden operators") {
  const SplitProblem full = random_problem(1);
  CHECK_THROWS_AS(kernel_condat_vu(full, 0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(kernel_chambolle_pock(full, 0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(kernel_cp_fbf(full, 0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(kernel_fbhf(full, 0.1), std::invalid_argument);
  const SplitProblem primal = random_problem(1, {20, 8, Part::present, Part::present, Part::absent});
  CHECK_THROWS_AS(kernel_fpdhf(primal, 0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(kernel_nfb_product(primal, 0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(kernel_fb(primal, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(kernel_fbf(primal, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(make_kernel("douglas-rachford", primal, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("step-size conditions are enforced") {
  const SplitProblem fb_problem = random_problem(2, {20, 8, Part::present, Part::absent, Part::absent});
  try {
    kernel_fb(fb_problem, 2.0 * fb_problem.beta);
    FAIL("expected FeasibilityError");
  } catch (const FeasibilityError& e) {
    CHECK(e.inequality() == "fb_step");
  }
  const SplitProblem fbhf_problem = random_problem(2, {20, 8, Part::present, Part::present, Part::absent});
  const double chi = 4.0 * fbhf_problem.beta /
                     (1.0 + std::sqrt(1.0 + 16.0 * fbhf_problem.beta * fbhf_problem.beta *
                                                fbhf_problem.zeta * fbhf_problem.zeta));
  CHECK_NOTHROW(kernel_fbhf(fbhf_problem, 0.999 * chi));
  CHECK_THROWS_AS(kernel_fbhf(fbhf_problem, chi), FeasibilityError);
  const SplitProblem cp = random_problem(2, {20, 8, Part::absent, Part::absent});
  CHECK_THROWS_AS(kernel_chambolle_pock(cp, 1.0, 1.1 / (cp.norm_L * cp.norm_L)), FeasibilityError);
  const SplitProblem cv = random_problem(2, {20, 8, Part::present, Part::absent});
  CHECK_THROWS_AS(kernel_condat_vu(cv, 1.9 * cv.beta, 0.1 / (1.9 * cv.beta * cv.norm_L * cv.norm_L)), FeasibilityError);
}

TEST_CASE("projected gradient onto [0,1] with the minimiser outside") {
  SplitProblem p;
  p.primal_dim = 1;
  p.resolvent_A = box_resolvent(0.0, 1.0);
  p.C = SmoothMapHandle{[](const DenseVector& x) { return DenseVector{x[0] - 2.0}; }, 1.0,
                        SmoothRole::cocoercive};
  p.beta = 1.0;
  RunConfig rc;
  rc.psi = 1.5;
  rc.rel_tol = 1e-14;
  rc.max_iters = 1000;
  const RunResult r = run_nfb(kernel_fb(p, 1.0), DenseVector{0.3}, DenseVector{0.3}, rc);
  CHECK(r.trace.status == RunStatus::converged);
  CHECK(r.z[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fb without C is the proximal point algorithm") {
  SplitProblem p;
  p.primal_dim = 4;
  p.resolvent_A = l1_resolvent(1.0);
  const MethodKernel k = kernel_fb(p, 0.5);
  const DenseVector z{3.0, -0.2, 0.4, -2.0};
  CHECK(k.warp_step(z, 0).x == soft_threshold(z, 0.5));
  RunConfig rc;
  rc.psi = 2.0 - 1e-9;
  rc.rel_tol = 1e-14;
  const RunResult r = run_nfb(k, z, z, rc);
  CHECK(max_abs(r.z) == 0.0);
}

TEST_CASE("inertial fb converges on a strongly convex quadratic when 1 - 3a - g(1-a)^2/(2b) > 0") {
  const SplitProblem p = random_problem(9, {20, 8, Part::present, Part::absent, Part::absent});
  // Strongly convex variant: add the identity to the least-squares gradient.
  SplitProblem q = p;
  const auto inner = p.C->eval;
  const double beta = 1.0 / (1.0 / p.beta + 1.0);
  q.C = SmoothMapHandle{[inner](const DenseVector& x) { return inner(x) + x; }, beta,
                        SmoothRole::cocoercive};
  q.beta = beta;
  q.resolvent_A = identity_resolvent();
  const double alpha = 0.2;
  const double gamma = 0.5 * 2.0 * beta * (1.0 - 3.0 * alpha) / ((1 - alpha) * (1 - alpha));
  REQUIRE(1.0 - 3.0 * alpha - gamma * (1 - alpha) * (1 - alpha) / (2.0 * beta) > 0.0);
  RunConfig rc;
  rc.psi = 2.0 - gamma / (2.0 * beta);
  rc.schedule = ScheduleSpec::constant(alpha, 1.0);
  rc.rel_tol = 1e-12;
  rc.max_iters = 100000;
  const RunResult r = run_nfb(kernel_fb(q, gamma), DenseVector(20), DenseVector(20), rc);
  CHECK(r.trace.status == RunStatus::converged);
  CHECK(max_abs(q.C->eval(r.z)) < 1e-8);
}

TEST_CASE("chambolle-pock limit satisfies the optimality inclusion") {
  // min_{x in [0,1]} |x|: x = 0 and the dual u must lie in [0,1].
  SplitProblem p;
  p.primal_dim = 1;
  p.dual_dim = 1;
  p.resolvent_A = box_resolvent(0.0, 1.0);
  p.L = identity_operator(1);
  p.norm_L = 1.0;
  p.resolvent_Binv = linf_ball_resolvent(1.0);
  const InitResult init = initialize_for(p, 0.9, 0.5, 0.9, InitScenario::pick_alpha_then_lambda, 0.2);
  RunConfig rc;
  rc.psi = init.psi;
  rc.schedule = ScheduleSpec::constant(init.alpha_chosen, init.lambda_chosen);
  rc.rel_tol = 1e-14;
  rc.max_iters = 100000;
  const DenseVector z0{0.8, -0.5};
  const RunResult r = run_nfb(kernel_chambolle_pock(p, init.tau, init.sigma), z0, z0, rc);
  CHECK(r.trace.status == RunStatus::converged);
  const double x = r.z[0], u = r.z[1];
  CHECK(std::abs(x) < 1e-10);
  // u in d|.|(0) = [-1,1] and -u in N_[0,1](0) = ]-inf, 0].
  CHECK(u >= -1e-10);
  CHECK(u <= 1.0 + 1e-10);
}

TEST_CASE("cp-fbf initialization without cocoercive part uses chi = 1/zeta") {
  const SplitProblem p = random_problem(12, {20, 8, Part::absent, Part::present});
  const InitResult init = initialize_for(p, 0.9, 0.5, 0.9, InitScenario::pick_alpha_then_lambda, 0.0);
  CHECK(init.chi == doctest::Approx(1.0 / p.zeta).epsilon(1e-15));
  CHECK_NOTHROW(kernel_cp_fbf(p, init.tau, init.sigma));
  CHECK(default_nu_mode(p) == NuMode::general);
  SplitProblem mono = p;
  mono.coupling_monotone = true;
  CHECK(default_nu_mode(mono) == NuMode::monotone);
}

TEST_CASE("name dispatch") {
  const SplitProblem pd = random_problem(4);
  for (const char* name : {"fpdhf", "fpdhf-oracle"}) {
    const MethodKernel k = make_kernel(name, pd, 0.1, 0.1);
    CHECK(k.name == name);
    CHECK(k.dim == 28);
    CHECK(is_primal_dual(name));
  }
  const SplitProblem primal = random_problem(4, {20, 8, Part::present, Part::present, Part::absent});
  CHECK(make_kernel("fbhf", primal, 0.01, 0.0).dim == 20);
  CHECK_FALSE(is_primal_dual("fbhf"));
}
