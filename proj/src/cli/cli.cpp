#include "nfb/cli/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "nfb/errors.hpp"
#include "nfb/experiments/experiments.hpp"
#include "nfb/simd/kernels.hpp"

namespace nfb::cli {
namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string config_hash(const json& config) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(config.dump());
  return os.str();
}

json default_config() {
  QpConfig qp;
  json q = qp.to_json();
  q["realizations"] = 5;
  q["threads"] = 1;
  // Default grid: plain FBHF, constant inertia at three step sizes, the three
  // decreasing families, then two relaxed-inertial rows.
  auto row = [](const char* label, const char* sched, double t, double k1) {
    return json{{"label", label}, {"schedule", sched}, {"t", t}, {"kappa1", k1}};
  };
  q["grid"] = json::array({
      row("FBHF", "const:0", 0.999, 0.998),
      row("FBHFI", "abar:0.9999", 0.8, 0.799),
      row("FBHFI", "abar:0.9999", 0.9, 0.899),
      row("FBHFI", "abar:0.9999", 0.999, 0.998),
      row("FBHFID", "dec1", 0.999, 0.998),
      row("FBHFID", "dec2", 0.999, 0.998),
      row("FBHFID", "dec3", 0.999, 0.998),
  });
  json rel1 = row("FBHFRI", "abar:0.9999", 0.9, 0.899);
  rel1["lambda_psi"] = 0.95;
  json rel2 = row("FBHFRI", "abar:0.9999", 0.9, 0.899);
  rel2["lambda_psi"] = 0.9999;
  q["grid"].push_back(rel1);
  q["grid"].push_back(rel2);

  return json{{"param_check",
               {{"method", "fpdhf"},
                {"problem", ""},
                {"beta", 1.0},
                {"zeta", 1.0},
                {"norm_L", 0.0},
                {"t", 0.9},
                {"kappa1", 0.5},
                {"kappa2", 0.99},
                {"scenario", 1},
                {"alpha", nullptr},
                {"lambda", nullptr},
                {"nu_mode", "auto"},
                {"schedule", ""},
                {"horizon", 1000000}}},
              {"qp", q},
              {"restore", RestoreConfig{}.to_json()},
              {"sweep", SweepConfig{}.to_json()},
              {"equiv", EquivConfig{}.to_json()}};
}

void apply_override(json& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw std::invalid_argument("--set expects key=value, got '" + std::string(assignment) + "'");
  }
  const std::string path(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = raw;

  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw std::invalid_argument("--set: empty key segment in '" + path + "'");
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(key);
      } catch (const std::logic_error&) {
        throw std::invalid_argument("--set: '" + key + "' is not an array index");
      }
      if (idx >= node->size()) throw std::invalid_argument("--set: index " + key + " out of range");
      node = &(*node)[idx];
    } else {
      if (!node->is_object()) *node = json::object();
      node = &(*node)[key];
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false, /*ignore_comments=*/true);
  if (j.is_discarded() || !j.is_object()) throw IoError("config '" + path + "' is not a JSON object");
  return j;
}

namespace {

// Objects merge key by key; anything else (arrays, nulls included) replaces.
// Unlike JSON merge-patch, an explicit null survives a save/reload cycle.
void deep_merge(json& base, const json& patch) {
  if (!base.is_object() || !patch.is_object()) {
    base = patch;
    return;
  }
  for (const auto& [k, v] : patch.items()) deep_merge(base[k], v);
}

// Reads known keys from one config section and rejects the rest, so a typo
// cannot silently fall back to a default.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw std::invalid_argument("config section '" + name_ + "' must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    used_.insert(key);
    if (j_.contains(key)) out = j_.at(key).get<T>();
  }

  void get_double(const char* key, double& out) {
    used_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s == "inf" || s == "infinity") {
        out = std::numeric_limits<double>::infinity();
        return;
      }
      throw std::invalid_argument(name_ + "." + key + ": expected a number, got '" + s + "'");
    }
    out = v.get<double>();
  }

  std::optional<double> optional_double(const char* key) {
    used_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return std::nullopt;
    double v = 0.0;
    get_double(key, v);
    return v;
  }

  void ignore(const char* key) { used_.insert(key); }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.count(k)) throw std::invalid_argument("config: unknown key '" + name_ + "." + k + "'");
    }
  }

 private:
  const json& j_;
  std::string name_;
  std::set<std::string> used_;
};

QpConfig qp_from(const json& j, const char* name = "qp") {
  QpConfig c;
  Section s(j, name);
  s.get("N", c.N);
  s.get("m", c.m);
  s.get("p", c.p);
  s.get("seed", c.seed);
  s.get_double("t", c.t);
  s.get_double("kappa1", c.kappa1);
  s.get("method", c.method);
  s.get("schedule", c.schedule);
  s.get_double("lambda", c.lambda);
  s.get_double("lambda_psi", c.lambda_psi);
  s.get("max_iters", c.max_iters);
  s.get_double("rel_tol", c.rel_tol);
  s.get("b_mode", c.b_mode);
  s.get_double("b_noise", c.b_noise);
  s.get("require_unique", c.require_unique);
  for (const char* k : {"realizations", "threads", "grid", "label"}) s.ignore(k);
  s.finish();
  c.validate();
  return c;
}

RestoreConfig restore_from(const json& j) {
  RestoreConfig c;
  Section s(j, "restore");
  s.get("image_path", c.image_path);
  s.get("N", c.N);
  s.get("kernel", c.kernel);
  s.get_double("noise_std", c.noise_std);
  s.get_double("mu1", c.mu1);
  s.get_double("mu2", c.mu2);
  s.get_double("delta", c.delta);
  s.get("seed", c.seed);
  s.get("method", c.method);
  s.get("schedule", c.schedule);
  s.get_double("lambda", c.lambda);
  s.get_double("lambda_psi", c.lambda_psi);
  s.get_double("t", c.t);
  s.get_double("kappa1", c.kappa1);
  s.get_double("kappa2", c.kappa2);
  s.get("max_iters", c.max_iters);
  s.get_double("rel_tol", c.rel_tol);
  s.get("haar_level", c.haar_level);
  s.finish();
  c.validate();
  return c;
}

SweepConfig sweep_from(const json& j) {
  SweepConfig c;
  Section s(j, "sweep");
  s.get("problem", c.problem);
  s.get("alpha", c.alpha);
  s.get("lambda", c.lambda);
  s.get("t", c.t);
  s.get("kappa1", c.kappa1);
  s.get("kappa2", c.kappa2);
  s.get("run", c.run);
  s.get("threads", c.threads);
  s.finish();
  c.validate();
  return c;
}

EquivConfig equiv_from(const json& j) {
  EquivConfig c;
  Section s(j, "equiv");
  s.get("primal", c.primal);
  s.get("dual", c.dual);
  s.get("iters", c.iters);
  s.get("seed", c.seed);
  s.get("seeds", c.seeds);
  s.get_double("t", c.t);
  s.get_double("kappa1", c.kappa1);
  s.get_double("kappa2", c.kappa2);
  s.get_double("alpha", c.alpha);
  s.get_double("tolerance", c.tolerance);
  s.finish();
  c.validate();
  return c;
}

struct Context {
  std::string subcommand;
  json config;
  fs::path out_dir;
  std::ostream& out;
  std::ostream& err;

  json meta(std::uint64_t seed) const {
    return {{"tool", "nfb"},
            {"subcommand", subcommand},
            {"seed", seed},
            {"config_hash", config_hash(config)},
            {"simd", simd::active_kernels().name}};
  }

  fs::path file(const std::string& name) const { return out_dir / name; }

  void write_text(const std::string& name, const std::string& text) const {
    std::ofstream f(file(name));
    if (!f) throw IoError("cannot write '" + file(name).string() + "'");
    f << text;
    if (!f) throw IoError("write failed for '" + file(name).string() + "'");
  }

  void write_json(const std::string& name, const json& j) const { write_text(name, j.dump(2) + "\n"); }

  // CSV files start with '#' lines (gnuplot skips them) holding the metadata
  // and the full effective config.
  std::string csv_header(std::uint64_t seed) const {
    return "# meta: " + meta(seed).dump() + "\n# config: " + config.dump() + "\n";
  }
};

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

void print_kv(std::ostream& os, const std::string& key, const std::string& value) {
  os << std::left << std::setw(18) << key << value << '\n';
}

bool is_primal_only(const std::string& method) {
  return method == "fb" || method == "fbf" || method == "fbhf";
}

// ---------------------------------------------------------------------------

int cmd_param_check(const Context& ctx) {
  const json& pc = ctx.config.at("param_check");
  Section s(pc, "param_check");
  std::string method = "fpdhf", problem, nu_name = "auto", schedule;
  double beta = 1.0, zeta = 1.0, norm_L = 0.0, t = 0.9, k1 = 0.5, k2 = 0.99;
  int scenario = 1;
  std::int64_t horizon = 1000000;
  s.get("method", method);
  s.get("problem", problem);
  s.get_double("beta", beta);
  s.get_double("zeta", zeta);
  s.get_double("norm_L", norm_L);
  s.get_double("t", t);
  s.get_double("kappa1", k1);
  s.get_double("kappa2", k2);
  s.get("scenario", scenario);
  const std::optional<double> alpha_req = s.optional_double("alpha");
  const std::optional<double> lambda_req = s.optional_double("lambda");
  s.get("nu_mode", nu_name);
  s.get("schedule", schedule);
  s.get("horizon", horizon);
  s.finish();
  if (scenario != 1 && scenario != 2) throw std::invalid_argument("param_check.scenario must be 1 or 2");
  if (scenario == 2 && !lambda_req) throw std::invalid_argument("param_check: scenario 2 needs lambda");

  NuMode nu = (norm_L > 0.0 && zeta > 0.0) ? NuMode::general : NuMode::monotone;
  if (!problem.empty()) {
    SplitProblem P;
    if (problem == "qp") {
      P = gen_qp(qp_from(ctx.config.at("qp"))).problem;
    } else if (problem == "restore") {
      P = gen_restore(restore_from(ctx.config.at("restore"))).problem;
    } else {
      throw std::invalid_argument("param_check.problem must be '', 'qp' or 'restore'");
    }
    beta = P.beta;
    zeta = P.zeta;
    norm_L = P.L ? P.norm_L : 0.0;
    nu = default_nu_mode(P);
  }
  if (nu_name == "general") {
    nu = NuMode::general;
  } else if (nu_name == "monotone") {
    nu = NuMode::monotone;
  } else if (nu_name != "auto") {
    throw std::invalid_argument("param_check.nu_mode must be auto, general or monotone");
  }
  if (is_primal_only(method)) norm_L = 0.0;
  if (norm_L == 0.0) k2 = 0.0;

  std::ostream& os = ctx.out;
  json report = {{"method", method}, {"beta", std::isinf(beta) ? json("inf") : json(beta)},
                 {"zeta", zeta},     {"norm_L", norm_L},
                 {"nu_mode", nu == NuMode::general ? "general" : "monotone"}};
  print_kv(os, "method", method);
  print_kv(os, "beta", num(beta));
  print_kv(os, "zeta", num(zeta));
  print_kv(os, "norm_L", num(norm_L));
  print_kv(os, "nu_mode", nu == NuMode::general ? "general" : "monotone");

  auto finish = [&](bool feasible, const std::string& violated) {
    report["feasible"] = feasible;
    report["violated"] = violated;
    print_kv(os, "result", feasible ? "FEASIBLE" : "INFEASIBLE (" + violated + ")");
    ctx.write_json("param_check.json", {{"meta", ctx.meta(0)}, {"config", ctx.config}, {"report", report}});
    return feasible ? kOk : kInfeasible;
  };

  // Step sizes come from the alpha = 0 certificate, which only fails on the
  // step conditions themselves.
  InitResult base;
  try {
    base = initialize_fpdhf(beta, zeta, norm_L, t, k1, k2, InitScenario::pick_alpha_then_lambda,
                            0.0, nu);
  } catch (const FeasibilityError& e) {
    os << "FAIL  " << std::left << std::setw(22) << e.inequality() << e.what() << '\n';
    report["checks"] = json::array({{{"name", e.inequality()}, {"pass", false}}});
    return finish(false, e.inequality());
  }
  const double psi = base.psi;

  std::vector<InequalityCheck> checks;
  double a = alpha_req.value_or(0.0), lam = 0.0;
  if (scenario == 1) {
    lam = lambda_req.value_or(a >= 0.0 && a < 1.0 ? lambda_interval(psi, a).midpoint() : 0.0);
  } else {
    lam = *lambda_req;
    checks.push_back({"lambda_interval", "0 < lambda < psi", lam, psi, lam > 0.0 && lam < psi});
    if (!alpha_req) a = lam < psi ? 0.5 * alpha_bound(psi, lam).value : 0.0;
  }
  const Certificate cert = certify(base.steps, a, lam);
  for (const auto& c : cert.checks) {
    if (scenario == 2 && c.name == "lambda_interval" && !checks.front().pass) continue;
    checks.push_back(c);
  }

  print_kv(os, "eps_bar", num(base.eps_bar));
  print_kv(os, "1-eps_bar", num(base.one_minus_eps_bar));
  print_kv(os, "chi", num(base.chi));
  print_kv(os, "epsilon", num(base.epsilon));
  print_kv(os, "tau", num(base.tau));
  print_kv(os, "sigma", num(base.sigma));
  print_kv(os, "psi", num(psi));
  print_kv(os, "alpha", num(a));
  print_kv(os, "lambda", num(lam));
  print_kv(os, "lambda_interval", "]0, " + num(cert.lambda_range.hi) + "[");
  print_kv(os, "alpha_bar", cert.alpha_max.feasible ? num(cert.alpha_max.value) : "none (lambda >= psi)");
  print_kv(os, "delta_hat", num(cert.delta_hat));

  report["eps_bar"] = base.eps_bar;
  report["one_minus_eps_bar"] = base.one_minus_eps_bar;
  report["chi"] = base.chi;
  report["epsilon"] = base.epsilon;
  report["tau"] = base.tau;
  report["sigma"] = base.sigma;
  report["psi"] = psi;
  report["alpha"] = a;
  report["lambda"] = lam;
  report["lambda_interval"] = {0.0, cert.lambda_range.hi};
  report["alpha_bar"] = cert.alpha_max.value;
  report["delta_hat"] = cert.delta_hat;
  report["provenance"] = {{"t", t}, {"kappa1", k1}, {"kappa2", k2}, {"scenario", scenario}};

  std::string violated;
  auto& arr = report["checks"] = json::array();
  for (const auto& c : checks) {
    os << (c.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(22) << c.name << std::setw(48)
       << c.statement << "lhs=" << num(c.lhs) << " rhs=" << num(c.rhs) << '\n';
    arr.push_back({{"name", c.name}, {"statement", c.statement}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
    if (!c.pass && violated.empty()) violated = c.name;
  }

  if (!schedule.empty() && violated.empty()) {
    const ScheduleSpec spec = resolve_schedule(schedule, psi, lam);
    const ScheduleReport sr = validate_schedule(spec, psi, horizon);
    os << (sr.feasible ? "PASS  " : "FAIL  ") << std::left << std::setw(22) << "schedule"
       << schedule << (sr.feasible ? "" : " (" + sr.first_violation + ": " + sr.detail + ")") << '\n';
    report["schedule"] = sr.to_json();
    if (!sr.feasible) violated = sr.first_violation;
  }
  return finish(violated.empty(), violated);
}

int cmd_qp_bench(const Context& ctx) {
  const json& q = ctx.config.at("qp");
  const QpConfig base = qp_from(q);
  const int realizations = q.value("realizations", 5);
  const int threads = q.value("threads", 1);

  std::vector<QpConfig> grid;
  std::vector<std::string> labels;
  const json rows = q.value("grid", json::array());
  if (rows.empty()) {
    grid.push_back(base);
    labels.push_back(base.method);
  }
  for (const auto& r : rows) {
    json merged = q;
    merged.erase("grid");
    deep_merge(merged, r);
    grid.push_back(qp_from(merged, "qp.grid[]"));
    labels.push_back(r.value("label", grid.back().method));
  }

  std::vector<BenchRow> result = run_qp_bench(grid, realizations, threads);
  int diverged = 0;
  json per_row = json::array();
  for (std::size_t i = 0; i < result.size(); ++i) {
    result[i].method = labels[i];
    diverged += result[i].diverged;
    per_row.push_back({{"label", labels[i]},
                       {"config", grid[i].to_json()},
                       {"iterations", result[i].iterations},
                       {"converged", result[i].converged},
                       {"diverged", result[i].diverged}});
  }
  const std::string csv = bench_csv(result);
  ctx.write_text("qp_bench.csv", ctx.csv_header(base.seed) + csv);
  ctx.write_json("qp_bench.json", {{"meta", ctx.meta(base.seed)}, {"config", ctx.config}, {"rows", per_row}});
  ctx.out << csv;
  if (diverged > 0) {
    ctx.err << "error: " << diverged << " run(s) diverged under certified parameters\n";
    return kDiverged;
  }
  return kOk;
}

int cmd_image_restore(const Context& ctx) {
  const RestoreConfig cfg = restore_from(ctx.config.at("restore"));
  const RestoreInstance inst = gen_restore(cfg);
  const RestoreResult r = run_restore(inst);

  write_pgm(ctx.file("original.pgm"), inst.original);
  write_pgm(ctx.file("observed.pgm"), inst.observed);
  write_pgm(ctx.file("restored.pgm"), r.restored);
  std::ostringstream trace;
  trace << ctx.csv_header(cfg.seed);
  r.trace.write_csv(trace);
  ctx.write_text("trace.csv", trace.str());
  const json summary = {{"meta", ctx.meta(cfg.seed)},
                        {"config", ctx.config},
                        {"init", r.init.to_json()},
                        {"trace", r.trace.summary_json()},
                        {"psnr_observed", r.psnr_observed},
                        {"psnr_restored", r.psnr_restored},
                        {"objective_observed", r.objective_observed},
                        {"objective_restored", r.objective_restored}};
  ctx.write_json("restore.json", summary);

  print_kv(ctx.out, "status", to_string(r.trace.status));
  print_kv(ctx.out, "iterations", std::to_string(r.trace.iterations));
  print_kv(ctx.out, "psnr_observed", num(r.psnr_observed));
  print_kv(ctx.out, "psnr_restored", num(r.psnr_restored));
  print_kv(ctx.out, "wall_time_s", num(r.trace.wall_time_s));
  if (r.trace.status == RunStatus::diverged) {
    ctx.err << "error: restoration diverged under certified parameters\n";
    return kDiverged;
  }
  return kOk;
}

int cmd_sweep(const Context& ctx) {
  const SweepConfig sweep = sweep_from(ctx.config.at("sweep"));
  const QpConfig qp = qp_from(ctx.config.at("qp"));
  const RestoreConfig restore = restore_from(ctx.config.at("restore"));
  const auto cells = run_sweep(sweep, qp, restore);
  const std::uint64_t seed = sweep.problem == "qp" ? qp.seed : restore.seed;
  const std::string csv = sweep_csv(cells);
  ctx.write_text("sweep.csv", ctx.csv_header(seed) + csv);
  ctx.out << csv;
  for (const auto& c : cells) {
    if (c.ran && c.status == RunStatus::diverged) {
      ctx.err << "error: a certified sweep cell diverged\n";
      return kDiverged;
    }
  }
  return kOk;
}

int cmd_equiv_test(const Context& ctx) {
  const EquivConfig cfg = equiv_from(ctx.config.at("equiv"));
  const EquivReport rep = run_equiv(cfg);
  ctx.write_json("equiv.json", {{"meta", ctx.meta(cfg.seed)}, {"config", ctx.config}, {"report", rep.to_json()}});
  print_kv(ctx.out, "seeds", std::to_string(cfg.seed) + ".." + std::to_string(cfg.seed + cfg.seeds - 1));
  print_kv(ctx.out, "iterations", std::to_string(cfg.iters));
  print_kv(ctx.out, "max_deviation", num(rep.worst));
  print_kv(ctx.out, "result", rep.pass ? "PASS" : "FAIL (tolerance " + num(cfg.tolerance) + ")");
  return rep.pass ? kOk : kUsage;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inertial and relaxed nonlinear forward-backward solvers"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "nfb-out";
  std::optional<std::uint64_t> seed;

  struct Cmd {
    const char* name;
    const char* help;
    int (*fn)(const Context&);
    std::vector<const char*> seed_keys;
  };
  const std::vector<Cmd> cmds = {
      {"param-check", "Initialise step sizes and check every convergence inequality", cmd_param_check,
       {"qp.seed", "restore.seed"}},
      {"qp-bench", "Constrained least-squares benchmark grid (CSV)", cmd_qp_bench, {"qp.seed"}},
      {"image-restore", "Deblur a synthetic or PGM image", cmd_image_restore, {"restore.seed"}},
      {"sweep", "Feasibility and iteration counts over a parameter grid", cmd_sweep,
       {"qp.seed", "restore.seed"}},
      {"equiv-test", "Compare the primal-dual kernel with its product-space form", cmd_equiv_test,
       {"equiv.seed"}},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("-c,--config", config_path, "JSON config file merged over the defaults");
    sub->add_option("--set", overrides, "Override one key, e.g. --set qp.N=50 (repeatable)");
    sub->add_option("-o,--out", out_dir, "Output directory (created if missing)");
    sub->add_option("--seed", seed, "Seed for the subcommand's problem section");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  std::size_t which = 0;
  while (!subs[which]->parsed()) ++which;
  const Cmd& cmd = cmds[which];

  try {
    json config = default_config();
    if (!config_path.empty()) deep_merge(config, load_config(config_path));
    for (const auto& o : overrides) apply_override(config, o);
    if (seed) {
      for (const char* key : cmd.seed_keys) apply_override(config, std::string(key) + "=" + std::to_string(*seed));
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

    Context ctx{cmd.name, config, out_dir, out, err};
    ctx.write_json("config.json", config);
    return cmd.fn(ctx);
  } catch (const FeasibilityError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace nfb::cli
