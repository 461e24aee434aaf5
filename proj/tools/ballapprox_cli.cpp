// ballapprox: certification harness and studies for polytopal approximation of the unit ball.

#include "ballapprox/ball.hpp"
#include "ballapprox/bounds.hpp"
#include "ballapprox/certify.hpp"
#include "ballapprox/constructions.hpp"
#include "ballapprox/io.hpp"
#include "ballapprox/kernels.hpp"
#include "ballapprox/metrics.hpp"
#include "ballapprox/optimizer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

using namespace ballapprox;
using json = nlohmann::ordered_json;

namespace {

struct Globals {
  std::vector<int> d;
  std::vector<int> k;
  std::vector<int> n;
  long long samples = 0;  // 0: per-command default
  std::uint64_t seed = 0;
  int threads = 0;
  std::string format = "csv";
  std::string out;
  double tol = kDefaultTol;
};

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

json estimate_json(const MCEstimate& e) {
  return json{{"mean", num(e.mean)}, {"stderr", num(e.std_error)}, {"samples", e.samples},
              {"seed", e.seed}};
}

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot open output file " + path);
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int one_d(const Globals& g, int fallback) {
  if (g.d.size() > 1) throw ConfigError("this command takes a single --d");
  return g.d.empty() ? fallback : g.d.front();
}

int one_n(const Globals& g, int fallback) {
  if (g.n.size() > 1) throw ConfigError("this command takes a single --n");
  return g.n.empty() ? fallback : g.n.front();
}

void check_format(const Globals& g) {
  if (g.format != "csv" && g.format != "json") throw ConfigError("--format must be csv or json");
}

// ---- certify ---------------------------------------------------------------

struct CertifyOpts {
  std::vector<std::string> generators;
  int instances = 10;
  bool no_diagnostics = false;
  std::string input;
};

int run_certify(const Globals& g, const CertifyOpts& o) {
  check_format(g);
  std::vector<CertRow> rows;
  if (!o.input.empty()) {
    const VPolytope p = convex_hull(io::read_points_file(o.input), g.tol);
    InstanceContext ctx;
    ctx.generator = "file";
    ctx.N = static_cast<long>(p.vertices().size());
    ctx.seed = g.seed;
    ctx.samples = g.samples ? g.samples : 200000;
    ctx.diagnostics = !o.no_diagnostics;
    std::vector<int> ks = g.k;
    if (ks.empty())
      for (int k = 0; k < p.dim(); ++k) ks.push_back(k);
    rows = certify_instance(p, ks, ctx);
  } else {
    SweepConfig cfg;
    if (!g.d.empty()) cfg.d_list = g.d;
    cfg.k_list = g.k;
    cfg.n_list = g.n;
    if (!o.generators.empty()) {
      cfg.generators.clear();
      for (const auto& s : o.generators) cfg.generators.push_back(parse_gen_kind(s));
    }
    for (GenKind kind : cfg.generators)
      if (kind == GenKind::fixture) throw ConfigError("use `fixtures` plus --input for fixtures");
    cfg.instances_per_cell = o.instances;
    if (g.samples) cfg.samples = g.samples;
    cfg.seed = g.seed;
    cfg.tol = g.tol;
    cfg.diagnostics = !o.no_diagnostics;
    rows = certify(cfg);
  }
  Output out(g.out);
  if (g.format == "json") write_json(out.os(), rows);
  else write_csv(out.os(), rows);

  long fails = 0, passes = 0, na = 0, errors = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) ++errors;
    else if (r.status == Status::fail) ++fails;
    else if (r.status == Status::pass) ++passes;
    else ++na;
  }
  std::fprintf(stderr, "rows=%zu pass=%ld fail=%ld not_applicable=%ld errors=%ld\n", rows.size(),
               passes, fails, na, errors);
  return exit_code(rows);
}

// ---- bounds ----------------------------------------------------------------

struct BoundsOpts {
  std::string name = "mw_inscribed";
  double M = 0.0;
  int j = 1;
  std::string side = "inscribed";
  std::string mode = "statement";
  std::string branch = "insc_vertices";
  double c = 0.5;
  double A = 0.0;
  double surface = 0.0;
};

Side parse_side(const std::string& s) {
  if (s == "inscribed") return Side::inscribed;
  if (s == "circumscribed") return Side::circumscribed;
  throw ConfigError("--side must be inscribed or circumscribed");
}

HausdorffBranch parse_branch(const std::string& s) {
  for (HausdorffBranch b : {HausdorffBranch::insc_facets, HausdorffBranch::insc_vertices,
                            HausdorffBranch::circ_facets, HausdorffBranch::circ_vertices})
    if (branch_name(b) == s) return b;
  throw ConfigError("unknown --branch " + s);
}

json bound_json(const BoundValue& b) {
  json reqs = json::array();
  for (const auto& r : b.requirements) {
    json j{{"kind", r.kind}, {"threshold", num(r.threshold)}, {"detail", r.detail}};
    j["holds"] = r.holds ? json(*r.holds) : json(nullptr);
    reqs.push_back(std::move(j));
  }
  json out{{"value", num(b.value)}, {"valid", b.valid}, {"requirements", reqs},
           {"provenance", b.provenance}};
  if (!b.extras.empty()) {
    json ex = json::object();
    for (const auto& [key, v] : b.extras) ex[key] = num(v);
    out["extras"] = ex;
  }
  if (!b.note.empty()) out["note"] = b.note;
  return out;
}

int run_bounds(const Globals& g, const BoundsOpts& o) {
  const int d = one_d(g, 2);
  json out;
  const std::string& n = o.name;
  if (n == "mw_inscribed") out = bound_json(bound_mw_inscribed(d, o.M));
  else if (n == "vol_circumscribed") out = bound_json(bound_vol_circumscribed(d, o.M));
  else if (n == "delta_j") {
    const BracketMode mode = o.mode == "proof" ? BracketMode::proof : BracketMode::statement;
    if (o.mode != "proof" && o.mode != "statement") throw ConfigError("--mode must be statement or proof");
    out = bound_json(bound_delta_j(d, o.j, o.M, parse_side(o.side), mode, o.c));
  } else if (n == "wills") out = bound_json(bound_wills(d, o.M, o.c, parse_side(o.side)));
  else if (n == "symdiff") out = bound_json(bound_symdiff_arbitrary(d, o.A, o.M));
  else if (n == "hausdorff") out = bound_json(bound_hausdorff(d, o.M, o.surface, parse_branch(o.branch)));
  else if (n == "boroczky") out = bound_json(boroczky_reference(d, o.M));
  else if (n == "eta") out = json{{"value", eta_dN(d, o.M)}};
  else if (n == "asymptotic_mw") out = json{{"value", asymptotic_lower_mw(d)}};
  else if (n == "asymptotic_vol") out = json{{"value", asymptotic_lower_vol(d)}};
  else if (n == "div_bracket") {
    const auto [lo, hi] = div_bracket(d);
    out = json{{"lower", lo}, {"upper", hi}};
  } else if (n == "muller_limit") out = json{{"value", muller_limit(d)}};
  else if (n == "rho") {
    const RhoD r = rho_d(d);
    out = json{{"d", r.d}, {"rho", r.rho}, {"rho_pow", r.rho_pow}};
  } else if (n == "ball") {
    const BallConstants b = ball_constants(d);
    out = json{{"d", b.d}, {"kappa", b.kappa}, {"S", b.S}, {"flag", b.flag}, {"V", b.Vj_ball},
               {"wills", b.wills}, {"avg_wills", b.avg_wills}};
  } else {
    throw ConfigError("unknown bound " + n);
  }
  Output dst(g.out);
  dst.os() << out.dump(2) << '\n';
  return 0;
}

// ---- fixtures --------------------------------------------------------------

struct FixtureOpts {
  std::string generator = "random_inscribed";
  std::string fixture;
  double jitter = 0.0;
};

int run_fixtures(const Globals& g, const FixtureOpts& o) {
  GenSpec spec;
  spec.d = one_d(g, 2);
  spec.n = one_n(g, 0);
  spec.seed = g.seed;
  if (!o.fixture.empty()) {
    spec.kind = GenKind::fixture;
    spec.fixture = parse_fixture(o.fixture);
  } else {
    spec.kind = parse_gen_kind(o.generator);
    if (spec.kind == GenKind::fixture) throw ConfigError("--fixture is required for kind fixture");
    if (spec.n < spec.d + 1) throw ConfigError("--n must be at least d+1");
  }
  if (o.jitter > 0.0) spec.jitter = o.jitter;
  const VPolytope p = generate(spec, g.tol);
  Output dst(g.out);
  io::write_polytope(dst.os(), p);
  return 0;
}

// ---- optimize --------------------------------------------------------------

struct OptimizeOpts {
  std::string objective = "mw_inscribed";
  OptConfig cfg;
  std::string polytope_out;
};

int run_optimize(const Globals& g, OptimizeOpts o) {
  const int d = one_d(g, 2);
  const int n = one_n(g, 6);
  o.cfg.objective = parse_objective(o.objective);
  o.cfg.seed = g.seed;
  if (g.samples) o.cfg.samples_per_eval = g.samples;
  const OptResult r = optimize(d, n, o.cfg);
  const Side side = o.cfg.objective == Objective::mw_inscribed ||
                            o.cfg.objective == Objective::hausdorff_inscribed
                        ? Side::inscribed
                        : Side::circumscribed;
  BoundValue b;
  const double surf = r.best.surface_area();
  switch (o.cfg.objective) {
    case Objective::mw_inscribed: b = bound_mw_inscribed(d, n); break;
    case Objective::vol_circumscribed: b = bound_vol_circumscribed(d, r.best.fvector()[d - 1]); break;
    case Objective::hausdorff_inscribed:
      b = bound_hausdorff(d, n, surf, HausdorffBranch::insc_vertices);
      break;
    case Objective::hausdorff_circumscribed:
      b = bound_hausdorff(d, r.best.fvector()[d - 1], surf, HausdorffBranch::circ_facets);
      break;
  }
  json hist = json::array();
  for (const auto& [it, v] : r.history) hist.push_back({it, v});
  json out{{"d", d},
           {"N", n},
           {"objective", std::string(objective_name(o.cfg.objective))},
           {"side", std::string(side_name(side))},
           {"value", r.objective_value},
           {"bound", bound_json(b)},
           {"ratio", b.value > 0 ? json(r.objective_value / b.value) : json(nullptr)},
           {"seed", r.seed_used},
           {"restart", r.restart_used},
           {"fvector", r.best.fvector()},
           {"history", hist}};
  Output dst(g.out);
  dst.os() << out.dump(2) << '\n';
  if (!o.polytope_out.empty()) io::write_polytope_file(o.polytope_out, r.best);
  return 0;
}

// ---- studies ---------------------------------------------------------------

int run_mueller(const Globals& g, int trials) {
  const int d = one_d(g, 2);
  const std::vector<int> ns = g.n.empty() ? std::vector<int>{16, 32, 64, 128} : g.n;
  const double limit = muller_limit(d);
  Output dst(g.out);
  json rows = json::array();
  if (g.format == "csv") dst.os() << "d,N,estimate,stderr,limit,rel_gap\n";
  for (int n : ns) {
    const MCEstimate e = mueller_estimate(d, n, trials, g.samples ? g.samples : 20000, derive_seed(g.seed, n));
    const double gap = std::abs(e.mean - limit) / limit;
    if (g.format == "csv")
      dst.os() << d << ',' << n << ',' << e.mean << ',' << e.std_error << ',' << limit << ',' << gap << '\n';
    else
      rows.push_back(json{{"d", d}, {"N", n}, {"estimate", estimate_json(e)}, {"limit", limit}, {"rel_gap", gap}});
  }
  if (g.format == "json") dst.os() << rows.dump(2) << '\n';
  return 0;
}

int run_div(const Globals& g, DivStudyConfig cfg) {
  if (!g.d.empty()) cfg.d_list = g.d;
  if (!g.n.empty()) cfg.n_seq = g.n;
  if (g.samples) cfg.samples = g.samples;
  cfg.seed = g.seed;
  const auto rows = study_div(cfg);
  Output dst(g.out);
  if (g.format == "csv") {
    dst.os() << "d,N,lower,upper,mueller,mueller_stderr,optimized,optimized_stderr,optimized_scaled\n";
    for (const auto& r : rows)
      for (std::size_t i = 0; i < r.n_seq.size(); ++i)
        dst.os() << r.d << ',' << r.n_seq[i] << ',' << r.lower << ',' << r.upper << ','
                 << r.mueller[i].mean << ',' << r.mueller[i].std_error << ',' << r.optimized[i].mean
                 << ',' << r.optimized[i].std_error << ',' << r.optimized_scaled[i] << '\n';
  } else {
    json out = json::array();
    for (const auto& r : rows) {
      json m = json::array(), opt = json::array();
      for (const auto& e : r.mueller) m.push_back(estimate_json(e));
      for (const auto& e : r.optimized) opt.push_back(estimate_json(e));
      out.push_back(json{{"d", r.d}, {"lower", r.lower}, {"upper", r.upper}, {"n_seq", r.n_seq},
                         {"mueller", m}, {"optimized", opt}, {"optimized_scaled", r.optimized_scaled},
                         {"above_lower", r.above_lower}});
    }
    dst.os() << out.dump(2) << '\n';
  }
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.above_lower;
  return ok ? 0 : 1;
}

int run_conjecture(const Globals& g, ConjectureConfig cfg, bool minima_only) {
  if (!g.d.empty()) cfg.d_list = g.d;
  if (!g.n.empty()) cfg.n_list = g.n;
  if (g.samples) cfg.samples = g.samples;
  cfg.seed = g.seed;
  auto rows = study_conjecture(cfg);
  if (minima_only) rows = conjecture_minima(rows);
  Output dst(g.out);
  if (g.format == "csv") {
    dst.os() << "d,generator,N,c1,t,ratio,stderr,seed\n";
    for (const auto& r : rows)
      dst.os() << r.d << ',' << r.generator << ',' << r.N << ',' << r.c1 << ',' << r.t << ','
               << r.ratio.mean << ',' << r.ratio.std_error << ',' << r.seed << '\n';
  } else {
    json out = json::array();
    for (const auto& r : rows)
      out.push_back(json{{"d", r.d}, {"generator", r.generator}, {"N", r.N}, {"c1", r.c1},
                         {"t", r.t}, {"ratio", estimate_json(r.ratio)}, {"seed", r.seed}});
    dst.os() << out.dump(2) << '\n';
  }
  return 0;
}

int run_hsw(const Globals& g, const CertifyOpts& o) {
  SweepConfig cfg;
  if (!g.d.empty()) cfg.d_list = g.d;
  cfg.k_list = g.k;
  cfg.n_list = g.n;
  if (!o.generators.empty()) {
    cfg.generators.clear();
    for (const auto& s : o.generators) cfg.generators.push_back(parse_gen_kind(s));
  }
  cfg.instances_per_cell = o.instances;
  if (g.samples) cfg.samples = g.samples;
  cfg.seed = g.seed;
  cfg.tol = g.tol;
  const auto rows = report_hsw_constants(cfg);
  Output dst(g.out);
  if (g.format == "csv") {
    dst.os() << "d,k,generator,M,deviation,stderr,surface,c_hat,seed,error\n";
    for (const auto& r : rows)
      dst.os() << r.d << ',' << r.k << ',' << r.generator << ',' << r.M << ',' << r.deviation << ','
               << r.deviation_stderr << ',' << r.surface << ',' << r.c_hat << ',' << r.seed << ','
               << r.error << '\n';
  } else {
    json out = json::array();
    for (const auto& r : rows)
      out.push_back(json{{"d", r.d}, {"k", r.k}, {"generator", r.generator}, {"M", r.M},
                         {"deviation", r.deviation}, {"stderr", r.deviation_stderr},
                         {"surface", r.surface}, {"c_hat", r.c_hat}, {"seed", r.seed},
                         {"error", r.error}});
    dst.os() << out.dump(2) << '\n';
  }
  // Summary: min and median of the empirical constant.
  std::vector<double> c;
  for (const auto& r : rows)
    if (r.error.empty()) c.push_back(r.c_hat);
  if (!c.empty()) {
    std::sort(c.begin(), c.end());
    std::fprintf(stderr, "c_hat min=%.6g median=%.6g over %zu rows\n", c.front(), c[c.size() / 2],
                 c.size());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify lower bounds for polytopal approximation of the unit ball"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--d", g.d, "Dimension(s)")->delimiter(',');
  app.add_option("--k", g.k, "Face dimension(s)")->delimiter(',');
  app.add_option("--n", g.n, "Generator size(s)")->delimiter(',');
  app.add_option("--samples", g.samples, "Monte Carlo samples")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", g.seed, "Base seed");
  app.add_option("--threads", g.threads, "Worker threads (0: hardware)")->check(CLI::NonNegativeNumber);
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "Output path (default stdout)");
  app.add_option("--tol", g.tol, "Geometric tolerance")->check(CLI::PositiveNumber);
  bool force_scalar = false;
  app.add_flag("--scalar", force_scalar, "Use the scalar kernels");

  CertifyOpts cert;
  auto* c_cert = app.add_subcommand("certify", "Certify bounds on generated or given polytopes");
  c_cert->add_option("--generators", cert.generators, "Generator kinds")->delimiter(',');
  c_cert->add_option("--instances", cert.instances, "Instances per cell")->check(CLI::PositiveNumber);
  c_cert->add_flag("--no-diagnostics", cert.no_diagnostics, "Skip diagnostic rows");
  c_cert->add_option("--input", cert.input, "Certify the hull of the points in this file");

  BoundsOpts bo;
  auto* c_bounds = app.add_subcommand("bounds", "Evaluate one bound as JSON");
  c_bounds->add_option("name", bo.name,
                       "mw_inscribed|vol_circumscribed|delta_j|wills|symdiff|hausdorff|boroczky|"
                       "eta|asymptotic_mw|asymptotic_vol|div_bracket|muller_limit|rho|ball");
  c_bounds->add_option("--M", bo.M, "Face count (or N)");
  c_bounds->add_option("--j", bo.j, "Intrinsic volume index");
  c_bounds->add_option("--side", bo.side, "inscribed or circumscribed");
  c_bounds->add_option("--mode", bo.mode, "statement or proof");
  c_bounds->add_option("--branch", bo.branch, "Hausdorff branch");
  c_bounds->add_option("--c", bo.c, "Constant c in (0,1)");
  c_bounds->add_option("--A", bo.A, "Boundary mass inside B");
  c_bounds->add_option("--surface", bo.surface, "Surface area of P");

  FixtureOpts fo;
  auto* c_fix = app.add_subcommand("fixtures", "Write a generated polytope in text format");
  c_fix->add_option("--generator", fo.generator, "Generator kind");
  c_fix->add_option("--fixture", fo.fixture, "simplex|cube|cross|regular_ngon|inscribed_cube|circumscribed_cube");
  c_fix->add_option("--jitter", fo.jitter, "Vertex noise for fixtures")->check(CLI::NonNegativeNumber);

  OptimizeOpts oo;
  auto* c_opt = app.add_subcommand("optimize", "Local search for good approximating polytopes");
  c_opt->add_option("--objective", oo.objective, "mw_inscribed|vol_circumscribed|hausdorff_inscribed|hausdorff_circumscribed");
  c_opt->add_option("--iters", oo.cfg.iters, "Iterations per restart");
  c_opt->add_option("--restarts", oo.cfg.restarts, "Independent restarts");
  c_opt->add_option("--step", oo.cfg.step0, "Initial step (radians)");
  c_opt->add_option("--polytope-out", oo.polytope_out, "Write the best polytope here");

  DivStudyConfig dc;
  auto* c_div = app.add_subcommand("div", "Mueller and optimized deficits against the div bracket");
  c_div->add_option("--trials", dc.trials, "Random hulls per N")->check(CLI::PositiveNumber);
  c_div->add_option("--iters", dc.opt_iters, "Optimizer iterations");
  c_div->add_option("--restarts", dc.opt_restarts, "Optimizer restarts");

  int mueller_trials = 200;
  auto* c_mu = app.add_subcommand("mueller", "N^{2/(d-1)}(2 - E w) for random inscribed hulls");
  c_mu->add_option("--trials", mueller_trials, "Random hulls per N")->check(CLI::PositiveNumber);

  ConjectureConfig cc;
  bool minima = false;
  auto* c_conj = app.add_subcommand("conjecture", "Boundary mass outside (1+t)B for circumscribed polytopes");
  c_conj->add_option("--c1", cc.c1_list, "c1 values")->delimiter(',');
  c_conj->add_option("--instances", cc.instances, "Instances per (d, N)")->check(CLI::PositiveNumber);
  c_conj->add_flag("--minima", minima, "Only the minimum ratio per (d, c1)");

  CertifyOpts hs;
  auto* c_hsw = app.add_subcommand("hsw", "Empirical surface-deviation constants");
  c_hsw->add_option("--generators", hs.generators, "Generator kinds")->delimiter(',');
  c_hsw->add_option("--instances", hs.instances, "Instances per cell")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (g.threads > 0) set_worker_count(g.threads);
    if (force_scalar) kernels::select(kernels::Isa::Scalar);
    if (*c_cert) return run_certify(g, cert);
    if (*c_bounds) return run_bounds(g, bo);
    if (*c_fix) return run_fixtures(g, fo);
    if (*c_opt) return run_optimize(g, oo);
    if (*c_div) return run_div(g, dc);
    if (*c_mu) return run_mueller(g, mueller_trials);
    if (*c_conj) return run_conjecture(g, cc, minima);
    if (*c_hsw) return run_hsw(g, hs);
  } catch (const GeometryError& e) {
    std::fprintf(stderr, "error (%s): %s\n", e.kind(), e.what());
    return 2;
  }
  return 2;
}
