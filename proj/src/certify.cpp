#include "ballapprox/certify.hpp"

#include "ballapprox/ball.hpp"
#include "ballapprox/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace ballapprox {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Per-polytope measurements shared by every row of an instance.
class Measures {
 public:
  Measures(const VPolytope& p, long long samples, std::uint64_t seed)
      : p_(p), d_(p.dim()), samples_(samples), seed_(seed), v_(d_ + 1) {}

  const MCEstimate& width() {
    if (!w_) {
      if (d_ <= 3) {
        w_ = exact_value(mean_width_exact_lowdim(p_));
      } else {
        w_ = mean_width(p_, samples_, derive_seed(seed_, 101));
      }
    }
    return *w_;
  }

  const MCEstimate& V(int j) {
    if (!v_[j]) {
      if (auto e = intrinsic_volume_exact(p_, j)) {
        v_[j] = exact_value(*e);
      } else if (j == 1) {
        v_[j] = scale_estimate(width(), sphere_area(d_) / (2.0 * kappa(d_ - 1)));
      } else {
        v_[j] = intrinsic_volume(p_, j, samples_, derive_seed(seed_, 200 + j));
      }
    }
    return *v_[j];
  }

  MCEstimate delta(int j) {
    MCEstimate e = V(j);
    e.mean = std::abs(ball_intrinsic_volume(d_, j) - e.mean);
    return e;
  }

  MCEstimate delta_sigma() {
    MCEstimate total = exact_value(0.0);
    for (int j = 1; j <= d_; ++j) total = add_estimates(total, delta(j));
    return total;
  }

 private:
  const VPolytope& p_;
  int d_;
  long long samples_;
  std::uint64_t seed_;
  std::optional<MCEstimate> w_;
  std::vector<std::optional<MCEstimate>> v_;
};

struct RowSink {
  const InstanceContext& ctx;
  std::vector<CertRow>& rows;

  void add(int d, int k, long M, const std::string& generator, const std::string& metric,
           double measured, double se, const BoundValue& b) {
    CertRow r;
    r.d = d;
    r.k = k;
    r.N = ctx.N;
    r.M = M;
    r.generator = generator;
    r.metric = metric;
    r.measured = measured;
    r.std_error = se;
    r.bound = b.value;
    r.valid = b.valid;
    r.ratio = b.value > 0.0 ? measured / b.value : kNaN;
    r.status = decide(measured, se, b);
    r.seed = ctx.seed;
    rows.push_back(std::move(r));
  }

  void add(int d, int k, long M, const std::string& generator, const std::string& metric,
           const MCEstimate& m, const BoundValue& b) {
    add(d, k, M, generator, metric, m.mean, m.std_error, b);
  }
};

BoundValue diagnostic_bound(double value) {
  BoundValue b;
  b.value = value;
  b.valid = true;
  b.provenance = "diagnostic";
  return b;
}

InstanceFacts facts_for(const VPolytope& p, int k) {
  InstanceFacts f;
  f.k = k;
  f.max_vertex_norm = p.max_vertex_norm();
  f.origin_interior = p.origin_interior();
  // A facet meets int(B) iff its closest point to the origin has norm < 1.
  bool all = true;
  for (const auto& facet : p.facets()) {
    if (facet.offset >= 1.0) {
      all = false;
      break;
    }
    std::vector<Point> pts;
    for (int v : facet.vertex_ids) pts.push_back(p.vertices()[v]);
    if (distance_to_hull(pts, Point::Zero(p.dim())) >= 1.0) {
      all = false;
      break;
    }
  }
  f.facets_meet_interior = all;
  return f;
}

BoundValue with_facts(BoundValue b, const InstanceFacts& f) {
  apply_instance(b, f);
  return b;
}

std::vector<int> js_for(int d) {
  std::vector<int> js{1, 2, d};
  std::sort(js.begin(), js.end());
  js.erase(std::unique(js.begin(), js.end()), js.end());
  js.erase(std::remove_if(js.begin(), js.end(), [d](int j) { return j > d; }), js.end());
  return js;
}

void inscribed_rows(const VPolytope& p, Measures& m, int k, const std::string& gen, RowSink& out) {
  const int d = p.dim();
  const long M = p.fvector()[k];
  const InstanceFacts f = facts_for(p, k);
  if (k_in_range(KRange::vertex_side, d, k)) {
    MCEstimate w = m.width();
    w.mean = 2.0 - w.mean;
    out.add(d, k, M, gen, "mean_width_deficit", w, with_facts(bound_mw_inscribed(d, M), f));
    for (int j : js_for(d))
      out.add(d, k, M, gen, "delta_j" + std::to_string(j), m.delta(j),
              with_facts(bound_delta_j(d, j, M, Side::inscribed), f));
    out.add(d, k, M, gen, "delta_sigma", m.delta_sigma(),
            with_facts(bound_wills(d, M, 0.5, Side::inscribed), f));
  }
  // Exact lower end of the Hausdorff bracket: the deepest facet cap.
  double depth = 0.0;
  for (const auto& facet : p.facets()) depth = std::max(depth, 1.0 - facet.offset);
  const double surf = p.surface_area();
  out.add(d, k, M, gen, "hausdorff", depth, 0.0,
          with_facts(bound_hausdorff(d, M, surf, HausdorffBranch::insc_vertices), f));
  if (k_in_range(KRange::facet_side, d, k)) {
    out.add(d, k, M, gen, "hausdorff_facets", depth, 0.0,
            with_facts(bound_hausdorff(d, M, surf, HausdorffBranch::insc_facets), f));
    const double sym = kappa(d) - p.volume();
    out.add(d, k, M, gen, "symdiff_arbitrary", sym, 0.0,
            with_facts(bound_symdiff_arbitrary(d, surf, M), f));
    out.add(d, k, M, gen, "symdiff_boroczky_ref", sym, 0.0, with_facts(boroczky_reference(d, M), f));
  }
}

void circumscribed_rows(const VPolytope& p, Measures& m, int k, const std::string& gen,
                        RowSink& out) {
  const int d = p.dim();
  const long M = p.fvector()[k];
  const InstanceFacts f = facts_for(p, k);
  if (k_in_range(KRange::facet_side, d, k)) {
    out.add(d, k, M, gen, "volume_excess", p.volume() - kappa(d), 0.0,
            with_facts(bound_vol_circumscribed(d, M), f));
    for (int j : js_for(d))
      out.add(d, k, M, gen, "delta_j" + std::to_string(j), m.delta(j),
              with_facts(bound_delta_j(d, j, M, Side::circumscribed), f));
    out.add(d, k, M, gen, "delta_sigma", m.delta_sigma(),
            with_facts(bound_wills(d, M, 0.5, Side::circumscribed), f));
  }
  const double excess = p.max_vertex_norm() - 1.0;
  const double surf = p.surface_area();
  out.add(d, k, M, gen, "hausdorff", excess, 0.0,
          with_facts(bound_hausdorff(d, M, surf, HausdorffBranch::circ_vertices), f));
  if (k_in_range(KRange::facet_side, d, k)) {
    out.add(d, k, M, gen, "hausdorff_facets", excess, 0.0,
            with_facts(bound_hausdorff(d, M, surf, HausdorffBranch::circ_facets), f));
    // The boundary touches B only at tangency points, so its mass inside B is 0.
    const double sym = p.volume() - kappa(d);
    out.add(d, k, M, gen, "symdiff_arbitrary", sym, 0.0,
            with_facts(bound_symdiff_arbitrary(d, 0.0, M), f));
    out.add(d, k, M, gen, "symdiff_boroczky_ref", sym, 0.0, with_facts(boroczky_reference(d, M), f));
  }
}

void general_rows(const VPolytope& p, int k, const InstanceContext& ctx, RowSink& out) {
  const int d = p.dim();
  if (!k_in_range(KRange::facet_side, d, k) || !p.origin_interior()) return;
  const long M = p.fvector()[k];
  const InstanceFacts f = facts_for(p, k);
  const MetricReport sym = symdiff_ball(p, ctx.samples, derive_seed(ctx.seed, 301));
  const BoundarySplit split = boundary_split(p, ctx.samples, derive_seed(ctx.seed, 302));
  out.add(d, k, M, ctx.generator, "symdiff_arbitrary", sym.value,
          with_facts(bound_symdiff_arbitrary(d, split.dP_in_B.mean, M), f));
}

void diagnostic_rows(const VPolytope& p, Measures& m, const std::optional<VPolytope>& polar,
                     Measures* polar_m, Nesting n, const InstanceContext& ctx, RowSink& out) {
  const int d = p.dim();
  const long f0 = p.fvector()[0];
  // (V_j(P)/V_j(B))^{1/j} is nonincreasing in j.
  double worst = std::numeric_limits<double>::infinity(), worst_se = 0.0;
  std::vector<double> r(d + 1), se(d + 1);
  for (int j = 1; j <= d; ++j) {
    const MCEstimate& v = m.V(j);
    const double ratio = v.mean / ball_intrinsic_volume(d, j);
    r[j] = std::pow(ratio, 1.0 / j);
    se[j] = v.mean > 0.0 ? r[j] * v.std_error / (j * v.mean) : 0.0;
  }
  for (int j = 1; j < d; ++j) {
    const double gap = r[j] - r[j + 1];
    if (gap < worst) {
      worst = gap;
      worst_se = std::hypot(se[j], se[j + 1]);
    }
  }
  out.add(d, 0, f0, ctx.generator, "isoperimetric_chain", worst, worst_se, diagnostic_bound(0.0));

  // Polarity inequality on the inscribed member Q of the pair {P, P°}:
  // 2 - w(Q) <= (2/S_d) vol(Q° \ B).
  if (polar && polar_m && n != Nesting::general) {
    const bool p_inscribed = n == Nesting::inscribed;
    Measures& mq = p_inscribed ? m : *polar_m;
    const VPolytope& outer = p_inscribed ? *polar : p;
    const MCEstimate& w = mq.width();
    const double measured = 2.0 / sphere_area(d) * (outer.volume() - kappa(d));
    out.add(d, 0, f0, ctx.generator, "glasauer_gruber", measured, w.std_error,
            diagnostic_bound(2.0 - w.mean));
  }

  if (n == Nesting::inscribed && p.origin_interior()) {
    const double threshold = 1.0 / (1.0 + eta_dN(d, static_cast<double>(f0)));
    const MCEstimate frac = sphere_sublevel_fraction(p, threshold, ctx.samples, derive_seed(ctx.seed, 401));
    out.add(d, 0, f0, ctx.generator, "sublevel_fraction", frac, diagnostic_bound(0.75));
  }
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

std::string_view status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::not_applicable: return "not_applicable";
  }
  return "";
}

Status decide(double measured, double std_error, const BoundValue& bound) {
  if (!bound.valid) return Status::not_applicable;
  return measured + 3.0 * std_error < bound.value ? Status::fail : Status::pass;
}

void validate(const SweepConfig& cfg) {
  if (cfg.d_list.empty()) throw ConfigError("d_list is empty");
  if (cfg.generators.empty()) throw ConfigError("generator list is empty");
  if (cfg.instances_per_cell < 1) throw ConfigError("instances_per_cell must be >= 1");
  if (cfg.samples < 2) throw ConfigError("samples must be >= 2");
  for (int d : cfg.d_list)
    if (d < 2 || d > 8) throw ConfigError("d must lie in 2..8");
  for (int k : cfg.k_list)
    if (k < 0 || k > 7) throw ConfigError("k must lie in 0..d-1");
  for (int n : cfg.n_list)
    for (int d : cfg.d_list)
      if (n < d + 1) throw ConfigError("every n must be >= d+1");
}

std::vector<int> default_n_grid(int d) {
  std::vector<int> out;
  const double lo = d + 1, hi = 30;
  for (int i = 0; i < 8; ++i) {
    const int n = static_cast<int>(std::lround(lo + (hi - lo) * i / 7.0));
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  return out;
}

std::uint64_t instance_seed(std::uint64_t seed, int d, int n, GenKind kind, int instance) {
  std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(d));
  s = derive_seed(s, static_cast<std::uint64_t>(n));
  s = derive_seed(s, static_cast<std::uint64_t>(kind));
  return derive_seed(s, static_cast<std::uint64_t>(instance));
}

std::vector<CertRow> certify_instance(const VPolytope& p, const std::vector<int>& ks,
                                      const InstanceContext& ctx) {
  std::vector<CertRow> rows;
  RowSink out{ctx, rows};
  const int d = p.dim();
  const Nesting n = nesting(p);
  Measures m(p, ctx.samples, ctx.seed);
  std::optional<VPolytope> polar;
  std::optional<Measures> polar_m;
  if (n != Nesting::general && p.origin_interior()) {
    polar = polar_dual(p);
    polar_m.emplace(*polar, ctx.samples, derive_seed(ctx.seed, 999));
  }
  const std::string polar_gen = ctx.generator + ":polar";
  for (int k : ks) {
    if (k < 0 || k >= d) continue;
    const int kp = d - 1 - k;
    switch (n) {
      case Nesting::inscribed:
        inscribed_rows(p, m, k, ctx.generator, out);
        if (polar && k_in_range(KRange::facet_side, d, kp)) {
          const long M = polar->fvector()[kp];
          out.add(d, kp, M, polar_gen, "volume_excess", polar->volume() - kappa(d), 0.0,
                  with_facts(bound_vol_circumscribed(d, M), facts_for(*polar, kp)));
        }
        break;
      case Nesting::circumscribed:
        circumscribed_rows(p, m, k, ctx.generator, out);
        if (polar && k_in_range(KRange::vertex_side, d, kp)) {
          const long M = polar->fvector()[kp];
          MCEstimate w = polar_m->width();
          w.mean = 2.0 - w.mean;
          out.add(d, kp, M, polar_gen, "mean_width_deficit", w,
                  with_facts(bound_mw_inscribed(d, M), facts_for(*polar, kp)));
        }
        break;
      case Nesting::general: general_rows(p, k, ctx, out); break;
    }
  }
  if (ctx.diagnostics) diagnostic_rows(p, m, polar, polar_m ? &*polar_m : nullptr, n, ctx, out);
  return rows;
}

std::vector<CertRow> certify(const SweepConfig& cfg) {
  validate(cfg);
  struct Cell {
    int d, n;
    GenKind kind;
    int instance;
  };
  std::vector<Cell> cells;
  for (int d : cfg.d_list) {
    const std::vector<int> ns = cfg.n_list.empty() ? default_n_grid(d) : cfg.n_list;
    for (int n : ns)
      for (GenKind g : cfg.generators)
        for (int i = 0; i < cfg.instances_per_cell; ++i) cells.push_back({d, n, g, i});
  }
  std::vector<std::vector<CertRow>> out(cells.size());
  parallel_for(static_cast<long long>(cells.size()), [&](long long c) {
    const Cell& cell = cells[c];
    InstanceContext ctx;
    ctx.generator = std::string(gen_kind_name(cell.kind));
    ctx.N = cell.n;
    ctx.seed = instance_seed(cfg.seed, cell.d, cell.n, cell.kind, cell.instance);
    ctx.samples = cfg.samples;
    ctx.diagnostics = cfg.diagnostics;
    std::vector<int> ks = cfg.k_list;
    if (ks.empty())
      for (int k = 0; k < cell.d; ++k) ks.push_back(k);
    try {
      GenSpec spec{cell.d, cell.n, cell.kind, std::nullopt, ctx.seed, std::nullopt};
      const VPolytope p = generate(spec, cfg.tol);
      out[c] = certify_instance(p, ks, ctx);
    } catch (const GeometryError& e) {
      CertRow r;
      r.d = cell.d;
      r.N = cell.n;
      r.generator = ctx.generator;
      r.metric = "instance";
      r.seed = ctx.seed;
      r.ratio = kNaN;
      r.error = std::string(e.kind()) + ": " + e.what();
      out[c].push_back(std::move(r));
    }
  });
  std::vector<CertRow> rows;
  for (auto& v : out)
    for (auto& r : v) rows.push_back(std::move(r));
  return rows;
}

void write_csv(std::ostream& os, const std::vector<CertRow>& rows) {
  os << "d,k,N,M,generator,metric,measured,stderr,bound,valid,ratio,status,seed\n";
  for (const auto& r : rows) {
    os << r.d << ',' << r.k << ',' << r.N << ',' << r.M << ',' << r.generator << ',' << r.metric
       << ',' << fmt(r.measured) << ',' << fmt(r.std_error) << ',' << fmt(r.bound) << ','
       << (r.valid ? "true" : "false") << ',' << fmt(r.ratio) << ',' << status_name(r.status)
       << ',' << r.seed << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<CertRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  auto num = [](double x) -> nlohmann::ordered_json {
    if (!std::isfinite(x)) return nullptr;
    return x;
  };
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["d"] = r.d;
    o["k"] = r.k;
    o["N"] = r.N;
    o["M"] = r.M;
    o["generator"] = r.generator;
    o["metric"] = r.metric;
    o["measured"] = num(r.measured);
    o["stderr"] = num(r.std_error);
    o["bound"] = num(r.bound);
    o["valid"] = r.valid;
    o["ratio"] = num(r.ratio);
    o["status"] = std::string(status_name(r.status));
    o["seed"] = r.seed;
    if (!r.error.empty()) o["error"] = r.error;
    arr.push_back(std::move(o));
  }
  os << arr.dump(2) << '\n';
}

int exit_code(const std::vector<CertRow>& rows) {
  for (const auto& r : rows)
    if (r.status == Status::fail) return 1;
  return 0;
}

}  // namespace ballapprox
