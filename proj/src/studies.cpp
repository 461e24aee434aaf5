#include "ballapprox/ball.hpp"
#include "ballapprox/certify.hpp"
#include "ballapprox/metrics.hpp"
#include "ballapprox/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ballapprox {

std::vector<DivStudyRow> study_div(const DivStudyConfig& cfg) {
  if (cfg.d_list.empty()) throw ConfigError("d_list is empty");
  if (cfg.n_seq.empty()) throw ConfigError("n_seq is empty");
  for (int d : cfg.d_list)
    if (d < 2 || d > 6) throw ConfigError("div study needs 2 <= d <= 6");
  std::vector<DivStudyRow> out;
  for (int d : cfg.d_list) {
    DivStudyRow row;
    row.d = d;
    std::tie(row.lower, row.upper) = div_bracket(d);
    row.n_seq = cfg.n_seq;
    const double norm = std::pow(sphere_area(d), 2.0 / (d - 1));
    for (int n : cfg.n_seq) {
      if (n < d + 1) throw ConfigError("every n must be >= d+1");
      const std::uint64_t cell = derive_seed(derive_seed(cfg.seed, d), n);
      row.mueller.push_back(mueller_estimate(d, n, cfg.trials, cfg.samples, derive_seed(cell, 1)));

      OptConfig oc;
      oc.iters = cfg.opt_iters;
      oc.restarts = cfg.opt_restarts;
      oc.seed = derive_seed(cell, 2);
      oc.objective = Objective::mw_inscribed;
      oc.samples_per_eval = cfg.samples;
      const OptResult best = optimize(d, n, oc);
      MCEstimate deficit = exact_value(best.objective_value);
      if (d > 3) {
        deficit = mean_width(best.best, cfg.samples, derive_seed(cell, 3));
        deficit.mean = 2.0 - deficit.mean;
      }
      const MCEstimate scaled = scale_estimate(deficit, std::pow(static_cast<double>(n), 2.0 / (d - 1)));
      row.optimized.push_back(scaled);
      row.optimized_scaled.push_back(scaled.mean / norm);
      if (scaled.mean / norm < row.lower - 3.0 * scaled.std_error / norm) row.above_lower = false;
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<ConjectureRow> study_conjecture(const ConjectureConfig& cfg) {
  if (cfg.d_list.empty() || cfg.c1_list.empty()) throw ConfigError("empty conjecture grid");
  for (double c1 : cfg.c1_list)
    if (!(c1 > 0.0)) throw ConfigError("c1 values must be positive");
  struct Item {
    int d;
    std::string generator;
    std::uint64_t seed;
    std::optional<int> n;  // unset: cube fixture
  };
  std::vector<Item> items;
  for (int d : cfg.d_list) {
    if (cfg.include_cube) items.push_back({d, "circumscribed_cube", cfg.seed, std::nullopt});
    for (int n : cfg.n_list)
      for (int i = 0; i < cfg.instances; ++i)
        items.push_back({d, "circumscribed_tangent",
                         instance_seed(cfg.seed, d, n, GenKind::circumscribed_tangent, i), n});
  }
  std::vector<std::vector<ConjectureRow>> rows(items.size());
  parallel_for(static_cast<long long>(items.size()), [&](long long idx) {
    const Item& it = items[idx];
    const VPolytope p =
        it.n ? generate(GenSpec{it.d, *it.n, GenKind::circumscribed_tangent, std::nullopt, it.seed,
                                std::nullopt})
             : make_fixture(FixtureId::circumscribed_cube, it.d);
    const long N = p.fvector()[0];
    const int d = it.d;
    const double base = std::pow(p.surface_area() / (4.0 * N * sphere_area(d)), 2.0 / (d - 1));
    for (std::size_t c = 0; c < cfg.c1_list.size(); ++c) {
      ConjectureRow r;
      r.d = d;
      r.seed = it.seed;
      r.generator = it.generator;
      r.N = N;
      r.c1 = cfg.c1_list[c];
      r.t = r.c1 * base;
      // Same seed for every t, so the ratios are monotone per instance.
      r.ratio = scale_estimate(boundary_mass_outside(p, r.t, cfg.samples, derive_seed(it.seed, 77)),
                               1.0 / sphere_area(d));
      rows[idx].push_back(std::move(r));
    }
  });
  std::vector<ConjectureRow> out;
  for (auto& v : rows)
    for (auto& r : v) out.push_back(std::move(r));
  return out;
}

std::vector<ConjectureRow> conjecture_minima(const std::vector<ConjectureRow>& rows) {
  std::map<std::pair<int, double>, ConjectureRow> best;
  for (const auto& r : rows) {
    auto [it, inserted] = best.try_emplace({r.d, r.c1}, r);
    if (!inserted && r.ratio.mean < it->second.ratio.mean) it->second = r;
  }
  std::vector<ConjectureRow> out;
  for (auto& [key, r] : best) out.push_back(r);
  return out;
}

double hsw_constant(int d, double deviation, double M, double surface) {
  const double e = 2.0 / (d - 1);
  return deviation * std::pow(kappa(d - 1), e) * std::pow(M, e) /
         std::pow(surface, (d + 1.0) / (d - 1.0));
}

HswRow hsw_row(const VPolytope& p, int k, const std::string& generator, std::uint64_t seed,
               long long samples) {
  HswRow r;
  r.d = p.dim();
  r.k = k;
  r.generator = generator;
  r.seed = seed;
  r.M = p.fvector()[k];
  r.surface = p.surface_area();
  try {
    if (!p.origin_interior()) throw OriginNotInterior("origin not interior");
    if (p.max_vertex_norm() > 2.0 + p.tol()) throw ContainmentViolated("P not contained in 2B");
    const MetricReport dev = surface_area_deviation(p, samples, derive_seed(seed, 55));
    r.deviation = dev.value.mean;
    r.deviation_stderr = dev.value.std_error;
    r.c_hat = hsw_constant(r.d, r.deviation, static_cast<double>(r.M), r.surface);
  } catch (const GeometryError& e) {
    r.error = std::string(e.kind()) + ": " + e.what();
  }
  return r;
}

std::vector<HswRow> report_hsw_constants(const SweepConfig& cfg) {
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
  std::vector<std::vector<HswRow>> rows(cells.size());
  parallel_for(static_cast<long long>(cells.size()), [&](long long c) {
    const Cell& cell = cells[c];
    const std::uint64_t seed = instance_seed(cfg.seed, cell.d, cell.n, cell.kind, cell.instance);
    const std::string gen(gen_kind_name(cell.kind));
    try {
      const VPolytope p =
          generate(GenSpec{cell.d, cell.n, cell.kind, std::nullopt, seed, std::nullopt}, cfg.tol);
      std::vector<int> ks = cfg.k_list;
      if (ks.empty())
        for (int k = 0; k < cell.d; ++k) ks.push_back(k);
      for (int k : ks)
        if (k >= 0 && k < cell.d) rows[c].push_back(hsw_row(p, k, gen, seed, cfg.samples));
    } catch (const GeometryError& e) {
      HswRow r;
      r.d = cell.d;
      r.generator = gen;
      r.seed = seed;
      r.error = std::string(e.kind()) + ": " + e.what();
      rows[c].push_back(std::move(r));
    }
  });
  std::vector<HswRow> out;
  for (auto& v : rows)
    for (auto& r : v) out.push_back(std::move(r));
  return out;
}

}  // namespace ballapprox
