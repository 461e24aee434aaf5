#include "ballapprox/optimizer.hpp"

#include "ballapprox/ball.hpp"
#include "ballapprox/constructions.hpp"
#include "ballapprox/metrics.hpp"
#include "ballapprox/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace ballapprox {
namespace {

bool is_inscribed(Objective o) {
  return o == Objective::mw_inscribed || o == Objective::hausdorff_inscribed;
}

// Geodesic step of angle `step` from x in a random tangent direction.
Point tangent_step(const Point& x, double step, Rng& rng) {
  Point g = sampling::normal_vector(rng, static_cast<int>(x.size()));
  g -= g.dot(x) * x;
  const double n = g.norm();
  if (n < 1e-300) return x;
  Point y = std::cos(step) * x + std::sin(step) * (g / n);
  return y / y.norm();
}

struct Evaluated {
  VPolytope poly;
  double value = 0.0;
};

std::optional<Evaluated> evaluate(int d, Objective obj, const std::vector<Point>& pts) {
  Evaluated e;
  try {
    e.poly = is_inscribed(obj) ? inscribed_hull(pts) : tangent_intersection(pts);
  } catch (const GeometryError&) {
    return std::nullopt;
  }
  switch (obj) {
    case Objective::mw_inscribed:
      if (!e.poly.origin_interior()) return std::nullopt;
      e.value = 2.0 - mean_width_exact_lowdim(e.poly);
      break;
    case Objective::hausdorff_inscribed: {
      if (!e.poly.origin_interior()) return std::nullopt;
      double depth = 0.0;
      for (const auto& f : e.poly.facets()) depth = std::max(depth, 1.0 - f.offset);
      e.value = depth;
      break;
    }
    case Objective::vol_circumscribed: e.value = e.poly.volume() - kappa(d); break;
    case Objective::hausdorff_circumscribed: e.value = e.poly.max_vertex_norm() - 1.0; break;
  }
  return e;
}

// Support of the point cloud in a fixed set of directions, updated one point
// at a time. The hull is never built while searching.
class CloudWidths {
 public:
  CloudWidths(const std::vector<Point>& dirs, const std::vector<Point>& pts)
      : dirs_(&dirs), hp_(dirs.size()), hm_(dirs.size()), ap_(dirs.size()), am_(dirs.size()) {
    for (std::size_t k = 0; k < dirs.size(); ++k) rescan(k, pts);
  }

  /// Widths after replacing point i (pts already holds the new point).
  CloudWidths moved(const std::vector<Point>& pts, int i) const {
    CloudWidths c = *this;
    for (std::size_t k = 0; k < dirs_->size(); ++k) {
      const double s = (*dirs_)[k].dot(pts[i]);
      if (c.ap_[k] == i && s < c.hp_[k]) {
        c.rescan(k, pts);
        continue;
      }
      if (c.am_[k] == i && -s < c.hm_[k]) {
        c.rescan(k, pts);
        continue;
      }
      if (s > c.hp_[k]) c.hp_[k] = s, c.ap_[k] = i;
      if (-s > c.hm_[k]) c.hm_[k] = -s, c.am_[k] = i;
    }
    return c;
  }

  double width(std::size_t k) const { return hp_[k] + hm_[k]; }
  double deficit() const {
    double s = 0.0;
    for (std::size_t k = 0; k < hp_.size(); ++k) s += width(k);
    return 2.0 - s / static_cast<double>(hp_.size());
  }
  // Every sampled support positive: a proxy for the origin being interior.
  bool surrounds_origin() const {
    for (std::size_t k = 0; k < hp_.size(); ++k)
      if (hp_[k] <= 0.0 || hm_[k] <= 0.0) return false;
    return true;
  }

 private:
  void rescan(std::size_t k, const std::vector<Point>& pts) {
    const Point& u = (*dirs_)[k];
    hp_[k] = hm_[k] = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
      const double s = u.dot(pts[i]);
      if (s > hp_[k]) hp_[k] = s, ap_[k] = i;
      if (-s > hm_[k]) hm_[k] = -s, am_[k] = i;
    }
  }

  const std::vector<Point>* dirs_;
  std::vector<double> hp_, hm_;
  std::vector<int> ap_, am_;
};

// Paired acceptance: the width gain must clear three standard errors.
bool paired_improvement(const CloudWidths& cur, const CloudWidths& cand, std::size_t n) {
  RunningStats st;
  for (std::size_t k = 0; k < n; ++k) st.add(cand.width(k) - cur.width(k));
  return st.mean > 0.0 && st.mean > 3.0 * st.std_error();
}

// Greedy max-min selection from a random pool gives a well spread start.
std::vector<Point> spread_start(int d, int N, Rng& rng) {
  std::vector<Point> pool;
  for (int i = 0; i < 16 * N; ++i) pool.push_back(sampling::sphere(rng, d));
  std::vector<Point> out{pool[0]};
  std::vector<double> gap(pool.size(), std::numeric_limits<double>::infinity());
  while (static_cast<int>(out.size()) < N) {
    std::size_t far = 0;
    for (std::size_t p = 0; p < pool.size(); ++p) {
      gap[p] = std::min(gap[p], (pool[p] - out.back()).squaredNorm());
      if (gap[p] > gap[far]) far = p;
    }
    out.push_back(pool[far]);
  }
  return out;
}

OptResult run_restart(int d, int N, const OptConfig& cfg, int restart) {
  const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(restart));
  Rng rng(seed);
  const bool noisy = cfg.objective == Objective::mw_inscribed && d > 2;

  std::vector<Point> dirs;
  if (noisy) {
    Rng drng(derive_seed(seed, 0xC0FFEE));
    for (long long i = 0; i < cfg.samples_per_eval; ++i) dirs.push_back(sampling::sphere(drng, d));
  }

  std::vector<Point> pts;
  std::optional<Evaluated> cur;
  std::optional<CloudWidths> cloud;
  for (int attempt = 0; attempt < 100 && !cur && !cloud; ++attempt) {
    pts = spread_start(d, N, rng);
    if (noisy) {
      CloudWidths c(dirs, pts);
      if (c.surrounds_origin()) cloud = std::move(c);
    } else {
      cur = evaluate(d, cfg.objective, pts);
    }
  }
  if (!cur && !cloud) throw UnboundedDraw("no feasible starting configuration");

  double value = noisy ? cloud->deficit() : cur->value;
  OptResult out{VPolytope{}, value, {{0, value}}, seed, restart};
  std::uniform_int_distribution<int> pick(0, N - 1);
  double step = cfg.step0;
  int streak = 0;
  for (int it = 1; it <= cfg.iters; ++it) {
    const int i = pick(rng);
    const Point saved = pts[i];
    pts[i] = tangent_step(saved, step, rng);
    bool accepted = false;
    if (noisy) {
      CloudWidths cand = cloud->moved(pts, i);
      if (cand.surrounds_origin() && paired_improvement(*cloud, cand, dirs.size())) {
        cloud = std::move(cand);
        value = cloud->deficit();
        accepted = true;
      }
    } else {
      auto cand = evaluate(d, cfg.objective, pts);
      if (cand && cand->value < cur->value) {
        cur = std::move(cand);
        value = cur->value;
        accepted = true;
      }
    }
    if (accepted) {
      out.history.emplace_back(it, value);
      streak = 0;
    } else {
      pts[i] = saved;
      if (++streak >= cfg.reject_streak) {
        step = std::max(step * cfg.decay, 1e-9);
        streak = 0;
      }
    }
  }
  if (noisy) {
    // Final value from the hull itself, independent of the search directions.
    out.best = inscribed_hull(pts);
    if (!out.best.origin_interior()) throw OriginNotInterior("optimized hull misses the origin");
    out.objective_value = d == 3 ? 2.0 - mean_width_exact_lowdim(out.best)
                                 : 2.0 - mean_width(out.best, cfg.samples_per_eval,
                                                    derive_seed(seed, 0xF1A1)).mean;
  } else {
    out.best = cur->poly;
    out.objective_value = cur->value;
  }
  return out;
}

}  // namespace

std::string_view objective_name(Objective o) {
  switch (o) {
    case Objective::mw_inscribed: return "mw_inscribed";
    case Objective::vol_circumscribed: return "vol_circumscribed";
    case Objective::hausdorff_inscribed: return "hausdorff_inscribed";
    case Objective::hausdorff_circumscribed: return "hausdorff_circumscribed";
  }
  return "";
}

Objective parse_objective(std::string_view s) {
  for (Objective o : {Objective::mw_inscribed, Objective::vol_circumscribed,
                      Objective::hausdorff_inscribed, Objective::hausdorff_circumscribed})
    if (objective_name(o) == s) return o;
  throw ConfigError("unknown objective: " + std::string(s));
}

void validate(const OptConfig& cfg) {
  if (cfg.iters < 0) throw ConfigError("iters must be >= 0");
  if (cfg.restarts < 1) throw ConfigError("restarts must be >= 1");
  if (!(cfg.step0 > 0.0)) throw ConfigError("step0 must be positive");
  if (!(cfg.decay > 0.0 && cfg.decay < 1.0)) throw ConfigError("decay must lie in (0,1)");
  if (cfg.samples_per_eval < 2) throw ConfigError("samples_per_eval must be >= 2");
  if (cfg.reject_streak < 1) throw ConfigError("reject_streak must be >= 1");
}

OptResult optimize(int d, int N, const OptConfig& cfg) {
  validate(cfg);
  if (d < 2 || d > 8) throw UnsupportedDimension("optimizer needs 2 <= d <= 8");
  if (N < d + 1) throw ConfigError("optimizer needs N >= d+1");
  std::vector<std::optional<OptResult>> runs(cfg.restarts);
  parallel_for(cfg.restarts, [&](long long r) { runs[r] = run_restart(d, N, cfg, static_cast<int>(r)); });
  int best = 0;
  for (int r = 1; r < cfg.restarts; ++r)
    if (runs[r]->objective_value < runs[best]->objective_value) best = r;
  return std::move(*runs[best]);
}

}  // namespace ballapprox
