#include "ballapprox/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ballapprox {
namespace {

// Wolfe's minimum-norm-point algorithm on conv{y_i}. Returns the norm.
double min_norm_point(const std::vector<Point>& y) {
  const int m = static_cast<int>(y.size());
  double scale = 0.0;
  int start = 0;
  for (int i = 0; i < m; ++i) {
    const double n2 = y[i].squaredNorm();
    scale = std::max(scale, n2);
    if (n2 < y[start].squaredNorm()) start = i;
  }
  const double eps = 1e-12 * std::max(1.0, scale);
  std::vector<int> active{start};
  std::vector<double> lambda{1.0};
  Point x = y[start];

  for (int major = 0; major < 1000; ++major) {
    int j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double v = x.dot(y[i]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (x.squaredNorm() - best <= eps) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    active.push_back(j);
    lambda.push_back(0.0);

    for (int minor = 0; minor < 1000; ++minor) {
      // Affine minimizer over the active set: (Y^T Y + 1 1^T) a = 1, mu = a / sum(a).
      const int s = static_cast<int>(active.size());
      Matrix g(s, s);
      for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) g(a, b) = y[active[a]].dot(y[active[b]]) + 1.0;
      Eigen::VectorXd alpha = g.completeOrthogonalDecomposition().solve(Eigen::VectorXd::Ones(s));
      const double sum = alpha.sum();
      Eigen::VectorXd mu = alpha / sum;
      if (mu.minCoeff() > 1e-14) {
        for (int a = 0; a < s; ++a) lambda[a] = mu[a];
        break;
      }
      double theta = 1.0;
      for (int a = 0; a < s; ++a)
        if (mu[a] <= 1e-14) theta = std::min(theta, lambda[a] / (lambda[a] - mu[a]));
      for (int a = 0; a < s; ++a) lambda[a] = lambda[a] + theta * (mu[a] - lambda[a]);
      std::vector<int> keep_ids;
      std::vector<double> keep_lambda;
      for (int a = 0; a < s; ++a)
        if (lambda[a] > 1e-14) {
          keep_ids.push_back(active[a]);
          keep_lambda.push_back(lambda[a]);
        }
      active = std::move(keep_ids);
      lambda = std::move(keep_lambda);
    }
    double total = 0.0;
    for (double l : lambda) total += l;
    Point nx = Point::Zero(x.size());
    for (std::size_t a = 0; a < active.size(); ++a) nx += (lambda[a] / total) * y[active[a]];
    if (nx.squaredNorm() >= x.squaredNorm() - eps * 1e-3) {
      x = nx.squaredNorm() < x.squaredNorm() ? nx : x;
      break;
    }
    x = nx;
  }
  return x.norm();
}

double sphere_gap(const VPolytope& p, const Point& u) {
  if (p.contains(u)) return 0.0;
  return distance_to_polytope(p, u);
}

// Local ascent of u -> dist(u, P) on the sphere from a starting direction.
double climb(const VPolytope& p, Point u, double value, Rng& rng, double step) {
  const int d = p.dim();
  for (int it = 0; it < 200 && step > 1e-9; ++it) {
    Point cand = u + step * sampling::normal_vector(rng, d);
    cand.normalize();
    const double v = sphere_gap(p, cand);
    if (v > value) {
      value = v;
      u = cand;
    } else if (it % 10 == 9) {
      step *= 0.5;
    }
  }
  return value;
}

double sampled_sphere_gap(const VPolytope& p, long long samples, std::uint64_t seed,
                          std::vector<Point> starts) {
  const int d = p.dim();
  Rng rng(derive_seed(seed, 0));
  for (long long i = 0; i < samples; ++i) starts.push_back(sampling::sphere(rng, d));
  std::vector<std::pair<double, int>> scored;
  for (std::size_t i = 0; i < starts.size(); ++i)
    scored.emplace_back(sphere_gap(p, starts[i]), static_cast<int>(i));
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  double best = scored.empty() ? 0.0 : scored.front().first;
  const std::size_t refine = std::min<std::size_t>(8, scored.size());
  for (std::size_t i = 0; i < refine; ++i) {
    Rng local(derive_seed(seed, 1 + i));
    best = std::max(best, climb(p, starts[scored[i].second], scored[i].first, local, 0.05));
  }
  return best;
}

}  // namespace

double distance_to_hull(const std::vector<Point>& pts, const Point& x) {
  std::vector<Point> shifted;
  shifted.reserve(pts.size());
  for (const auto& v : pts) shifted.push_back(v - x);
  return min_norm_point(shifted);
}

double distance_to_polytope(const VPolytope& p, const Point& x) {
  return distance_to_hull(p.vertices(), x);
}

MetricReport hausdorff_ball(const VPolytope& p, long long refine_samples, std::uint64_t seed) {
  if (!p.origin_interior()) throw OriginNotInterior("Hausdorff distance needs an interior origin");
  MetricReport r;
  const Nesting n = nesting(p);
  if (n == Nesting::circumscribed) {
    r.value = exact_value(p.max_vertex_norm() - 1.0);
    r.method = Method::exact;
    return r;
  }
  if (n == Nesting::inscribed) {
    double lower = 0.0;
    std::vector<Point> starts;
    for (const auto& f : p.facets()) {
      lower = std::max(lower, 1.0 - f.offset);
      starts.push_back(f.normal);
    }
    const double upper = std::max(lower, sampled_sphere_gap(p, refine_samples, seed, starts));
    r.value = exact_value(lower);
    r.value.seed = seed;
    r.method = Method::bracket;
    r.bracket = std::make_pair(lower, upper);
    return r;
  }
  double outer = 0.0;
  for (const auto& v : p.vertices()) outer = std::max(outer, v.norm() - 1.0);
  std::vector<Point> starts;
  for (const auto& f : p.facets()) starts.push_back(f.normal);
  const double inner = sampled_sphere_gap(p, refine_samples, seed, starts);
  r.value = exact_value(std::max(outer, inner));
  r.value.seed = seed;
  r.value.samples = refine_samples;
  r.method = Method::mc_sphere;
  r.certified = false;
  return r;
}

}  // namespace ballapprox
