#include "ballapprox/constructions.hpp"

#include "ballapprox/metrics.hpp"

#include <cmath>
#include <numbers>

namespace ballapprox {
namespace {

constexpr int kMaxDraws = 100;

std::vector<Point> cube_halfspace_normals(int d) {
  std::vector<Point> n;
  for (int i = 0; i < d; ++i) {
    n.push_back(Point::Unit(d, i));
    n.push_back(-Point::Unit(d, i));
  }
  return n;
}

VPolytope cube(int d, double half, double tol) {
  HPolytope h;
  h.dim = d;
  h.normals = cube_halfspace_normals(d);
  h.bounds.assign(h.normals.size(), half);
  return to_vpolytope(h, tol);
}

VPolytope regular_simplex(int d, double tol) {
  // Helmert basis of the sum-zero hyperplane in R^{d+1}, scaled to the unit sphere.
  std::vector<Point> verts(d + 1, Point::Zero(d));
  for (int k = 1; k <= d; ++k) {
    const double s = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) verts[i][k - 1] = s;
    verts[k][k - 1] = -k * s;
  }
  for (auto& v : verts) v.normalize();
  return convex_hull(verts, tol);
}

VPolytope regular_ngon(int n, double tol) {
  if (n < 3) throw ConfigError("regular n-gon needs n >= 3");
  std::vector<Point> verts;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    Point p(2);
    p << std::cos(t), std::sin(t);
    verts.push_back(p);
  }
  return convex_hull(verts, tol);
}

bool on_sphere(FixtureId id) {
  return id == FixtureId::simplex || id == FixtureId::cross || id == FixtureId::regular_ngon ||
         id == FixtureId::inscribed_cube;
}

std::vector<Point> sphere_points(Rng& rng, int d, int n) {
  std::vector<Point> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.push_back(sampling::sphere(rng, d));
  return pts;
}

template <class Fn>
VPolytope redraw(const GenSpec& spec, Fn&& attempt) {
  for (int a = 0; a < kMaxDraws; ++a) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(a)));
    try {
      if (auto p = attempt(rng)) return std::move(*p);
    } catch (const DegenerateInput&) {
    } catch (const ToleranceConflict&) {
    } catch (const Unbounded&) {
    }
  }
  throw UnboundedDraw("no admissible polytope after 100 draws");
}

}  // namespace

std::string_view gen_kind_name(GenKind k) {
  switch (k) {
    case GenKind::random_inscribed: return "random_inscribed";
    case GenKind::circumscribed_tangent: return "circumscribed_tangent";
    case GenKind::polar_of_inscribed: return "polar_of_inscribed";
    case GenKind::fixture: return "fixture";
  }
  return "";
}

std::string_view fixture_name(FixtureId f) {
  switch (f) {
    case FixtureId::simplex: return "simplex";
    case FixtureId::cube: return "cube";
    case FixtureId::cross: return "cross";
    case FixtureId::regular_ngon: return "regular_ngon";
    case FixtureId::inscribed_cube: return "inscribed_cube";
    case FixtureId::circumscribed_cube: return "circumscribed_cube";
  }
  return "";
}

GenKind parse_gen_kind(std::string_view s) {
  for (GenKind k : {GenKind::random_inscribed, GenKind::circumscribed_tangent,
                    GenKind::polar_of_inscribed, GenKind::fixture})
    if (gen_kind_name(k) == s) return k;
  throw ConfigError("unknown generator: " + std::string(s));
}

FixtureId parse_fixture(std::string_view s) {
  for (FixtureId f : {FixtureId::simplex, FixtureId::cube, FixtureId::cross, FixtureId::regular_ngon,
                      FixtureId::inscribed_cube, FixtureId::circumscribed_cube})
    if (fixture_name(f) == s) return f;
  throw ConfigError("unknown fixture: " + std::string(s));
}

VPolytope make_fixture(FixtureId id, int d, int n, double tol) {
  if (d < 1 || d > 8) throw UnsupportedDimension("fixtures need 1 <= d <= 8");
  switch (id) {
    case FixtureId::simplex: return regular_simplex(d, tol);
    case FixtureId::cube:
    case FixtureId::circumscribed_cube: return cube(d, 1.0, tol);
    case FixtureId::inscribed_cube: return cube(d, 1.0 / std::sqrt(static_cast<double>(d)), tol);
    case FixtureId::cross: return polar_dual(cube(d, 1.0, tol));
    case FixtureId::regular_ngon:
      if (d != 2) throw UnsupportedDimension("regular n-gon is planar");
      return regular_ngon(n, tol);
  }
  throw ConfigError("unknown fixture");
}

VPolytope inscribed_hull(const std::vector<Point>& pts, double tol) { return convex_hull(pts, tol); }

VPolytope tangent_intersection(const std::vector<Point>& normals, double tol) {
  HPolytope h;
  h.dim = normals.empty() ? 0 : static_cast<int>(normals[0].size());
  h.normals = normals;
  h.bounds.assign(normals.size(), 1.0);
  return to_vpolytope(h, tol);
}

VPolytope generate(const GenSpec& spec, double tol) {
  const int d = spec.d;
  if (d < 2 || d > 8) throw UnsupportedDimension("generators need 2 <= d <= 8");
  switch (spec.kind) {
    case GenKind::random_inscribed:
      return redraw(spec, [&](Rng& rng) -> std::optional<VPolytope> {
        return inscribed_hull(sphere_points(rng, d, spec.n), tol);
      });
    case GenKind::polar_of_inscribed:
      return redraw(spec, [&](Rng& rng) -> std::optional<VPolytope> {
        VPolytope p = inscribed_hull(sphere_points(rng, d, spec.n), tol);
        if (!p.origin_interior()) return std::nullopt;
        return polar_dual(p);
      });
    case GenKind::circumscribed_tangent:
      return redraw(spec, [&](Rng& rng) -> std::optional<VPolytope> {
        return tangent_intersection(sphere_points(rng, d, spec.n), tol);
      });
    case GenKind::fixture: {
      if (!spec.fixture) throw ConfigError("fixture kind needs a fixture id");
      VPolytope p = make_fixture(*spec.fixture, d, spec.n, tol);
      if (!spec.jitter || *spec.jitter == 0.0) return p;
      Rng rng(derive_seed(spec.seed, 0));
      std::vector<Point> pts = p.vertices();
      for (auto& v : pts) {
        v += *spec.jitter * sampling::normal_vector(rng, d);
        if (on_sphere(*spec.fixture)) v.normalize();
      }
      return convex_hull(pts, tol);
    }
  }
  throw ConfigError("unknown generator");
}

MCEstimate mueller_estimate(int d, int N, int trials, long long samples, std::uint64_t seed) {
  if (N < d + 1 || trials < 1) throw ConfigError("mueller estimate needs N >= d+1 and trials >= 1");
  const double scale = std::pow(static_cast<double>(N), 2.0 / (d - 1));
  std::vector<double> values(trials);
  parallel_for(trials, [&](long long t) {
    double w = 0.0;
    if (d == 2) {
      GenSpec spec{d, N, GenKind::random_inscribed, std::nullopt, derive_seed(seed, t), std::nullopt};
      w = mean_width_exact_lowdim(generate(spec));
    } else {
      // The support of the hull equals the support of its point set.
      Rng rng(derive_seed(seed, t));
      std::vector<Point> pts;
      for (int i = 0; i < N; ++i) pts.push_back(sampling::sphere(rng, d));
      const kernels::PackedRows rows = kernels::PackedRows::pack(pts);
      w = chunked_estimate(derive_seed(seed ^ 0x5bd1e995ULL, t), samples,
                           [&](Rng& r, long long count, RunningStats& st) {
                             for (long long s = 0; s < count; ++s) {
                               const Point u = sampling::sphere(r, d);
                               st.add(kernels::max_dot(rows, u) + kernels::max_dot(rows, -u));
                             }
                           })
              .mean;
    }
    values[t] = scale * (2.0 - w);
  });
  RunningStats st;
  for (double v : values) st.add(v);
  MCEstimate e;
  e.mean = st.mean;
  e.std_error = st.std_error();
  e.samples = trials;
  e.seed = seed;
  return e;
}

}  // namespace ballapprox
