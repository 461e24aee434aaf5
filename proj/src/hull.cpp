#include "ballapprox/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

namespace ballapprox {
namespace {

// Visits every ascending k-subset of {0..n-1}.
template <class Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k > n) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(std::span<const int>(idx));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<int> dedupe_points(const std::vector<Point>& pts, double tol) {
  std::vector<int> keep;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    bool dup = false;
    for (int j : keep)
      if ((pts[i] - pts[j]).lpNorm<Eigen::Infinity>() <= tol) {
        dup = true;
        break;
      }
    if (!dup) keep.push_back(i);
  }
  return keep;
}

VPolytope hull_1d(const std::vector<Point>& pts, double tol) {
  int lo = 0, hi = 0;
  for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
    if (pts[i][0] < pts[lo][0]) lo = i;
    if (pts[i][0] > pts[hi][0]) hi = i;
  }
  if (pts[hi][0] - pts[lo][0] <= tol) throw DegenerateInput("points do not span a segment");
  std::vector<Point> verts;
  if (lo < hi) verts = {pts[lo], pts[hi]};
  else verts = {pts[hi], pts[lo]};
  const int ilo = lo < hi ? 0 : 1;
  std::vector<Facet> facets(2);
  facets[0] = Facet{-Point::Ones(1), -verts[ilo][0], {ilo}};
  facets[1] = Facet{Point::Ones(1), verts[1 - ilo][0], {1 - ilo}};
  return VPolytope::from_incidence(1, std::move(verts), std::move(facets), tol);
}

VPolytope hull_2d(const std::vector<Point>& pts, double tol) {
  std::vector<double> xs(pts.size()), ys(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    xs[i] = pts[i][0];
    ys[i] = pts[i][1];
  }
  std::vector<int> ccw = planar::hull_indices(xs, ys, tol);
  if (ccw.size() < 3) throw DegenerateInput("planar points are collinear");
  // Vertices keep input order; facets follow from consecutive hull vertices.
  std::vector<int> order = ccw;
  std::sort(order.begin(), order.end());
  std::map<int, int> remap;
  std::vector<Point> verts;
  for (int i : order) {
    remap[i] = static_cast<int>(verts.size());
    verts.push_back(pts[i]);
  }
  std::vector<Facet> facets;
  for (std::size_t e = 0; e < ccw.size(); ++e) {
    const Point& a = pts[ccw[e]];
    const Point& b = pts[ccw[(e + 1) % ccw.size()]];
    Point n(2);
    n << b[1] - a[1], a[0] - b[0];
    n.normalize();
    facets.push_back(Facet{n, n.dot(a), {remap[ccw[e]], remap[ccw[(e + 1) % ccw.size()]]}});
  }
  return VPolytope::from_incidence(2, std::move(verts), std::move(facets), tol);
}

// Keeps the points that are extreme (rank-d normals of incident facets) and
// renumbers facet incidences accordingly.
VPolytope assemble(const std::vector<Point>& pts, int d, std::map<std::vector<int>, Facet>& found,
                   double tol) {
  const int n = static_cast<int>(pts.size());
  // A point is extreme iff the normals of the facets through it have rank d.
  std::vector<std::vector<int>> incident(n);
  std::vector<Facet> facets;
  for (auto& [ids, f] : found) {
    for (int i : ids) incident[i].push_back(static_cast<int>(facets.size()));
    facets.push_back(f);
  }
  std::vector<int> remap(n, -1);
  std::vector<Point> verts;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(incident[i].size()) < d) continue;
    Matrix nm(d, static_cast<Eigen::Index>(incident[i].size()));
    for (std::size_t c = 0; c < incident[i].size(); ++c) nm.col(c) = facets[incident[i][c]].normal;
    Eigen::JacobiSVD<Matrix> svd(nm);
    if (svd.singularValues()[d - 1] <= 1e-9) continue;
    remap[i] = static_cast<int>(verts.size());
    verts.push_back(pts[i]);
  }
  for (auto& f : facets) {
    std::vector<int> ids;
    for (int i : f.vertex_ids)
      if (remap[i] >= 0) ids.push_back(remap[i]);
    f.vertex_ids = std::move(ids);
  }
  return VPolytope::from_incidence(d, std::move(verts), std::move(facets), tol);
}

// Adds the hyperplane (normal, offset) as a facet if it supports every point
// and touches a (d-1)-dimensional subset. Throws on tolerance-band ambiguity.
void add_supporting(const std::vector<Point>& pts, int d, Point normal, double offset, double tol,
                    std::map<std::vector<int>, Facet>& found) {
  std::vector<int> on;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    const double r = normal.dot(pts[i]) - offset;
    if (r > tol) throw ToleranceConflict("hyperplane sidedness depends on the tolerance");
    if (r >= -tol) on.push_back(i);
  }
  if (found.count(on)) return;
  if (linalg::affine_dimension(pts, on, tol) != d - 1) return;
  found.emplace(on, Facet{std::move(normal), offset, on});
}

// Beneath-beyond with outside sets: simplicial facets are grown point by point
// (farthest outside point first), then coplanar neighbours are merged into the
// facets of the polytope.
VPolytope hull_nd(const std::vector<Point>& pts, int d, double tol) {
  const int n = static_cast<int>(pts.size());

  // Initial simplex: greedily maximize the distance to the current affine hull.
  std::vector<int> simplex{0};
  for (int i = 1; i < n; ++i)
    if (pts[i][0] < pts[simplex[0]][0]) simplex[0] = i;
  while (static_cast<int>(simplex.size()) < d + 1) {
    const int k = static_cast<int>(simplex.size());
    Matrix e(d, k - 1);
    for (int c = 1; c < k; ++c) e.col(c - 1) = pts[simplex[c]] - pts[simplex[0]];
    Matrix q = k > 1 ? Matrix(Eigen::HouseholderQR<Matrix>(e).householderQ() *
                              Matrix::Identity(d, k - 1))
                     : Matrix(d, 0);
    int best = -1;
    double best_dist = tol;
    for (int i = 0; i < n; ++i) {
      Point v = pts[i] - pts[simplex[0]];
      if (k > 1) v -= q * (q.transpose() * v);
      const double dist = v.norm();
      if (dist > best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    if (best < 0) throw DegenerateInput("points are not full-dimensional");
    simplex.push_back(best);
  }
  Point centre = Point::Zero(d);
  for (int i : simplex) centre += pts[i];
  centre /= d + 1;

  struct Simplex {
    std::vector<int> v;  // d point ids
    Point normal;
    double offset = 0.0;
    std::vector<int> outside;
    int far = -1;
    bool alive = true;
  };
  std::vector<Simplex> fs;
  // Ridge (sorted d-1 ids) -> the two simplices sharing it.
  std::map<std::vector<int>, std::array<int, 2>> ridges;

  auto ridge_key = [](const std::vector<int>& v, int drop) {
    std::vector<int> r;
    r.reserve(v.size() - 1);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (static_cast<int>(i) != drop) r.push_back(v[i]);
    std::sort(r.begin(), r.end());
    return r;
  };
  auto link = [&](const std::vector<int>& key, int f) {
    auto [it, fresh] = ridges.try_emplace(key, std::array<int, 2>{f, -1});
    if (!fresh) {
      auto& slot = it->second;
      if (slot[0] < 0) slot[0] = f;
      else slot[1] = f;
    }
  };
  auto unlink = [&](const std::vector<int>& key, int f) {
    auto it = ridges.find(key);
    if (it == ridges.end()) return;
    auto& slot = it->second;
    if (slot[0] == f) slot[0] = -1;
    if (slot[1] == f) slot[1] = -1;
    if (slot[0] < 0 && slot[1] < 0) ridges.erase(it);
  };
  auto make = [&](std::vector<int> v) {
    Simplex s;
    if (!linalg::hyperplane_through(pts, v, s.normal, s.offset))
      throw ToleranceConflict("new facet through a nearly coplanar point");
    if (s.normal.dot(centre) - s.offset > 0) {
      s.normal = -s.normal;
      s.offset = -s.offset;
    }
    s.v = std::move(v);
    fs.push_back(std::move(s));
    const int id = static_cast<int>(fs.size()) - 1;
    for (int k = 0; k < d; ++k) link(ridge_key(fs[id].v, k), id);
    return id;
  };
  auto residual = [&](int f, int i) { return fs[f].normal.dot(pts[i]) - fs[f].offset; };
  auto assign = [&](int i, const std::vector<int>& candidates) {
    for (int f : candidates) {
      const double r = residual(f, i);
      if (r > tol) {
        fs[f].outside.push_back(i);
        if (fs[f].far < 0 || r > residual(f, fs[f].far)) fs[f].far = i;
        return;
      }
    }
  };

  std::vector<int> first;
  for (int drop = 0; drop <= d; ++drop) {
    std::vector<int> v;
    for (int k = 0; k <= d; ++k)
      if (k != drop) v.push_back(simplex[k]);
    first.push_back(make(std::move(v)));
  }
  {
    std::vector<char> used(n, 0);
    for (int i : simplex) used[i] = 1;
    for (int i = 0; i < n; ++i)
      if (!used[i]) assign(i, first);
  }

  std::vector<int> pending = first;
  while (!pending.empty()) {
    const int f0 = pending.back();
    if (!fs[f0].alive || fs[f0].outside.empty()) {
      pending.pop_back();
      continue;
    }
    const int p = fs[f0].far;

    // Visible region: connected set of simplices with p strictly beyond.
    std::vector<int> visible{f0};
    std::vector<char> seen(fs.size(), 0);
    seen[f0] = 1;
    std::vector<std::pair<std::vector<int>, int>> horizon;  // ridge, visible side
    for (std::size_t h = 0; h < visible.size(); ++h) {
      const int f = visible[h];
      for (int k = 0; k < d; ++k) {
        std::vector<int> key = ridge_key(fs[f].v, k);
        const auto& slot = ridges.at(key);
        const int g = slot[0] == f ? slot[1] : slot[0];
        if (g < 0) throw ToleranceConflict("hull lost a neighbour");
        if (residual(g, p) > tol) {
          if (!seen[g]) {
            seen[g] = 1;
            visible.push_back(g);
          }
        } else {
          horizon.emplace_back(std::move(key), f);
        }
      }
    }

    std::vector<int> orphans;
    for (int f : visible) {
      fs[f].alive = false;
      for (int i : fs[f].outside)
        if (i != p) orphans.push_back(i);
      fs[f].outside.clear();
      for (int k = 0; k < d; ++k) unlink(ridge_key(fs[f].v, k), f);
    }
    std::vector<int> created;
    for (auto& [key, f] : horizon) {
      std::vector<int> v = key;
      v.push_back(p);
      created.push_back(make(std::move(v)));
    }
    std::sort(orphans.begin(), orphans.end());
    for (int i : orphans) assign(i, created);
    for (int f : created)
      if (!fs[f].outside.empty()) pending.push_back(f);
  }

  // Merge coplanar simplices and read each facet's support off all points.
  std::map<std::vector<int>, Facet> found;
  std::vector<char> done(fs.size(), 0);
  for (int f = 0; f < static_cast<int>(fs.size()); ++f) {
    if (!fs[f].alive || done[f]) continue;
    done[f] = 1;
    add_supporting(pts, d, fs[f].normal, fs[f].offset, tol, found);
    // Coplanar neighbours (all vertices on this hyperplane) yield the same facet.
    std::vector<int> stack{f};
    while (!stack.empty()) {
      const int g = stack.back();
      stack.pop_back();
      for (int k = 0; k < d; ++k) {
        const auto& slot = ridges.at(ridge_key(fs[g].v, k));
        const int h = slot[0] == g ? slot[1] : slot[0];
        if (h < 0 || done[h]) continue;
        bool same = fs[h].normal.dot(fs[f].normal) > 0;
        for (int i : fs[h].v) same = same && std::abs(residual(f, i)) <= tol;
        if (!same) continue;
        done[h] = 1;
        stack.push_back(h);
      }
    }
  }
  if (found.empty()) throw DegenerateInput("no supporting hyperplanes found");
  return assemble(pts, d, found, tol);
}

}  // namespace

namespace detail {

VPolytope hull_by_enumeration(const std::vector<Point>& pts, double tol) {
  const int n = static_cast<int>(pts.size());
  const int d = static_cast<int>(pts[0].size());
  std::map<std::vector<int>, Facet> found;
  std::vector<double> r(n);
  for_each_subset(n, d, [&](std::span<const int> ids) {
    Point normal;
    double offset;
    if (!linalg::hyperplane_through(pts, ids, normal, offset)) return;
    int pos = 0, neg = 0;
    for (int i = 0; i < n; ++i) {
      r[i] = normal.dot(pts[i]) - offset;
      if (r[i] > 10 * tol) ++pos;
      if (r[i] < -10 * tol) ++neg;
      if (pos > 0 && neg > 0) return;
    }
    if (pos > 0) {
      normal = -normal;
      offset = -offset;
    }
    add_supporting(pts, d, normal, offset, tol, found);
  });
  if (found.empty()) throw DegenerateInput("no supporting hyperplanes found");
  return assemble(pts, d, found, tol);
}

}  // namespace detail


VPolytope convex_hull(const std::vector<Point>& points, double tol) {
  if (points.empty()) throw DegenerateInput("empty point set");
  const int d = static_cast<int>(points[0].size());
  if (d < 1 || d > 8) throw UnsupportedDimension("dimension must be in 1..8");
  for (const auto& p : points) {
    if (p.size() != d) throw DegenerateInput("points have mixed dimensions");
    if (!p.allFinite()) throw DegenerateInput("non-finite coordinate");
  }
  std::vector<int> keep = dedupe_points(points, tol);
  std::vector<Point> pts;
  pts.reserve(keep.size());
  for (int i : keep) pts.push_back(points[i]);
  if (static_cast<int>(pts.size()) < d + 1 || linalg::affine_dimension(pts, tol) < d)
    throw DegenerateInput("points are not full-dimensional");
  if (d == 1) return hull_1d(pts, tol);
  if (d == 2) return hull_2d(pts, tol);
  return hull_nd(pts, d, tol);
}

VPolytope polar_dual(const VPolytope& p) {
  if (!p.origin_interior()) throw OriginNotInterior("polar dual needs the origin in the interior");
  const int d = p.dim();
  std::vector<Point> verts;
  verts.reserve(p.facets().size());
  for (const auto& f : p.facets()) verts.push_back(f.normal / f.offset);
  std::vector<Facet> facets(p.vertices().size());
  for (std::size_t v = 0; v < p.vertices().size(); ++v) {
    const double r = p.vertices()[v].norm();
    facets[v].normal = p.vertices()[v] / r;
    facets[v].offset = 1.0 / r;
  }
  for (std::size_t f = 0; f < p.facets().size(); ++f)
    for (int v : p.facets()[f].vertex_ids) facets[v].vertex_ids.push_back(static_cast<int>(f));
  return VPolytope::from_incidence(d, std::move(verts), std::move(facets), p.tol());
}

bool is_bounded(const HPolytope& h, double tol) {
  if (static_cast<int>(h.normals.size()) < h.dim + 1) return false;
  try {
    VPolytope n = convex_hull(h.normals, tol);
    return n.origin_interior();
  } catch (const DegenerateInput&) {
    return false;
  }
}

VPolytope to_vpolytope(const HPolytope& h, double tol) {
  const int d = h.dim;
  const int m = static_cast<int>(h.normals.size());
  if (static_cast<int>(h.bounds.size()) != m) throw DegenerateInput("normals/bounds size mismatch");
  if (!is_bounded(h, tol)) throw Unbounded("halfspaces do not bound a polytope");
  if (std::all_of(h.bounds.begin(), h.bounds.end(), [](double b) { return b > 0; })) {
    // Origin strictly inside: the polytope is the polar of conv{u_i / b_i}.
    std::vector<Point> scaled;
    for (int i = 0; i < m; ++i) scaled.push_back(h.normals[i] / h.bounds[i]);
    const VPolytope dual = convex_hull(scaled, tol);
    if (dual.origin_interior()) return polar_dual(dual);
  }
  std::vector<Point> verts;
  Matrix a(d, d);
  Point rhs(d);
  for_each_subset(m, d, [&](std::span<const int> ids) {
    for (int r = 0; r < d; ++r) {
      a.row(r) = h.normals[ids[r]].transpose();
      rhs[r] = h.bounds[ids[r]];
    }
    Eigen::FullPivLU<Matrix> lu(a);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) return;
    Point x = lu.solve(rhs);
    for (int i = 0; i < m; ++i)
      if (h.normals[i].dot(x) - h.bounds[i] > tol) return;
    for (const auto& v : verts)
      if ((v - x).lpNorm<Eigen::Infinity>() <= tol) return;
    verts.push_back(x);
  });
  std::map<std::vector<int>, Facet> found;
  for (int i = 0; i < m; ++i) {
    std::vector<int> on;
    for (int v = 0; v < static_cast<int>(verts.size()); ++v)
      if (std::abs(h.normals[i].dot(verts[v]) - h.bounds[i]) <= tol) on.push_back(v);
    if (found.count(on)) continue;
    if (linalg::affine_dimension(verts, on, tol) != d - 1) continue;  // redundant halfspace
    found.emplace(on, Facet{h.normals[i], h.bounds[i], on});
  }
  std::vector<Facet> facets;
  for (auto& [ids, f] : found) facets.push_back(std::move(f));
  return VPolytope::from_incidence(d, std::move(verts), std::move(facets), tol);
}

namespace planar {

std::vector<int> hull_indices(std::span<const double> xs, std::span<const double> ys,
                              double tol) {
  const int n = static_cast<int>(xs.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return xs[a] < xs[b] || (xs[a] == xs[b] && (ys[a] < ys[b] || (ys[a] == ys[b] && a < b)));
  });
  if (n < 3) return idx;
  // Pops b when c does not turn strictly left of a->b by more than tol.
  auto drop = [&](int a, int b, int c) {
    const double ux = xs[b] - xs[a], uy = ys[b] - ys[a];
    const double vx = xs[c] - xs[a], vy = ys[c] - ys[a];
    const double cross = ux * vy - uy * vx;
    return cross <= tol * std::hypot(vx, vy);
  };
  std::vector<int> h(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && drop(h[k - 2], h[k - 1], idx[i])) --k;
    h[k++] = idx[i];
  }
  for (int i = n - 2, t = k + 1; i >= 0; --i) {
    while (k >= t && drop(h[k - 2], h[k - 1], idx[i])) --k;
    h[k++] = idx[i];
  }
  h.resize(k - 1);
  return h;
}

double polygon_area(std::span<const double> xs, std::span<const double> ys,
                    std::span<const int> ccw) {
  double a = 0.0;
  const std::size_t m = ccw.size();
  for (std::size_t i = 0; i < m; ++i) {
    const int p = ccw[i], q = ccw[(i + 1) % m];
    a += xs[p] * ys[q] - xs[q] * ys[p];
  }
  return 0.5 * a;
}

double polygon_perimeter(std::span<const double> xs, std::span<const double> ys,
                         std::span<const int> ccw) {
  double s = 0.0;
  const std::size_t m = ccw.size();
  for (std::size_t i = 0; i < m; ++i) {
    const int p = ccw[i], q = ccw[(i + 1) % m];
    s += std::hypot(xs[q] - xs[p], ys[q] - ys[p]);
  }
  return s;
}

}  // namespace planar
}  // namespace ballapprox
