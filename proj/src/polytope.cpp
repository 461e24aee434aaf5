#include "ballapprox/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace ballapprox {

std::vector<long> FaceLattice::fvector() const {
  std::vector<long> f;
  f.reserve(faces.size());
  for (const auto& level : faces) f.push_back(static_cast<long>(level.size()));
  return f;
}

bool in_vertex_side_range(int d, int k) { return k >= 0 && k <= d / 2; }
bool in_facet_side_range(int d, int k) { return k <= d - 1 && k >= (d + 1) / 2 - 1; }

FaceInequalityCheck check_face_inequalities(const FaceLattice& lattice, int k) {
  const int d = lattice.dim();
  const auto f = lattice.fvector();
  FaceInequalityCheck out;
  if (k < 0 || k >= d) return out;
  if (in_vertex_side_range(d, k)) out.vertex_side = f[k] >= f[0];
  if (in_facet_side_range(d, k)) out.facet_side = f[k] >= f[d - 1];
  return out;
}

VPolytope VPolytope::from_incidence(int d, std::vector<Point> vertices, std::vector<Facet> facets,
                                    double tol) {
  VPolytope p;
  p.dim_ = d;
  p.tol_ = tol;
  p.vertices_ = std::move(vertices);
  for (auto& f : facets) std::sort(f.vertex_ids.begin(), f.vertex_ids.end());
  std::sort(facets.begin(), facets.end(),
            [](const Facet& a, const Facet& b) { return a.vertex_ids < b.vertex_ids; });
  p.facets_ = std::move(facets);
  p.build_lattice();
  p.triangulate();

  std::vector<Point> normals;
  std::vector<double> offsets;
  for (const auto& f : p.facets_) {
    normals.push_back(f.normal);
    offsets.push_back(f.offset);
  }
  p.packed_vertices_ = kernels::PackedRows::pack(p.vertices_);
  p.packed_normals_ = kernels::PackedRows::pack(normals);
  p.packed_offsets_ = kernels::pad_like(p.packed_normals_, offsets);
  return p;
}

void VPolytope::build_lattice() {
  const int d = dim_;
  lattice_.faces.assign(d, {});
  lattice_.children.assign(d, {});
  for (const auto& f : facets_) lattice_.faces[d - 1].push_back(f.vertex_ids);

  for (int k = d - 2; k >= 0; --k) {
    const auto& upper = lattice_.faces[k + 1];
    std::map<std::vector<int>, int> index;
    std::map<std::vector<int>, bool> rejected;
    std::vector<std::vector<int>> found;
    std::vector<std::set<int>> kids(upper.size());
    std::vector<int> common;
    for (std::size_t a = 0; a < upper.size(); ++a) {
      for (std::size_t b = a + 1; b < upper.size(); ++b) {
        common.clear();
        std::set_intersection(upper[a].begin(), upper[a].end(), upper[b].begin(), upper[b].end(),
                              std::back_inserter(common));
        if (static_cast<int>(common.size()) < k + 1) continue;
        auto it = index.find(common);
        if (it == index.end()) {
          if (rejected.count(common)) continue;
          if (linalg::affine_dimension(vertices_, common, tol_) != k) {
            rejected[common] = true;
            continue;
          }
          it = index.emplace(common, static_cast<int>(found.size())).first;
          found.push_back(common);
        }
        kids[a].insert(it->second);
        kids[b].insert(it->second);
      }
    }
    // Deterministic order: lexicographic by vertex set.
    std::vector<int> order(found.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return found[x] < found[y]; });
    std::vector<int> rank(found.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r);
    auto& level = lattice_.faces[k];
    for (int i : order) level.push_back(found[i]);
    auto& ch = lattice_.children[k + 1];
    ch.assign(upper.size(), {});
    for (std::size_t a = 0; a < upper.size(); ++a) {
      for (int c : kids[a]) ch[a].push_back(rank[c]);
      std::sort(ch[a].begin(), ch[a].end());
    }
  }
  lattice_.children[0].assign(lattice_.faces[0].size(), {});

  if (d >= 2) {
    ridge_facets_.assign(lattice_.faces[d - 2].size(), {-1, -1});
    for (std::size_t f = 0; f < facets_.size(); ++f)
      for (int r : lattice_.children[d - 1][f]) {
        auto& pr = ridge_facets_[r];
        (pr.first < 0 ? pr.first : pr.second) = static_cast<int>(f);
      }
  }
}

void VPolytope::triangulate() {
  const int d = dim_;
  face_simplices_.assign(d, {});
  for (int k = 0; k < d; ++k) {
    const auto& level = lattice_.faces[k];
    auto& tri = face_simplices_[k];
    tri.resize(level.size());
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (k == 0) {
        tri[i] = {level[i]};
        continue;
      }
      // Fan from the smallest vertex id over the children that avoid it.
      const int apex = level[i].front();
      for (int c : lattice_.children[k][i]) {
        const auto& child = lattice_.faces[k - 1][c];
        if (std::binary_search(child.begin(), child.end(), apex)) continue;
        for (const auto& s : face_simplices_[k - 1][c]) {
          std::vector<int> simplex;
          simplex.reserve(s.size() + 1);
          simplex.push_back(apex);
          simplex.insert(simplex.end(), s.begin(), s.end());
          tri[i].push_back(std::move(simplex));
        }
      }
    }
  }

  facet_areas_.assign(facets_.size(), 0.0);
  surface_area_ = 0.0;
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    facet_areas_[f] = face_volume(d - 1, f);
    surface_area_ += facet_areas_[f];
  }
  const Point c = vertex_centroid();
  const double dfact = linalg::factorial(d);
  volume_ = 0.0;
  Matrix m(d, d);
  for (std::size_t f = 0; f < facets_.size(); ++f)
    for (const auto& s : face_simplices_[d - 1][f]) {
      for (int j = 0; j < d; ++j) m.col(j) = vertices_[s[j]] - c;
      volume_ += std::abs(m.determinant()) / dfact;
    }
}

double VPolytope::face_volume(int k, std::size_t i) const {
  double v = 0.0;
  for (const auto& s : face_simplices_[k][i]) v += linalg::simplex_volume(vertices_, s);
  return v;
}

double VPolytope::max_vertex_norm() const {
  double m = 0.0;
  for (const auto& v : vertices_) m = std::max(m, v.norm());
  return m;
}

double VPolytope::min_facet_offset() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : facets_) m = std::min(m, f.offset);
  return m;
}

Point VPolytope::vertex_centroid() const {
  Point c = Point::Zero(dim_);
  for (const auto& v : vertices_) c += v;
  return c / static_cast<double>(vertices_.size());
}

double VPolytope::max_facet_residual(const Point& x) const {
  return kernels::max_residual(packed_normals_, packed_offsets_, x);
}

double volume(const VPolytope& p) { return p.volume(); }
double surface_area(const VPolytope& p) { return p.surface_area(); }

double support(const VPolytope& p, const Point& u) {
  return kernels::max_dot(p.packed_vertices(), u);
}

double radial(const VPolytope& p, const Point& u) {
  if (!p.origin_interior()) throw OriginNotInterior("radial function needs an interior origin");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : p.facets()) {
    const double c = f.normal.dot(u);
    if (c > 0) best = std::min(best, f.offset / c);
  }
  return best;
}

Projection project(const VPolytope& p, const Matrix& frame) {
  Projection out;
  const int j = static_cast<int>(frame.cols());
  out.dim = j;
  if (j == p.dim()) {
    out.body = p;
    return out;
  }
  std::vector<Point> pts;
  pts.reserve(p.vertices().size());
  for (const auto& v : p.vertices()) pts.push_back(frame.transpose() * v);
  if (linalg::affine_dimension(pts, p.tol()) < j) {
    out.degenerate = true;
    return out;
  }
  try {
    out.body = convex_hull(pts, p.tol());
  } catch (const DegenerateInput&) {
    out.degenerate = true;
  }
  return out;
}

double projected_volume(const VPolytope& p, const Matrix& frame) {
  const int j = static_cast<int>(frame.cols());
  if (j == p.dim()) return p.volume();
  const auto& vs = p.vertices();
  if (j == 1) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& v : vs) {
      const double t = frame.col(0).dot(v);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    return hi - lo;
  }
  if (j == 2) {
    std::vector<double> xs(vs.size()), ys(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) {
      xs[i] = frame.col(0).dot(vs[i]);
      ys[i] = frame.col(1).dot(vs[i]);
    }
    auto ccw = planar::hull_indices(xs, ys);
    if (ccw.size() < 3) return 0.0;
    return planar::polygon_area(xs, ys, ccw);
  }
  return project(p, frame).volume();
}

}  // namespace ballapprox
