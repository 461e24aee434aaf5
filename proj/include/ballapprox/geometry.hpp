#pragma once

// Exact d-dimensional polytopes in vertex representation: hull, face lattice,
// polar duality, volumes by simplicial decomposition, support/radial queries.

#include "ballapprox/errors.hpp"
#include "ballapprox/kernels.hpp"
#include "ballapprox/linalg.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ballapprox {

inline constexpr double kDefaultTol = 1e-9;

/// Facet hyperplane <normal, x> = offset with outward unit normal.
struct Facet {
  Point normal;
  double offset = 0.0;
  std::vector<int> vertex_ids;  // sorted
};

/// All proper faces, by dimension. faces[k][i] is a sorted vertex-id set.
struct FaceLattice {
  std::vector<std::vector<std::vector<int>>> faces;
  /// children[k][i] indexes the (k-1)-faces contained in faces[k][i].
  std::vector<std::vector<std::vector<int>>> children;

  int dim() const { return static_cast<int>(faces.size()); }
  std::vector<long> fvector() const;
};

/// Hinman's f-vector inequalities, evaluated only where they apply.
struct FaceInequalityCheck {
  std::optional<bool> vertex_side;  // f_k >= f_0, k <= floor(d/2)
  std::optional<bool> facet_side;   // f_k >= f_{d-1}, k >= ceil(d/2)-1
};

FaceInequalityCheck check_face_inequalities(const FaceLattice& lattice, int k);
bool in_vertex_side_range(int d, int k);
bool in_facet_side_range(int d, int k);

/// Immutable after construction; safe to share across threads.
class VPolytope {
 public:
  VPolytope() = default;  // empty placeholder; real instances come from the factories
  /// Builds from already-known extreme points and facets (facet vertex ids may
  /// be unsorted). Used by the hull, polar duality and H->V conversion.
  static VPolytope from_incidence(int d, std::vector<Point> vertices,
                                  std::vector<Facet> facets, double tol);

  int dim() const { return dim_; }
  double tol() const { return tol_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const FaceLattice& lattice() const { return lattice_; }
  std::vector<long> fvector() const { return lattice_.fvector(); }

  double volume() const { return volume_; }
  double surface_area() const { return surface_area_; }
  double facet_area(std::size_t i) const { return facet_areas_[i]; }
  /// (d-1)-simplices (d vertex ids each) triangulating facet i.
  const std::vector<std::vector<int>>& facet_simplices(std::size_t i) const {
    return face_simplices_[dim_ - 1][i];
  }
  /// k-simplices (k+1 vertex ids each) triangulating faces[k][i].
  const std::vector<std::vector<int>>& face_simplices(int k, std::size_t i) const {
    return face_simplices_[k][i];
  }
  /// k-dimensional volume of faces[k][i].
  double face_volume(int k, std::size_t i) const;
  /// Indices of the two facets containing ridge faces[d-2][i].
  std::pair<int, int> ridge_facets(std::size_t i) const { return ridge_facets_[i]; }

  double max_vertex_norm() const;
  double min_facet_offset() const;
  bool origin_interior() const { return min_facet_offset() > tol_; }
  Point vertex_centroid() const;

  const kernels::PackedRows& packed_vertices() const { return packed_vertices_; }
  const kernels::PackedRows& packed_normals() const { return packed_normals_; }
  std::span<const double> packed_offsets() const { return packed_offsets_; }

  /// <normal, x> - offset maximized over facets; <= 0 iff x in P (up to tol).
  double max_facet_residual(const Point& x) const;
  bool contains(const Point& x, double slack = 0.0) const {
    return max_facet_residual(x) <= slack;
  }

 private:
  void build_lattice();
  void triangulate();

  int dim_ = 0;
  double tol_ = kDefaultTol;
  std::vector<Point> vertices_;
  std::vector<Facet> facets_;
  FaceLattice lattice_;
  std::vector<std::vector<std::vector<std::vector<int>>>> face_simplices_;
  std::vector<std::pair<int, int>> ridge_facets_;
  std::vector<double> facet_areas_;
  double volume_ = 0.0;
  double surface_area_ = 0.0;
  kernels::PackedRows packed_vertices_;
  kernels::PackedRows packed_normals_;
  std::vector<double> packed_offsets_;
};

/// Halfspace intersection {x : <u_i, x> <= b_i}.
struct HPolytope {
  int dim = 0;
  std::vector<Point> normals;  // unit
  std::vector<double> bounds;
};

VPolytope convex_hull(const std::vector<Point>& points, double tol = kDefaultTol);
VPolytope polar_dual(const VPolytope& p);

namespace detail {
/// Reference hull by testing every d-subset; exponential, for tests only.
VPolytope hull_by_enumeration(const std::vector<Point>& points, double tol = kDefaultTol);
}  // namespace detail

/// True when the normals positively span R^d (every direction has a finite support value).
bool is_bounded(const HPolytope& h, double tol = kDefaultTol);
VPolytope to_vpolytope(const HPolytope& h, double tol = kDefaultTol);

double volume(const VPolytope& p);
double surface_area(const VPolytope& p);
double support(const VPolytope& p, const Point& u);
double radial(const VPolytope& p, const Point& u);

/// Image of P under an orthonormal j-frame (columns), in frame coordinates.
struct Projection {
  int dim = 0;
  bool degenerate = false;           // image not j-dimensional
  std::optional<VPolytope> body;     // empty when degenerate
  double volume() const { return body ? body->volume() : 0.0; }
};

Projection project(const VPolytope& p, const Matrix& frame);
/// vol_j(P|H) without building the face lattice for j <= 2.
double projected_volume(const VPolytope& p, const Matrix& frame);

namespace planar {
/// Counter-clockwise hull of 2-D points (indices). Points within `tol` of a
/// hull edge line are dropped.
std::vector<int> hull_indices(std::span<const double> xs, std::span<const double> ys,
                              double tol = 0.0);
double polygon_area(std::span<const double> xs, std::span<const double> ys,
                    std::span<const int> ccw);
double polygon_perimeter(std::span<const double> xs, std::span<const double> ys,
                         std::span<const int> ccw);
}  // namespace planar

}  // namespace ballapprox
