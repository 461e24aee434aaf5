#include "ballapprox/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ballapprox::linalg {
namespace {

Matrix differences(const std::vector<Point>& pts, std::span<const int> ids) {
  const Point& base = pts[ids[0]];
  Matrix m(base.size(), static_cast<Eigen::Index>(ids.size()) - 1);
  for (std::size_t i = 1; i < ids.size(); ++i) m.col(i - 1) = pts[ids[i]] - base;
  return m;
}

int rank_of(const Matrix& m, double tol) {
  if (m.cols() == 0 || m.rows() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > tol) ++r;
  return r;
}

}  // namespace

int affine_dimension(const std::vector<Point>& pts, std::span<const int> ids, double tol) {
  if (ids.empty()) return -1;
  if (ids.size() == 1) return 0;
  return rank_of(differences(pts, ids), tol);
}

int affine_dimension(const std::vector<Point>& pts, double tol) {
  std::vector<int> ids(pts.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  return affine_dimension(pts, ids, tol);
}

bool hyperplane_through(const std::vector<Point>& pts, std::span<const int> ids, Point& normal,
                        double& offset, double tol) {
  const Eigen::Index d = pts[ids[0]].size();
  if (static_cast<Eigen::Index>(ids.size()) != d) return false;
  if (d == 1) {
    normal = Point::Ones(1);
    offset = pts[ids[0]][0];
    return true;
  }
  // Null vector of the (d-1) x d difference matrix.
  Matrix a = differences(pts, ids).transpose();
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s[d - 2] <= tol * std::max(1.0, s[0])) return false;
  normal = svd.matrixV().col(d - 1);
  normal.normalize();
  offset = normal.dot(pts[ids[0]]);
  return true;
}

double simplex_volume(const std::vector<Point>& pts, std::span<const int> ids) {
  const int k = static_cast<int>(ids.size()) - 1;
  if (k <= 0) return 1.0;
  Matrix e = differences(pts, ids);
  double det;
  if (e.rows() == k) {
    det = std::abs(e.determinant());
  } else {
    det = std::sqrt(std::max(0.0, (e.transpose() * e).determinant()));
  }
  return det / factorial(k);
}

Matrix affine_basis(const std::vector<Point>& pts, std::span<const int> ids, double tol) {
  if (ids.size() < 2) return Matrix(pts[ids[0]].size(), 0);
  Matrix m = differences(pts, ids);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > tol) ++r;
  return svd.matrixU().leftCols(r);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace ballapprox::linalg
