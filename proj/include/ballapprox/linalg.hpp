#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace ballapprox {

/// A point or direction in R^d. Dimension is carried at runtime (d <= 8).
using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace linalg {

/// Affine dimension of the points selected by `ids` (-1 for an empty set).
int affine_dimension(const std::vector<Point>& pts, std::span<const int> ids,
                     double tol = 1e-9);
int affine_dimension(const std::vector<Point>& pts, double tol = 1e-9);

/// Unit normal of the hyperplane through d affinely independent points in R^d.
/// Returns false when the points are affinely dependent.
bool hyperplane_through(const std::vector<Point>& pts, std::span<const int> ids,
                        Point& normal, double& offset, double tol = 1e-12);

/// k-dimensional volume of the simplex with k+1 vertices, via the Gram determinant.
double simplex_volume(const std::vector<Point>& pts, std::span<const int> ids);

/// Orthonormal basis (columns) of the affine hull directions of the selected points.
Matrix affine_basis(const std::vector<Point>& pts, std::span<const int> ids,
                    double tol = 1e-9);

double factorial(int n);

}  // namespace linalg
}  // namespace ballapprox
