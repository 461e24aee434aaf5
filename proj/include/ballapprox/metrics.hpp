#pragma once

// Deviation functionals between a polytope and the unit ball B_d, exact where
// a closed route exists and Monte Carlo otherwise.

#include "ballapprox/geometry.hpp"
#include "ballapprox/sampling.hpp"

#include <optional>
#include <string_view>
#include <utility>

namespace ballapprox {

enum class Method { exact, mc_sphere, mc_grassmann, mc_volume, bracket };
std::string_view method_name(Method m);

struct MetricReport {
  MCEstimate value;
  Method method = Method::exact;
  std::optional<std::pair<double, double>> bracket;  // Hausdorff inscribed branch
  bool certified = true;  // false for sampled general-position Hausdorff values
};

enum class Nesting { inscribed, circumscribed, general };
std::string_view nesting_name(Nesting n);

inline constexpr double kNestingTol = 1e-9;
/// P in B iff max|v| <= 1 + tol; B in P iff min facet offset >= 1 - tol; both => inscribed.
Nesting nesting(const VPolytope& p);

MCEstimate mean_width(const VPolytope& p, long long samples, std::uint64_t seed);
/// d = 2: perimeter / pi. d = 3: (1/4pi) sum over edges of length * exterior dihedral angle.
double mean_width_exact_lowdim(const VPolytope& p);

/// Kubota estimate; j = d is exact.
MCEstimate intrinsic_volume(const VPolytope& p, int j, long long samples, std::uint64_t seed);
/// Exact V_j when a closed route exists: j = 0, j >= d-2, or j = 1 with d <= 3.
std::optional<double> intrinsic_volume_exact(const VPolytope& p, int j);
/// Exact when available, otherwise Kubota Monte Carlo.
MCEstimate intrinsic_volume_best(const VPolytope& p, int j, long long samples,
                                 std::uint64_t seed);

MetricReport delta_j(const VPolytope& p, int j, long long samples, std::uint64_t seed,
                     std::optional<Nesting> nested = std::nullopt);
MetricReport delta_sigma(const VPolytope& p, long long samples, std::uint64_t seed);
MetricReport symdiff_ball(const VPolytope& p, long long samples, std::uint64_t seed);

struct BoundarySplit {
  MCEstimate dP_in_B, dP_out_B, dB_in_P, dB_out_P;
};
BoundarySplit boundary_split(const VPolytope& p, long long samples, std::uint64_t seed);
MetricReport surface_area_deviation(const VPolytope& p, long long samples, std::uint64_t seed);

/// Euclidean distance from x to conv(pts) (Wolfe's minimum-norm-point algorithm).
double distance_to_hull(const std::vector<Point>& pts, const Point& x);
double distance_to_polytope(const VPolytope& p, const Point& x);
MetricReport hausdorff_ball(const VPolytope& p, long long refine_samples, std::uint64_t seed);

/// Fraction of the sphere where h_P(u) <= threshold.
MCEstimate sphere_sublevel_fraction(const VPolytope& p, double threshold, long long samples,
                                    std::uint64_t seed);
/// (d-1)-measure of the part of the boundary outside (1+t)B_d; requires B_d in P.
MCEstimate boundary_mass_outside(const VPolytope& p, double t, long long samples,
                                 std::uint64_t seed);

}  // namespace ballapprox
