#pragma once

#include "ballapprox/geometry.hpp"
#include "ballapprox/sampling.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ballapprox {

enum class GenKind { random_inscribed, circumscribed_tangent, polar_of_inscribed, fixture };
enum class FixtureId { simplex, cube, cross, regular_ngon, inscribed_cube, circumscribed_cube };

std::string_view gen_kind_name(GenKind k);
std::string_view fixture_name(FixtureId f);
GenKind parse_gen_kind(std::string_view s);   // throws ConfigError
FixtureId parse_fixture(std::string_view s);  // throws ConfigError

struct GenSpec {
  int d = 2;
  int n = 0;  // points (inscribed), normals (tangent), ngon vertex count
  GenKind kind = GenKind::random_inscribed;
  std::optional<FixtureId> fixture;
  std::uint64_t seed = 0;
  std::optional<double> jitter;  // fixtures only: Gaussian vertex noise, re-projected for sphere fixtures
};

/// Inscribed fixtures (simplex, cross, regular_ngon, inscribed_cube) have all
/// vertices on the unit sphere; cube and circumscribed_cube are [-1,1]^d.
VPolytope make_fixture(FixtureId id, int d, int n = 0, double tol = kDefaultTol);

VPolytope generate(const GenSpec& spec, double tol = kDefaultTol);

/// Hull of the given unit vectors; throws if not full-dimensional.
VPolytope inscribed_hull(const std::vector<Point>& sphere_points, double tol = kDefaultTol);
/// Intersection of the tangent halfspaces <u_i, x> <= 1; throws Unbounded if not bounded.
VPolytope tangent_intersection(const std::vector<Point>& normals, double tol = kDefaultTol);

/// Estimate of N^{2/(d-1)} (2 - E[w(hull of N uniform sphere points)]).
MCEstimate mueller_estimate(int d, int N, int trials, long long samples, std::uint64_t seed);

}  // namespace ballapprox
