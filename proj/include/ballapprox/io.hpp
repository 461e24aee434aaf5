#pragma once

#include "ballapprox/geometry.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ballapprox::io {

/// Text format: "d N", then N lines of d reals; '#' starts a comment.
std::vector<Point> read_points(std::istream& in);
std::vector<Point> read_points_file(const std::string& path);
void write_points(std::ostream& out, const std::vector<Point>& pts);
void write_polytope(std::ostream& out, const VPolytope& p);
void write_polytope_file(const std::string& path, const VPolytope& p);

}  // namespace ballapprox::io
