#include "ballapprox/io.hpp"

#include "ballapprox/errors.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace ballapprox::io {
namespace {

// Whitespace-separated tokens with '#' comments stripped.
std::vector<std::string> tokens(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string t;
    while (ls >> t) out.push_back(t);
  }
  return out;
}

double to_double(const std::string& t) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + t + "'");
  }
  if (used != t.size()) throw ParseError("not a number: '" + t + "'");
  return v;
}

long to_count(const std::string& t) {
  const double v = to_double(t);
  if (v < 0 || v != static_cast<double>(static_cast<long>(v)))
    throw ParseError("expected a nonnegative integer, got '" + t + "'");
  return static_cast<long>(v);
}

}  // namespace

std::vector<Point> read_points(std::istream& in) {
  const auto tok = tokens(in);
  if (tok.size() < 2) throw ParseError("missing 'd N' header");
  const long d = to_count(tok[0]);
  const long n = to_count(tok[1]);
  if (d < 1) throw ParseError("dimension must be positive");
  if (tok.size() != static_cast<std::size_t>(2 + d * n))
    throw ParseError("expected " + std::to_string(d * n) + " coordinates, found " +
                     std::to_string(tok.size() - 2));
  std::vector<Point> pts(n, Point(d));
  for (long i = 0; i < n; ++i)
    for (long c = 0; c < d; ++c) pts[i][c] = to_double(tok[2 + i * d + c]);
  return pts;
}

std::vector<Point> read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_points(in);
}

void write_points(std::ostream& out, const std::vector<Point>& pts) {
  const long d = pts.empty() ? 0 : pts.front().size();
  out << d << ' ' << pts.size() << '\n';
  out << std::setprecision(17);
  for (const auto& p : pts) {
    for (long c = 0; c < d; ++c) out << (c ? " " : "") << p[c];
    out << '\n';
  }
}

void write_polytope(std::ostream& out, const VPolytope& p) {
  if (p.vertices().empty()) {
    out << p.dim() << " 0\n";
    return;
  }
  write_points(out, p.vertices());
}

void write_polytope_file(const std::string& path, const VPolytope& p) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  write_polytope(out, p);
}

}  // namespace ballapprox::io
