#include "ballapprox/metrics.hpp"

#include "ballapprox/ball.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace ballapprox {
namespace {

constexpr int kPointsPerFrame = 32;

// Uniform points on the boundary of P: pick a facet simplex with probability
// proportional to its (d-1)-volume, then uniform barycentric weights.
class BoundarySampler {
 public:
  explicit BoundarySampler(const VPolytope& p) : p_(p) {
    for (std::size_t f = 0; f < p.facets().size(); ++f)
      for (const auto& s : p.facet_simplices(f)) {
        total_ += linalg::simplex_volume(p.vertices(), s);
        cumulative_.push_back(total_);
        simplices_.push_back(&s);
      }
  }
  double total() const { return total_; }
  Point draw(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, total_);
    const double t = u(rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), t);
    const std::size_t i = std::min<std::size_t>(it - cumulative_.begin(), simplices_.size() - 1);
    const auto& s = *simplices_[i];
    const auto w = sampling::barycentric(rng, static_cast<int>(s.size()));
    Point x = Point::Zero(p_.dim());
    for (std::size_t k = 0; k < s.size(); ++k) x += w[k] * p_.vertices()[s[k]];
    return x;
  }

 private:
  const VPolytope& p_;
  double total_ = 0.0;
  std::vector<double> cumulative_;
  std::vector<const std::vector<int>*> simplices_;
};

// Membership test for the projection of P onto a j-frame.
class ProjectedBody {
 public:
  ProjectedBody(const VPolytope& p, const Matrix& frame) : j_(static_cast<int>(frame.cols())) {
    if (j_ == p.dim()) {
      full_ = &p;
      return;
    }
    const auto& vs = p.vertices();
    if (j_ == 1) {
      lo_ = std::numeric_limits<double>::infinity();
      hi_ = -lo_;
      for (const auto& v : vs) {
        const double t = frame.col(0).dot(v);
        lo_ = std::min(lo_, t);
        hi_ = std::max(hi_, t);
      }
      return;
    }
    if (j_ == 2) {
      std::vector<double> xs(vs.size()), ys(vs.size());
      for (std::size_t i = 0; i < vs.size(); ++i) {
        xs[i] = frame.col(0).dot(vs[i]);
        ys[i] = frame.col(1).dot(vs[i]);
      }
      auto ccw = planar::hull_indices(xs, ys);
      if (ccw.size() < 3) {
        empty_ = true;
        return;
      }
      for (std::size_t e = 0; e < ccw.size(); ++e) {
        const int a = ccw[e], b = ccw[(e + 1) % ccw.size()];
        double nx = ys[b] - ys[a], ny = xs[a] - xs[b];
        const double len = std::hypot(nx, ny);
        nx /= len;
        ny /= len;
        edges_.push_back({nx, ny, nx * xs[a] + ny * ys[a]});
      }
      return;
    }
    Projection proj = project(p, frame);
    if (proj.degenerate) {
      empty_ = true;
      return;
    }
    owned_ = std::move(*proj.body);
    full_ = &owned_;
  }

  bool contains(const Point& y) const {
    if (empty_) return false;
    if (full_) return full_->max_facet_residual(y) <= 0.0;
    if (j_ == 1) return y[0] >= lo_ && y[0] <= hi_;
    for (const auto& e : edges_)
      if (e[0] * y[0] + e[1] * y[1] > e[2]) return false;
    return true;
  }

 private:
  int j_;
  bool empty_ = false;
  const VPolytope* full_ = nullptr;
  VPolytope owned_;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<std::array<double, 3>> edges_;
};

MetricReport exact_report(double v) {
  MetricReport r;
  r.value = exact_value(v);
  r.method = Method::exact;
  return r;
}

void require_interior(const VPolytope& p, const char* what) {
  if (!p.origin_interior()) throw OriginNotInterior(std::string(what) + " needs an interior origin");
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::mc_sphere: return "mc_sphere";
    case Method::mc_grassmann: return "mc_grassmann";
    case Method::mc_volume: return "mc_volume";
    case Method::bracket: return "bracket";
  }
  return "unknown";
}

std::string_view nesting_name(Nesting n) {
  switch (n) {
    case Nesting::inscribed: return "inscribed";
    case Nesting::circumscribed: return "circumscribed";
    case Nesting::general: return "general";
  }
  return "unknown";
}

Nesting nesting(const VPolytope& p) {
  if (p.max_vertex_norm() <= 1.0 + kNestingTol) return Nesting::inscribed;
  if (p.min_facet_offset() >= 1.0 - kNestingTol) return Nesting::circumscribed;
  return Nesting::general;
}

MCEstimate mean_width(const VPolytope& p, long long samples, std::uint64_t seed) {
  const int d = p.dim();
  const auto& rows = p.packed_vertices();
  return chunked_estimate(seed, samples, [&](Rng& rng, long long n, RunningStats& st) {
    for (long long i = 0; i < n; ++i) {
      const Point u = sampling::sphere(rng, d);
      st.add(kernels::max_dot(rows, u) + kernels::max_dot(rows, -u));
    }
  });
}

double mean_width_exact_lowdim(const VPolytope& p) {
  if (p.dim() == 2) return p.surface_area() / std::numbers::pi;
  if (p.dim() != 3) throw UnsupportedDimension("exact mean width needs d = 2 or 3");
  // w = (1/4pi) sum_e length(e) * angle between the normals of the two facets at e.
  double s = 0.0;
  const auto& edges = p.lattice().faces[1];
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [f1, f2] = p.ridge_facets(e);
    const double c = std::clamp(p.facets()[f1].normal.dot(p.facets()[f2].normal), -1.0, 1.0);
    s += p.face_volume(1, e) * std::acos(c);
  }
  return s / (4.0 * std::numbers::pi);
}

std::optional<double> intrinsic_volume_exact(const VPolytope& p, int j) {
  const int d = p.dim();
  if (j == 0) return 1.0;
  if (j == d) return p.volume();
  if (j == d - 1) return 0.5 * p.surface_area();
  if (j == d - 2) {
    // Ridge volume times the normalized external angle 2pi-fraction.
    double s = 0.0;
    const auto& ridges = p.lattice().faces[d - 2];
    for (std::size_t r = 0; r < ridges.size(); ++r) {
      auto [f1, f2] = p.ridge_facets(r);
      const double c = std::clamp(p.facets()[f1].normal.dot(p.facets()[f2].normal), -1.0, 1.0);
      s += p.face_volume(d - 2, r) * std::acos(c) / (2.0 * std::numbers::pi);
    }
    return s;
  }
  return std::nullopt;
}

MCEstimate intrinsic_volume(const VPolytope& p, int j, long long samples, std::uint64_t seed) {
  const int d = p.dim();
  if (j < 1 || j > d) throw ConfigError("intrinsic volume index out of range");
  if (j == d) {
    MCEstimate e = exact_value(p.volume());
    e.seed = seed;
    return e;
  }
  const double flag = flag_coefficient(d, j);
  MCEstimate e = chunked_estimate(seed, samples, [&](Rng& rng, long long n, RunningStats& st) {
    for (long long i = 0; i < n; ++i) st.add(projected_volume(p, sampling::frame(rng, d, j)));
  });
  return scale_estimate(e, flag);
}

MCEstimate intrinsic_volume_best(const VPolytope& p, int j, long long samples,
                                 std::uint64_t seed) {
  if (auto v = intrinsic_volume_exact(p, j)) {
    MCEstimate e = exact_value(*v);
    e.seed = seed;
    return e;
  }
  return intrinsic_volume(p, j, samples, seed);
}

MetricReport delta_j(const VPolytope& p, int j, long long samples, std::uint64_t seed,
                     std::optional<Nesting> nested) {
  const int d = p.dim();
  if (j < 0 || j > d) throw ConfigError("delta_j index out of range");
  if (j == 0) return exact_report(0.0);
  const Nesting n = nested.value_or(nesting(p));
  if (n != Nesting::general) {
    MCEstimate v = intrinsic_volume_best(p, j, samples, seed);
    MetricReport r;
    r.value = v;
    r.value.mean = std::abs(ball_intrinsic_volume(d, j) - v.mean);
    r.method = v.samples == 0 ? Method::exact : Method::mc_grassmann;
    return r;
  }
  // Projected symmetric difference, estimated per frame on a j-ball that
  // contains both projections.
  const double radius = std::max(1.0, p.max_vertex_norm());
  const double region = kappa(j) * std::pow(radius, j);
  const long long frames = std::max<long long>(1, samples / kPointsPerFrame);
  MCEstimate e = chunked_estimate(seed, frames, [&](Rng& rng, long long count, RunningStats& st) {
    for (long long f = 0; f < count; ++f) {
      const Matrix frame = sampling::frame(rng, d, j);
      const ProjectedBody body(p, frame);
      int hits = 0;
      for (int s = 0; s < kPointsPerFrame; ++s) {
        const Point y = sampling::ball(rng, j, radius);
        if (body.contains(y) != (y.norm() <= 1.0)) ++hits;
      }
      st.add(region * hits / kPointsPerFrame);
    }
  });
  MetricReport r;
  r.value = scale_estimate(e, flag_coefficient(d, j));
  r.method = Method::mc_grassmann;
  return r;
}

MetricReport delta_sigma(const VPolytope& p, long long samples, std::uint64_t seed) {
  MetricReport total = exact_report(0.0);
  total.value.seed = seed;
  for (int j = 1; j <= p.dim(); ++j) {
    MetricReport r = delta_j(p, j, samples, derive_seed(seed, j));
    total.value = add_estimates(total.value, r.value);
    if (r.method != Method::exact) total.method = r.method;
  }
  total.value.seed = seed;
  return total;
}

MetricReport symdiff_ball(const VPolytope& p, long long samples, std::uint64_t seed) {
  const int d = p.dim();
  switch (nesting(p)) {
    case Nesting::inscribed: return exact_report(kappa(d) - p.volume());
    case Nesting::circumscribed: return exact_report(p.volume() - kappa(d));
    case Nesting::general: break;
  }
  const double radius = std::max(1.0, p.max_vertex_norm());
  const double region = kappa(d) * std::pow(radius, d);
  MCEstimate e = chunked_estimate(seed, samples, [&](Rng& rng, long long n, RunningStats& st) {
    for (long long i = 0; i < n; ++i) {
      const Point x = sampling::ball(rng, d, radius);
      st.add(p.contains(x) != (x.norm() <= 1.0) ? 1.0 : 0.0);
    }
  });
  MetricReport r;
  r.value = scale_estimate(e, region);
  r.method = Method::mc_volume;
  return r;
}

BoundarySplit boundary_split(const VPolytope& p, long long samples, std::uint64_t seed) {
  require_interior(p, "boundary split");
  const int d = p.dim();
  const BoundarySampler sampler(p);
  MCEstimate in_ball =
      chunked_estimate(derive_seed(seed, 1), samples, [&](Rng& rng, long long n, RunningStats& st) {
        for (long long i = 0; i < n; ++i) st.add(sampler.draw(rng).norm() <= 1.0 ? 1.0 : 0.0);
      });
  MCEstimate in_poly =
      chunked_estimate(derive_seed(seed, 2), samples, [&](Rng& rng, long long n, RunningStats& st) {
        for (long long i = 0; i < n; ++i) st.add(p.contains(sampling::sphere(rng, d)) ? 1.0 : 0.0);
      });
  const double area = p.surface_area();
  const double sphere = sphere_area(d);
  BoundarySplit out;
  out.dP_in_B = scale_estimate(in_ball, area);
  out.dP_out_B = out.dP_in_B;
  out.dP_out_B.mean = area - out.dP_in_B.mean;
  out.dB_in_P = scale_estimate(in_poly, sphere);
  out.dB_out_P = out.dB_in_P;
  out.dB_out_P.mean = sphere - out.dB_in_P.mean;
  return out;
}

MetricReport surface_area_deviation(const VPolytope& p, long long samples, std::uint64_t seed) {
  require_interior(p, "surface area deviation");
  const int d = p.dim();
  const double sphere = sphere_area(d);
  switch (nesting(p)) {
    case Nesting::inscribed: return exact_report(sphere - p.surface_area());
    case Nesting::circumscribed: return exact_report(p.surface_area() - sphere);
    case Nesting::general: break;
  }
  const BoundarySplit s = boundary_split(p, samples, seed);
  MetricReport r;
  r.value = add_estimates(s.dB_in_P, s.dP_in_B);
  r.value = scale_estimate(r.value, -2.0);
  r.value.mean += sphere + p.surface_area();
  r.value.seed = seed;
  r.method = Method::mc_sphere;
  return r;
}

MCEstimate sphere_sublevel_fraction(const VPolytope& p, double threshold, long long samples,
                                    std::uint64_t seed) {
  const int d = p.dim();
  const auto& rows = p.packed_vertices();
  return chunked_estimate(seed, samples, [&](Rng& rng, long long n, RunningStats& st) {
    for (long long i = 0; i < n; ++i)
      st.add(kernels::max_dot(rows, sampling::sphere(rng, d)) <= threshold ? 1.0 : 0.0);
  });
}

MCEstimate boundary_mass_outside(const VPolytope& p, double t, long long samples,
                                 std::uint64_t seed) {
  if (p.min_facet_offset() < 1.0 - kNestingTol)
    throw NotCircumscribed("boundary mass outside (1+t)B needs B inside P");
  const BoundarySampler sampler(p);
  const double r = 1.0 + t;
  MCEstimate e = chunked_estimate(seed, samples, [&](Rng& rng, long long n, RunningStats& st) {
    for (long long i = 0; i < n; ++i) st.add(sampler.draw(rng).norm() > r ? 1.0 : 0.0);
  });
  return scale_estimate(e, sampler.total());
}

}  // namespace ballapprox
