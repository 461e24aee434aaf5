#include "ballapprox/ball.hpp"
#include "ballapprox/bounds.hpp"
#include "ballapprox/constructions.hpp"
#include "ballapprox/metrics.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <numbers>

using namespace ballapprox;
using testutil::pt;

namespace {

constexpr double kPi = std::numbers::pi;

VPolytope square_in() { return convex_hull(testutil::cross_points(2)); }
VPolytope square_out() { return convex_hull(testutil::cube_points(2)); }
VPolytope cube3() { return convex_hull(testutil::cube_points(3)); }

VPolytope shifted(const VPolytope& p, const Point& t) {
  std::vector<Point> v = p.vertices();
  for (auto& x : v) x += t;
  return convex_hull(v);
}

bool within(const MCEstimate& e, double exact, double k = 4.0, double extra = 0.0) {
  return std::abs(e.mean - exact) <= k * e.std_error + extra;
}

// Area of (P xor B) in the plane on a grid of spacing h.
double grid_symdiff(const VPolytope& p, double h) {
  const double r = std::max(1.0, p.max_vertex_norm());
  long hits = 0;
  for (double x = -r + h / 2; x < r; x += h)
    for (double y = -r + h / 2; y < r; y += h) {
      const Point q = pt({x, y});
      if (p.contains(q) != (q.norm() <= 1.0)) ++hits;
    }
  return hits * h * h;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("nesting classification") {
  CHECK(nesting(square_in()) == Nesting::inscribed);
  CHECK(nesting(square_out()) == Nesting::circumscribed);
  CHECK(nesting(shifted(square_in(), pt({0.1, 0.0}))) == Nesting::general);
}

TEST_CASE("mean width of planar polygons") {
  CHECK(mean_width_exact_lowdim(square_in()) == doctest::Approx(4 * std::sqrt(2.0) / kPi).epsilon(1e-13));
  CHECK(mean_width_exact_lowdim(convex_hull(testutil::ngon_points(6))) == doctest::Approx(6 / kPi).epsilon(1e-13));
  const MCEstimate e = mean_width(square_in(), 200000, 1);
  CHECK(within(e, 4 * std::sqrt(2.0) / kPi));
  CHECK(e.std_error > 0.0);
}

TEST_CASE("mean width of the cube [-1,1]^3 is 3") {
  CHECK(mean_width_exact_lowdim(cube3()) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(within(mean_width(cube3(), 200000, 2), 3.0));
}

TEST_CASE("exact and sampled mean width agree on random polytopes") {
  for (int s = 0; s < 4; ++s) {
    const VPolytope p = generate(GenSpec{3, 9 + 4 * s, GenKind::random_inscribed, std::nullopt,
                                         static_cast<std::uint64_t>(s), std::nullopt});
    CHECK(within(mean_width(p, 100000, 10 + s), mean_width_exact_lowdim(p)));
  }
}

TEST_CASE("exact mean width needs d <= 3") {
  CHECK_THROWS_AS(mean_width_exact_lowdim(convex_hull(testutil::cross_points(4))), UnsupportedDimension);
}

TEST_CASE("intrinsic volumes of the unit cube") {
  auto pts = testutil::cube_points(3, 0.5);
  for (auto& x : pts) x.array() += 0.5;
  const VPolytope c = convex_hull(pts);
  CHECK(intrinsic_volume_exact(c, 1).value() == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(intrinsic_volume_exact(c, 2).value() == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(intrinsic_volume_exact(c, 0).value() == 1.0);
  const MCEstimate v1 = intrinsic_volume(c, 1, 100000, 3);
  const MCEstimate v2 = intrinsic_volume(c, 2, 100000, 4);
  CHECK(std::abs(v1.mean - 3.0) < 0.03);
  CHECK(std::abs(v2.mean - 3.0) < 0.03);
  const MCEstimate v3 = intrinsic_volume(c, 3, 10, 5);
  CHECK(v3.mean == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(v3.std_error == 0.0);
}

TEST_CASE("Kubota and the exact route agree in d = 4") {
  const VPolytope p = generate(GenSpec{4, 12, GenKind::random_inscribed, std::nullopt, 9, std::nullopt});
  for (int j = 2; j <= 3; ++j)
    CHECK(within(intrinsic_volume(p, j, 20000, 30 + j), intrinsic_volume_exact(p, j).value()));
  CHECK_FALSE(intrinsic_volume_exact(p, 1).has_value());
  // V_1 from the mean width.
  const MCEstimate w = mean_width(p, 100000, 40);
  const MCEstimate v1 = intrinsic_volume(p, 1, 20000, 41);
  const double scale = sphere_area(4) / (2 * kappa(3));
  CHECK(std::abs(v1.mean - scale * w.mean) <= 4 * std::hypot(v1.std_error, scale * w.std_error));
}

TEST_CASE("Kubota consistency on a 96-gon") {
  const VPolytope p = convex_hull(testutil::ngon_points(96));
  const MCEstimate v1 = intrinsic_volume(p, 1, 50000, 7);
  CHECK(std::abs(v1.mean - ball_intrinsic_volume(2, 1)) <= 3 * v1.std_error + 0.01);
  const MCEstimate v2 = intrinsic_volume(p, 2, 10, 8);
  CHECK(std::abs(v2.mean - ball_intrinsic_volume(2, 2)) <= 0.01);
}

TEST_CASE("monotonicity under inclusion") {
  Rng rng(19);
  for (int d = 2; d <= 4; ++d) {
    std::vector<Point> pts;
    for (int i = 0; i < 16; ++i) pts.push_back(sampling::sphere(rng, d));
    const VPolytope q = inscribed_hull(pts);
    pts.resize(d + 5);
    const VPolytope p = inscribed_hull(pts);
    for (int j = 1; j <= d; ++j) {
      const MCEstimate a = intrinsic_volume_best(p, j, 20000, 100 + j);
      const MCEstimate b = intrinsic_volume_best(q, j, 20000, 200 + j);
      CHECK(a.mean <= b.mean + 3 * std::hypot(a.std_error, b.std_error));
    }
  }
}

TEST_CASE("intrinsic volume deviations, nested") {
  const VPolytope cube_in = make_fixture(FixtureId::inscribed_cube, 3);
  const MetricReport a = delta_j(cube_in, 3, 1000, 1);
  CHECK(a.value.mean == doctest::Approx(4 * kPi / 3 - 8 / (3 * std::sqrt(3.0))).epsilon(1e-12));
  CHECK(a.value.mean == doctest::Approx(2.64919).epsilon(1e-5));
  CHECK(a.method == Method::exact);
  CHECK(delta_j(cube3(), 3, 1000, 1).value.mean == doctest::Approx(8 - 4 * kPi / 3).epsilon(1e-12));
  const VPolytope gon = convex_hull(testutil::ngon_points(96));
  const double exact = kPi - 48 * std::sin(2 * kPi / 96);
  CHECK(delta_j(gon, 2, 1000, 1).value.mean == doctest::Approx(exact).epsilon(1e-12));
  CHECK(delta_j(gon, 2, 1000, 1).value.mean <= 0.01);
  CHECK(delta_j(gon, 0, 1000, 1).value.mean == 0.0);
}

TEST_CASE("nested delta_d equals the symmetric difference") {
  for (std::uint64_t s = 0; s < 3; ++s)
    for (GenKind kind : {GenKind::random_inscribed, GenKind::circumscribed_tangent}) {
      const VPolytope p = generate(GenSpec{3, 12, kind, std::nullopt, s, std::nullopt});
      CHECK(delta_j(p, 3, 100, 1).value.mean == symdiff_ball(p, 100, 1).value.mean);
    }
}

TEST_CASE("general-position delta_j against planar oracles") {
  const VPolytope p = shifted(square_in(), pt({0.1, 0.0}));
  const double grid = grid_symdiff(p, 1e-3);
  const MetricReport d2 = delta_j(p, 2, 200000, 3);
  CHECK(d2.method == Method::mc_grassmann);
  CHECK(within(d2.value, grid, 4.0, 1e-3));
  // j = 1: (pi/2) E_u [|h(u) - 1| + |h(-u) - 1|] by quadrature over the circle.
  double acc = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double a = 2 * kPi * (i + 0.5) / n;
    const Point u = pt({std::cos(a), std::sin(a)});
    acc += std::abs(support(p, u) - 1.0) + std::abs(support(p, -u) - 1.0);
  }
  const double oracle = kPi / 2 * acc / n;
  CHECK(within(delta_j(p, 1, 200000, 4).value, oracle));
}

TEST_CASE("total intrinsic volume deviation") {
  const MetricReport r = delta_sigma(cube3(), 1000, 5);
  CHECK(r.value.mean == doctest::Approx((8 - 4 * kPi / 3) + (12 - 2 * kPi) + (6 - 4)).epsilon(1e-12));
  CHECK(r.value.mean == doctest::Approx(11.52802).epsilon(1e-6));
  // P contains B: equals W(P) - W(B).
  const VPolytope p = generate(GenSpec{3, 10, GenKind::circumscribed_tangent, std::nullopt, 4, std::nullopt});
  double wp = 0.0;
  for (int j = 1; j <= 3; ++j) wp += intrinsic_volume_exact(p, j).value();
  CHECK(delta_sigma(p, 100, 1).value.mean == doctest::Approx(wp - (ball_constants(3).wills - 1)).epsilon(1e-12));
}

TEST_CASE("symmetric difference with the ball") {
  CHECK(symdiff_ball(square_in(), 10, 1).value.mean == doctest::Approx(kPi - 2).epsilon(1e-12));
  CHECK(symdiff_ball(square_out(), 10, 1).value.mean == doctest::Approx(4 - kPi).epsilon(1e-12));
  const VPolytope p = shifted(square_in(), pt({0.1, 0.0}));
  const MetricReport r = symdiff_ball(p, 400000, 6);
  CHECK(r.method == Method::mc_volume);
  CHECK(within(r.value, grid_symdiff(p, 1e-3), 4.0, 1e-3));
}

TEST_CASE("boundary split") {
  const BoundarySplit out = boundary_split(square_out(), 100000, 1);
  CHECK(out.dB_in_P.mean == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(out.dB_out_P.mean == doctest::Approx(0.0));
  const BoundarySplit in = boundary_split(square_in(), 100000, 2);
  CHECK(in.dP_in_B.mean == doctest::Approx(4 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(in.dP_out_B.mean == doctest::Approx(0.0));

  const VPolytope p = shifted(square_out(), pt({0.5, 0.0}));
  const BoundarySplit s = boundary_split(p, 200000, 3);
  CHECK(within(s.dP_in_B, std::sqrt(3.0)));
  CHECK(within(s.dP_out_B, 8 - std::sqrt(3.0)));
  CHECK(within(s.dB_in_P, 4 * kPi / 3));
  CHECK(within(s.dB_out_P, 2 * kPi / 3));
  CHECK(s.dP_in_B.mean + s.dP_out_B.mean == doctest::Approx(p.surface_area()).epsilon(1e-12));
  CHECK(s.dB_in_P.mean + s.dB_out_P.mean == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK_THROWS_AS(boundary_split(shifted(square_out(), pt({2.0, 0.0})), 10, 1), OriginNotInterior);
}

TEST_CASE("surface area deviation") {
  CHECK(surface_area_deviation(square_out(), 10, 1).value.mean == doctest::Approx(8 - 2 * kPi).epsilon(1e-12));
  CHECK(surface_area_deviation(square_in(), 10, 1).value.mean ==
        doctest::Approx(2 * kPi - 4 * std::sqrt(2.0)).epsilon(1e-12));
  const VPolytope p = shifted(square_out(), pt({0.5, 0.0}));
  const MetricReport r = surface_area_deviation(p, 200000, 4);
  CHECK(within(r.value, 8 - 2 * kPi / 3 - 2 * std::sqrt(3.0)));
}

TEST_CASE("Hausdorff distance to the ball") {
  const MetricReport out = hausdorff_ball(square_out(), 1000, 1);
  CHECK(out.method == Method::exact);
  CHECK(out.value.mean == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-12));

  const MetricReport in = hausdorff_ball(square_in(), 20000, 2);
  REQUIRE(in.bracket);
  CHECK(in.bracket->first == doctest::Approx(1 - std::sqrt(2.0) / 2).epsilon(1e-12));
  CHECK(in.bracket->first <= in.bracket->second);
  CHECK(in.bracket->second == doctest::Approx(1 - std::sqrt(2.0) / 2).epsilon(1e-6));

  const MetricReport cube = hausdorff_ball(make_fixture(FixtureId::inscribed_cube, 3), 20000, 3);
  REQUIRE(cube.bracket);
  CHECK(cube.bracket->first == doctest::Approx(1 - 1 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(cube.bracket->second - cube.bracket->first < 1e-3);

  const MetricReport gen = hausdorff_ball(shifted(square_in(), pt({0.1, 0.0})), 20000, 4);
  CHECK_FALSE(gen.certified);
}

TEST_CASE("Hausdorff bracket ordering and circumscribed exactness") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const VPolytope p = generate(GenSpec{3, 15, GenKind::random_inscribed, std::nullopt, s, std::nullopt});
    const MetricReport r = hausdorff_ball(p, 5000, s);
    REQUIRE(r.bracket);
    CHECK(r.bracket->first <= r.bracket->second);
  }
  for (std::uint64_t s = 0; s < 3; ++s) {
    const VPolytope p = generate(GenSpec{2, 7, GenKind::circumscribed_tangent, std::nullopt, s, std::nullopt});
    double dense = 0.0;
    const int n = 2000000;
    for (int i = 0; i < n; ++i) {
      const double a = 2 * kPi * i / n;
      dense = std::max(dense, support(p, pt({std::cos(a), std::sin(a)})) - 1.0);
    }
    CHECK(std::abs(hausdorff_ball(p, 10, 1).value.mean - dense) < 1e-6);
  }
}

TEST_CASE("distance to a hull") {
  const std::vector<Point> seg{pt({0, 1}), pt({1, 0})};
  CHECK(distance_to_hull(seg, pt({0, 0})) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(distance_to_hull(seg, pt({2, 0})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(distance_to_polytope(cube3(), pt({0.2, 0.1, 0.0})) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(distance_to_polytope(cube3(), pt({2, 2, 0})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("sphere sublevel fraction") {
  const VPolytope sq = square_in();
  CHECK(sphere_sublevel_fraction(sq, 1.0 + 1e-9, 10000, 1).mean == 1.0);
  CHECK(sphere_sublevel_fraction(sq, 0.7, 10000, 1).mean == 0.0);
  const double t = 1.0 / (1.0 + eta_dN(2, 4));
  const MCEstimate f = sphere_sublevel_fraction(sq, t, 200000, 2);
  // h(theta) = max(|cos|, |sin|): the sublevel set is 1 - acos(t)/(pi/4) of the circle.
  const double exact = 1.0 - std::acos(t) / (kPi / 4);
  CHECK(within(f, exact));
  CHECK(exact >= 0.75);
  CHECK(f.mean >= 0.75 - 3 * f.std_error);
}

TEST_CASE("boundary mass outside a dilated ball") {
  const VPolytope sq = square_out();
  CHECK(boundary_mass_outside(sq, 0.0, 20000, 1).mean == doctest::Approx(8.0));
  CHECK(boundary_mass_outside(sq, std::sqrt(2.0) - 1 + 1e-9, 20000, 1).mean == 0.0);
  CHECK(within(boundary_mass_outside(sq, 0.2, 200000, 2), 8 - 8 * std::sqrt(0.44)));
  CHECK(8 - 8 * std::sqrt(0.44) == doctest::Approx(2.69341).epsilon(1e-5));
  CHECK_THROWS_AS(boundary_mass_outside(square_in(), 0.1, 10, 1), NotCircumscribed);
}

TEST_CASE("extended isoperimetric chain and polarity inequality on random instances") {
  for (int d = 2; d <= 4; ++d)
    for (std::uint64_t s = 0; s < 4; ++s) {
      const VPolytope p = generate(GenSpec{d, 3 * d + 2, GenKind::random_inscribed, std::nullopt, s, std::nullopt});
      std::vector<MCEstimate> v(d + 1);
      for (int j = 1; j <= d; ++j) v[j] = intrinsic_volume_best(p, j, 20000, derive_seed(s, j));
      for (int j = 1; j < d; ++j) {
        const double a = std::pow(v[j].mean / ball_intrinsic_volume(d, j), 1.0 / j);
        const double b = std::pow(v[j + 1].mean / ball_intrinsic_volume(d, j + 1), 1.0 / (j + 1));
        const double slack = 3 * (a * v[j].std_error / (j * v[j].mean) + b * v[j + 1].std_error / ((j + 1) * v[j + 1].mean));
        CHECK(a >= b - slack);
      }
      const MCEstimate w = d <= 3 ? exact_value(mean_width_exact_lowdim(p)) : mean_width(p, 100000, s);
      const double rhs = 2.0 / sphere_area(d) * (polar_dual(p).volume() - kappa(d));
      CHECK(2.0 - w.mean <= rhs + 3 * w.std_error);
    }
}

TEST_CASE("estimators are independent of the worker count") {
  const VPolytope p = generate(GenSpec{4, 12, GenKind::random_inscribed, std::nullopt, 1, std::nullopt});
  const int saved = worker_count();
  set_worker_count(1);
  const MCEstimate a = mean_width(p, 30000, 9);
  const MCEstimate c = intrinsic_volume(p, 2, 3000, 9);
  set_worker_count(4);
  const MCEstimate b = mean_width(p, 30000, 9);
  const MCEstimate e = intrinsic_volume(p, 2, 3000, 9);
  set_worker_count(saved);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(c.mean == e.mean);
}

TEST_CASE("scalar and vector kernels give identical estimates") {
  if (!kernels::available(kernels::Isa::Avx2)) return;
  const VPolytope p = generate(GenSpec{3, 20, GenKind::random_inscribed, std::nullopt, 2, std::nullopt});
  const kernels::Isa saved = kernels::active().isa;
  kernels::select(kernels::Isa::Scalar);
  const MCEstimate a = mean_width(p, 20000, 5);
  const MCEstimate s1 = symdiff_ball(shifted(p, pt({0.05, 0, 0})), 20000, 5).value;
  kernels::select(kernels::Isa::Avx2);
  const MCEstimate b = mean_width(p, 20000, 5);
  const MCEstimate s2 = symdiff_ball(shifted(p, pt({0.05, 0, 0})), 20000, 5).value;
  kernels::select(saved);
  CHECK(a.mean == b.mean);
  CHECK(s1.mean == s2.mean);
}

}  // TEST_SUITE
