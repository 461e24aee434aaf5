#include "ballapprox/ball.hpp"
#include "ballapprox/bounds.hpp"
#include "ballapprox/constructions.hpp"
#include "ballapprox/metrics.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <numbers>

using namespace ballapprox;

namespace {
constexpr double kPi = std::numbers::pi;

GenSpec spec(int d, int n, GenKind kind, std::uint64_t seed) {
  return GenSpec{d, n, kind, std::nullopt, seed, std::nullopt};
}
}  // namespace

TEST_SUITE("constructions") {

TEST_CASE("inscribed cube fixture") {
  const VPolytope p = make_fixture(FixtureId::inscribed_cube, 3);
  CHECK(p.fvector() == std::vector<long>{8, 12, 6});
  for (const auto& v : p.vertices()) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.volume() == doctest::Approx(8 / (3 * std::sqrt(3.0))).epsilon(1e-13));
}

TEST_CASE("regular hexagon fixture") {
  const VPolytope p = make_fixture(FixtureId::regular_ngon, 2, 6);
  CHECK(p.surface_area() == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(mean_width_exact_lowdim(p) == doctest::Approx(6 / kPi).epsilon(1e-13));
  CHECK_THROWS_AS(make_fixture(FixtureId::regular_ngon, 3, 6), UnsupportedDimension);
}

TEST_CASE("fixture closed forms") {
  for (int d = 2; d <= 5; ++d) {
    const VPolytope cube = make_fixture(FixtureId::cube, d);
    CHECK(cube.volume() == doctest::Approx(std::pow(2.0, d)).epsilon(1e-12));
    CHECK(cube.surface_area() == doctest::Approx(2 * d * std::pow(2.0, d - 1)).epsilon(1e-12));
    CHECK(cube.fvector().front() == (1L << d));
    CHECK(cube.fvector().back() == 2 * d);
    CHECK(nesting(cube) == Nesting::circumscribed);

    const VPolytope cross = make_fixture(FixtureId::cross, d);
    CHECK(cross.volume() == doctest::Approx(std::pow(2.0, d) / linalg::factorial(d)).epsilon(1e-12));
    CHECK(cross.fvector().front() == 2 * d);
    CHECK(cross.fvector().back() == (1L << d));
    CHECK(nesting(cross) == Nesting::inscribed);

    const VPolytope s = make_fixture(FixtureId::simplex, d);
    const double vol = std::sqrt(d + 1.0) / linalg::factorial(d) * std::pow((d + 1.0) / d, d / 2.0);
    CHECK(s.volume() == doctest::Approx(vol).epsilon(1e-12));
    CHECK(s.fvector().front() == d + 1);
    CHECK(s.fvector().back() == d + 1);
    for (const auto& v : s.vertices()) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.vertex_centroid().norm() < 1e-14);
  }
}

TEST_CASE("random inscribed hulls") {
  const VPolytope p = generate(spec(3, 20, GenKind::random_inscribed, 7));
  for (const auto& v : p.vertices()) CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
  CHECK(p.fvector()[0] <= 20);
  CHECK(testutil::euler_sum(p.fvector()) == 2);
  CHECK(nesting(p) == Nesting::inscribed);
}

TEST_CASE("generators are reproducible") {
  for (GenKind kind : {GenKind::random_inscribed, GenKind::circumscribed_tangent, GenKind::polar_of_inscribed}) {
    const VPolytope a = generate(spec(3, 11, kind, 5));
    const VPolytope b = generate(spec(3, 11, kind, 5));
    REQUIRE(a.vertices().size() == b.vertices().size());
    for (std::size_t i = 0; i < a.vertices().size(); ++i) CHECK(a.vertices()[i] == b.vertices()[i]);
  }
}

TEST_CASE("tangent intersections contain the ball with unit offsets") {
  for (int d = 2; d <= 4; ++d)
    for (std::uint64_t s = 0; s < 4; ++s) {
      const VPolytope p = generate(spec(d, 2 * d + 3, GenKind::circumscribed_tangent, s));
      for (const auto& f : p.facets()) CHECK(std::abs(f.offset - 1.0) <= 1e-12);
      CHECK(nesting(p) == Nesting::circumscribed);
    }
}

TEST_CASE("polar of an inscribed hull is circumscribed, pointwise") {
  Rng rng(31);
  for (int d = 2; d <= 4; ++d)
    for (std::uint64_t s = 0; s < 3; ++s) {
      GenSpec g = spec(d, 2 * d + 4, GenKind::random_inscribed, s);
      const VPolytope primal = generate(g);
      const VPolytope dual = polar_dual(primal);
      CHECK(dual.min_facet_offset() >= 1 - 1e-9);
      for (int t = 0; t < 200; ++t) {
        const Point u = sampling::sphere(rng, d);
        if (support(primal, u) <= 1.0) CHECK(radial(dual, u) >= 1.0 - 1e-12);
      }
      g.kind = GenKind::polar_of_inscribed;
      CHECK(nesting(generate(g)) == Nesting::circumscribed);
    }
}

TEST_CASE("jittered fixtures") {
  GenSpec g{3, 0, GenKind::fixture, FixtureId::inscribed_cube, 4, 0.01};
  const VPolytope p = generate(g);
  for (const auto& v : p.vertices()) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.fvector()[0] == 8);
  g.fixture.reset();
  CHECK_THROWS_AS(generate(g), ConfigError);
}

TEST_CASE("hopeless draws raise UnboundedDraw") {
  CHECK_THROWS_AS(generate(spec(3, 3, GenKind::circumscribed_tangent, 1)), UnboundedDraw);
  CHECK_THROWS_AS(generate(spec(3, 3, GenKind::random_inscribed, 1)), UnboundedDraw);
}

TEST_CASE("name round trips") {
  for (GenKind k : {GenKind::random_inscribed, GenKind::circumscribed_tangent, GenKind::polar_of_inscribed,
                    GenKind::fixture})
    CHECK(parse_gen_kind(gen_kind_name(k)) == k);
  for (FixtureId f : {FixtureId::simplex, FixtureId::cube, FixtureId::cross, FixtureId::regular_ngon,
                      FixtureId::inscribed_cube, FixtureId::circumscribed_cube})
    CHECK(parse_fixture(fixture_name(f)) == f);
  CHECK_THROWS_AS(parse_gen_kind("nope"), ConfigError);
  CHECK_THROWS_AS(parse_fixture("nope"), ConfigError);
}

TEST_CASE("Mueller estimate") {
  const MCEstimate a = mueller_estimate(2, 16, 1, 1000, 3);
  const MCEstimate b = mueller_estimate(2, 16, 1, 1000, 3);
  CHECK(a.mean == b.mean);
  const MCEstimate e = mueller_estimate(2, 64, 400, 1000, 11);
  CHECK(std::abs(e.mean - muller_limit(2)) < 0.15 * muller_limit(2));
  // d = 3 route goes through the point-cloud support.
  const MCEstimate f = mueller_estimate(3, 64, 40, 5000, 12);
  CHECK(f.mean > 0.0);
  CHECK(std::abs(f.mean - muller_limit(3)) < 0.5 * muller_limit(3));
  CHECK_THROWS_AS(mueller_estimate(3, 3, 10, 10, 1), ConfigError);
}

}  // TEST_SUITE
