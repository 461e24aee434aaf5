#include "ballapprox/certify.hpp"
#include "ballapprox/metrics.hpp"

#include <doctest.h>

#include <json.hpp>

#include <numbers>
#include <sstream>

using namespace ballapprox;

namespace {
constexpr double kPi = std::numbers::pi;

const CertRow* find(const std::vector<CertRow>& rows, const std::string& metric, int k,
                    const std::string& gen = "") {
  for (const auto& r : rows)
    if (r.metric == metric && r.k == k && (gen.empty() || r.generator == gen)) return &r;
  return nullptr;
}

InstanceContext ctx(const std::string& gen, long n) {
  InstanceContext c;
  c.generator = gen;
  c.N = n;
  c.seed = 1;
  c.samples = 20000;
  return c;
}
}  // namespace

TEST_SUITE("certify") {

TEST_CASE("decision rule") {
  BoundValue b;
  b.value = 1.0;
  b.valid = true;
  CHECK(decide(0.9, 0.0, b) == Status::fail);
  CHECK(decide(0.9, 0.04, b) == Status::pass);
  CHECK(decide(1.0, 0.0, b) == Status::pass);
  b.valid = false;
  CHECK(decide(0.1, 0.0, b) == Status::not_applicable);
}

TEST_CASE("hexagon fixture row") {
  const VPolytope hex = make_fixture(FixtureId::regular_ngon, 2, 6);
  const auto rows = certify_instance(hex, {0, 1}, ctx("fixture", 6));
  const CertRow* r = find(rows, "mean_width_deficit", 0);
  REQUIRE(r);
  CHECK(r->measured == doctest::Approx(2 - 6 / kPi).epsilon(1e-12));
  CHECK(r->bound == doctest::Approx(kPi * kPi / 2304).epsilon(1e-12));
  CHECK(r->status == Status::pass);
  CHECK(r->ratio == doctest::Approx(21.04).epsilon(1e-3));
  CHECK(r->M == 6);
  for (const auto& row : rows) CHECK(row.status != Status::fail);
}

TEST_CASE("circumscribed square row") {
  const VPolytope sq = make_fixture(FixtureId::circumscribed_cube, 2);
  const auto rows = certify_instance(sq, {1}, ctx("fixture", 4));
  const CertRow* r = find(rows, "volume_excess", 1, "fixture");
  REQUIRE(r);
  CHECK(r->M == 4);
  CHECK(r->measured == doctest::Approx(4 - kPi).epsilon(1e-12));
  CHECK(r->bound == doctest::Approx(std::pow(kPi, 3) / 1024).epsilon(1e-12));
  CHECK(r->status == Status::pass);
  const CertRow* h = find(rows, "hausdorff", 1, "fixture");
  REQUIRE(h);
  CHECK(h->measured == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-12));
  CHECK(h->valid);
  // The polar (inscribed square) gets the mean-width row at k' = 0.
  const CertRow* p = find(rows, "mean_width_deficit", 0, "fixture:polar");
  REQUIRE(p);
  CHECK(p->measured == doctest::Approx(2 - 4 * std::sqrt(2.0) / kPi).epsilon(1e-12));
}

TEST_CASE("routing follows the face ranges") {
  const VPolytope p = generate(GenSpec{3, 12, GenKind::random_inscribed, std::nullopt, 3, std::nullopt});
  const auto rows = certify_instance(p, {0, 1, 2}, ctx("random_inscribed", 12));
  // k = 1 in d = 3 is on both sides: inscribed rows plus the polar volume row.
  CHECK(find(rows, "mean_width_deficit", 1));
  CHECK(find(rows, "volume_excess", 1, "random_inscribed:polar"));
  CHECK_FALSE(find(rows, "mean_width_deficit", 2));
  CHECK(find(rows, "hausdorff", 2));
  CHECK(find(rows, "hausdorff_facets", 2));
  CHECK_FALSE(find(rows, "hausdorff_facets", 0));
  for (const auto& r : rows) {
    if (r.metric == "mean_width_deficit" || r.metric.rfind("delta", 0) == 0)
      CHECK(k_in_range(KRange::vertex_side, 3, r.k));
    if (r.metric == "volume_excess" || r.metric == "hausdorff_facets" || r.metric.rfind("symdiff", 0) == 0)
      CHECK(k_in_range(KRange::facet_side, 3, r.k));
    CHECK(r.status != Status::fail);
  }
  CHECK(find(rows, "isoperimetric_chain", 0));
  CHECK(find(rows, "glasauer_gruber", 0));
  CHECK(find(rows, "sublevel_fraction", 0));
}

TEST_CASE("reference rows are never applicable") {
  const VPolytope p = generate(GenSpec{2, 9, GenKind::circumscribed_tangent, std::nullopt, 1, std::nullopt});
  for (const auto& r : certify_instance(p, {1}, ctx("circumscribed_tangent", 9)))
    if (r.metric == "symdiff_boroczky_ref") CHECK(r.status == Status::not_applicable);
}

TEST_CASE("small sweep is deterministic and thread independent") {
  SweepConfig cfg;
  cfg.d_list = {2, 3};
  cfg.n_list = {5, 9};
  cfg.instances_per_cell = 2;
  cfg.samples = 5000;
  cfg.seed = 4;
  const int saved = worker_count();
  set_worker_count(1);
  const auto a = certify(cfg);
  set_worker_count(4);
  const auto b = certify(cfg);
  set_worker_count(saved);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].metric == b[i].metric);
    CHECK(a[i].measured == b[i].measured);
    CHECK(a[i].status == b[i].status);
  }
  CHECK(exit_code(a) == 0);
}

TEST_CASE("CSV and JSON output") {
  const VPolytope hex = make_fixture(FixtureId::regular_ngon, 2, 6);
  const auto rows = certify_instance(hex, {0}, ctx("fixture", 6));
  std::ostringstream csv;
  write_csv(csv, rows);
  std::istringstream in(csv.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "d,k,N,M,generator,metric,measured,stderr,bound,valid,ratio,status,seed");
  std::string line;
  std::getline(in, line);
  CHECK(std::count(line.begin(), line.end(), ',') == 12);

  std::ostringstream js;
  write_json(js, rows);
  const auto parsed = nlohmann::json::parse(js.str());
  REQUIRE(parsed.is_array());
  CHECK(parsed.size() == rows.size());
  CHECK(parsed[0]["metric"] == rows[0].metric);
  CHECK(parsed[0]["status"] == "pass");

  std::vector<CertRow> failing = rows;
  failing[0].status = Status::fail;
  CHECK(exit_code(failing) == 1);
}

TEST_CASE("sweep configuration") {
  CHECK(default_n_grid(2) == std::vector<int>{3, 7, 11, 15, 18, 22, 26, 30});
  CHECK(default_n_grid(4).size() == 8);
  SweepConfig cfg;
  cfg.d_list = {};
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = SweepConfig{};
  cfg.instances_per_cell = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = SweepConfig{};
  cfg.n_list = {3};
  cfg.d_list = {3};
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  CHECK(instance_seed(0, 2, 5, GenKind::random_inscribed, 0) != instance_seed(0, 2, 5, GenKind::random_inscribed, 1));
}

TEST_CASE("generation errors are captured per row") {
  SweepConfig cfg;
  cfg.d_list = {3};
  cfg.n_list = {4};
  cfg.generators = {GenKind::circumscribed_tangent};
  cfg.instances_per_cell = 1;
  cfg.samples = 1000;
  // Four tangent planes in R^3 are bounded only when the normals surround the origin;
  // whatever happens, the sweep completes and every row is well formed.
  const auto rows = certify(cfg);
  CHECK_FALSE(rows.empty());
  for (const auto& r : rows)
    if (!r.error.empty()) CHECK(r.metric == "instance");
}

}  // TEST_SUITE

TEST_SUITE("studies") {

TEST_CASE("div study brackets") {
  DivStudyConfig cfg;
  cfg.d_list = {2};
  cfg.n_seq = {8, 16};
  cfg.trials = 20;
  cfg.opt_iters = 800;
  const auto rows = study_div(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].lower == doctest::Approx(1.0 / 27));
  CHECK(rows[0].upper == doctest::Approx(0.5));
  CHECK(rows[0].above_lower);
  cfg.d_list = {};
  CHECK_THROWS_AS(study_div(cfg), ConfigError);
}

TEST_CASE("conjecture probe") {
  ConjectureConfig cfg;
  cfg.d_list = {2};
  cfg.n_list = {6};
  cfg.instances = 2;
  cfg.samples = 20000;
  cfg.c1_list = {1e-6, 0.5, 2.0, 1e6};
  const auto rows = study_conjecture(cfg);
  // Cube first: small c1 gives 8 / (2 pi).
  CHECK(rows[0].generator == "circumscribed_cube");
  CHECK(rows[0].ratio.mean == doctest::Approx(8 / (2 * kPi)).epsilon(1e-3));
  CHECK(rows[3].ratio.mean == 0.0);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    if (rows[i].seed == rows[i + 1].seed && rows[i].generator == rows[i + 1].generator)
      CHECK(rows[i + 1].ratio.mean <= rows[i].ratio.mean);
  const auto minima = conjecture_minima(rows);
  CHECK(minima.size() == 4);
}

TEST_CASE("HSW constants") {
  const VPolytope sq = make_fixture(FixtureId::circumscribed_cube, 2);
  const HswRow r = hsw_row(sq, 1, "fixture", 0, 1000);
  CHECK(r.error.empty());
  CHECK(r.deviation == doctest::Approx(8 - 2 * kPi).epsilon(1e-12));
  CHECK(r.c_hat == doctest::Approx((8 - 2 * kPi) * 4 * 16 / 512).epsilon(1e-12));
  CHECK(r.c_hat == doctest::Approx(0.214602).epsilon(1e-5));
  std::vector<Point> big{Point::Unit(2, 0) * 3, Point::Unit(2, 1), -Point::Unit(2, 0), -Point::Unit(2, 1)};
  const HswRow bad = hsw_row(convex_hull(big), 0, "file", 0, 1000);
  CHECK(bad.error.find("ContainmentViolated") != std::string::npos);
  SweepConfig cfg;
  cfg.d_list = {2};
  cfg.n_list = {6};
  cfg.instances_per_cell = 1;
  cfg.samples = 2000;
  const auto rows = report_hsw_constants(cfg);
  CHECK(rows.size() == 3 * 2);
  for (const auto& row : rows) CHECK(row.c_hat > 0.0);
}

}  // TEST_SUITE
