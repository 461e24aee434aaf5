#include "ballapprox/bounds.hpp"

#include "ballapprox/ball.hpp"

#include <cmath>
#include <numbers>

namespace ballapprox {
namespace {

// M^{-2/(d-1)} via exp/log.
double decay(int d, double M) { return std::exp(-2.0 / (d - 1) * std::log(M)); }
double pow_dm1(double x, int d) { return std::exp(2.0 / (d - 1) * std::log(x)); }

void check_dim(int d) {
  if (d < 2 || d > 8) throw UnsupportedDimension("bounds need 2 <= d <= 8");
}

Requirement pending(std::string kind, std::string detail = {}) {
  Requirement r;
  r.kind = std::move(kind);
  r.detail = std::move(detail);
  return r;
}

Requirement decided(std::string kind, double threshold, bool holds) {
  Requirement r;
  r.kind = std::move(kind);
  r.threshold = threshold;
  r.holds = holds;
  return r;
}

Requirement k_requirement(KRange range) { return pending("k_range", std::string(krange_name(range))); }

void finalize(BoundValue& b) {
  bool ok = b.value > 0.0;
  for (const auto& r : b.requirements)
    if (r.holds.has_value() && !*r.holds) ok = false;
  b.valid = ok;
}

Requirement min_faces(int d, double M) { return decided("M>=d+1", d + 1, M >= d + 1); }

}  // namespace

std::string_view side_name(Side s) { return s == Side::inscribed ? "inscribed" : "circumscribed"; }

std::string_view krange_name(KRange r) {
  switch (r) {
    case KRange::vertex_side: return "vertex_side";
    case KRange::facet_side: return "facet_side";
    case KRange::any: return "any";
  }
  return "any";
}

std::string_view branch_name(HausdorffBranch b) {
  switch (b) {
    case HausdorffBranch::insc_facets: return "insc_facets";
    case HausdorffBranch::insc_vertices: return "insc_vertices";
    case HausdorffBranch::circ_facets: return "circ_facets";
    case HausdorffBranch::circ_vertices: return "circ_vertices";
  }
  return "";
}

bool k_in_range(KRange r, int d, int k) {
  if (k < 0 || k > d - 1) return false;
  switch (r) {
    case KRange::vertex_side: return k <= d / 2;
    case KRange::facet_side: return k >= (d + 1) / 2 - 1;
    case KRange::any: return true;
  }
  return false;
}

std::optional<double> BoundValue::extra(std::string_view key) const {
  for (const auto& [k, v] : extras)
    if (k == key) return v;
  return std::nullopt;
}

void apply_instance(BoundValue& b, const InstanceFacts& f) {
  for (auto& r : b.requirements) {
    if (r.holds.has_value()) continue;
    if (r.kind == "k_range" && f.k >= 0) {
      KRange range = r.detail == "vertex_side" ? KRange::vertex_side
                     : r.detail == "facet_side" ? KRange::facet_side
                                                : KRange::any;
      // d is not part of the facts; the bound carries it in its extras.
      const int d = static_cast<int>(b.extra("d").value_or(0));
      r.holds = k_in_range(range, d, f.k);
    } else if (r.kind == "origin_interior" && f.origin_interior) {
      r.holds = *f.origin_interior;
    } else if (r.kind == "P_in_sqrt2_B" && f.max_vertex_norm) {
      r.holds = *f.max_vertex_norm <= std::sqrt(2.0) * (1.0 + 1e-9);
    } else if (r.kind == "facets_meet_interior" && f.facets_meet_interior) {
      r.holds = *f.facets_meet_interior;
    }
  }
  finalize(b);
}

RhoD rho_d(int d) {
  check_dim(d);
  RhoD r;
  r.d = d;
  r.rho = sphere_area(d) / (4.0 * kappa(d - 1));
  r.rho_pow = pow_dm1(r.rho, d);
  return r;
}

RhoTrend flag_ratio_trend(int d_lo, int d_hi) {
  RhoTrend t;
  for (int d = d_lo; d <= d_hi; ++d) t.rows.push_back(rho_d(d));
  t.monotone_beyond_4 = true;
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    if (t.rows[i - 1].d < 4) continue;
    if (std::abs(t.rows[i].rho_pow - 1.0) >= std::abs(t.rows[i - 1].rho_pow - 1.0))
      t.monotone_beyond_4 = false;
  }
  return t;
}

BoundValue bound_mw_inscribed(int d, double M) {
  const RhoD r = rho_d(d);
  BoundValue b;
  b.value = 0.25 * r.rho_pow * decay(d, M);
  b.provenance = "mean_width_inscribed";
  b.requirements = {min_faces(d, M), k_requirement(KRange::vertex_side), pending("origin_interior")};
  b.extras = {{"d", d}};
  finalize(b);
  return b;
}

BoundValue bound_vol_circumscribed(int d, double M) {
  const RhoD r = rho_d(d);
  BoundValue b;
  b.value = sphere_area(d) / 8.0 * r.rho_pow * decay(d, M);
  b.provenance = "volume_circumscribed";
  b.requirements = {min_faces(d, M), k_requirement(KRange::facet_side)};
  b.extras = {{"d", d}};
  finalize(b);
  return b;
}

BoundValue bound_delta_j(int d, int j, double M, Side side, BracketMode mode, double c) {
  if (j < 1 || j > d) throw ConfigError("j must be in 1..d");
  if (!(c > 0.0 && c < 1.0)) throw CInvalid("c must lie in (0,1)");
  const RhoD r = rho_d(d);
  const bool insc = side == Side::inscribed;
  const double lead = insc ? 4.0 : 8.0;
  const double denom = insc ? 8.0 : 16.0;
  const double coef = mode == BracketMode::statement ? d - j : j - 1;
  const double x = r.rho_pow * decay(d, M);
  const double bracket = 1.0 - coef / denom * x;

  BoundValue b;
  b.provenance = insc ? "intrinsic_volume_inscribed" : "intrinsic_volume_circumscribed";
  b.requirements = {min_faces(d, M),
                    k_requirement(insc ? KRange::vertex_side : KRange::facet_side),
                    decided("bracket>0", 0.0, bracket > 0.0)};
  b.value = bracket > 0.0 ? j / lead * x * ball_intrinsic_volume(d, j) * bracket : 0.0;
  const double threshold = coef == 0.0 ? 0.0 : r.rho * std::pow(coef / (denom * (1.0 - c)), 0.5 * (d - 1));
  b.extras = {{"d", d}, {"j", j}, {"bracket", bracket}, {"c", c}, {"c_threshold", threshold}};
  if (mode == BracketMode::proof)
    b.note = "bracket coefficient (j-1) as derived in the proof; the statement uses (d-j)";
  finalize(b);
  return b;
}

BoundValue bound_wills(int d, double M, double c, Side side) {
  if (!(c > 0.0 && c < 1.0)) throw CInvalid("c must lie in (0,1)");
  const RhoD r = rho_d(d);
  const bool insc = side == Side::inscribed;
  const BallConstants bc = ball_constants(d);
  BoundValue b;
  b.value = c / (insc ? 4.0 : 8.0) * r.rho_pow * d * bc.avg_wills * decay(d, M);
  const double threshold = r.rho * std::pow((d - 1) / ((insc ? 8.0 : 16.0) * (1.0 - c)), 0.5 * (d - 1));
  b.provenance = insc ? "total_intrinsic_volume_inscribed" : "total_intrinsic_volume_circumscribed";
  b.requirements = {decided("M>=threshold", threshold, M >= threshold),
                    k_requirement(insc ? KRange::vertex_side : KRange::facet_side)};
  b.extras = {{"d", d}, {"c", c}, {"c_threshold", threshold}};
  finalize(b);
  return b;
}

BoundValue bound_symdiff_arbitrary(int d, double A, double M) {
  check_dim(d);
  BoundValue b;
  const double a = A > 0.0 ? std::exp((d + 1.0) / (d - 1.0) * std::log(A)) : 0.0;
  b.value = a * decay(d, M) / (2.0 * d * pow_dm1(kappa(d - 1), d));
  b.provenance = "symmetric_difference_arbitrary";
  b.requirements = {min_faces(d, M), pending("facets_meet_interior"),
                    k_requirement(KRange::facet_side)};
  b.extras = {{"d", d}, {"A", A}};
  finalize(b);
  return b;
}

double eta_dN(int d, double N) {
  check_dim(d);
  return pow_dm1(sphere_area(d) / (4.0 * N * kappa(d - 1)), d) / 3.0;
}

double eta_PN(int d, double N, double surface, Side side) {
  check_dim(d);
  const double f = side == Side::inscribed ? 0.5 : 1.0 / 3.0;
  return f * pow_dm1(surface / (4.0 * N * kappa(d - 1)), d);
}

double r_PN(int d, double N, double surface, Side side) {
  check_dim(d);
  const double f = side == Side::inscribed ? 0.5 : 1.0 / 3.0;
  return f * pow_dm1(surface / (4.0 * N * sphere_area(d)), d);
}

BoundValue bound_hausdorff(int d, double N, double surface, HausdorffBranch branch) {
  if (!(surface > 0.0)) throw ConfigError("surface area must be positive");
  BoundValue b;
  b.requirements = {min_faces(d, N)};
  switch (branch) {
    case HausdorffBranch::insc_facets:
      b.value = eta_PN(d, N, surface, Side::inscribed);
      b.provenance = "hausdorff_inscribed_facets";
      break;
    case HausdorffBranch::insc_vertices:
      b.value = r_PN(d, N, surface, Side::inscribed);
      b.provenance = "hausdorff_inscribed_vertices";
      break;
    case HausdorffBranch::circ_facets:
      b.value = eta_PN(d, N, surface, Side::circumscribed);
      b.provenance = "hausdorff_circumscribed_facets";
      b.requirements.push_back(pending("P_in_sqrt2_B"));
      break;
    case HausdorffBranch::circ_vertices:
      b.value = r_PN(d, N, surface, Side::circumscribed);
      b.provenance = "hausdorff_circumscribed_vertices";
      b.requirements.push_back(pending("P_in_sqrt2_B"));
      break;
  }
  b.extras = {{"d", d}};
  finalize(b);
  return b;
}

BoundValue boroczky_reference(int d, double M) {
  check_dim(d);
  BoundValue b;
  const double s = sphere_area(d);
  b.value = std::exp((d + 1.0) / (d - 1.0) * std::log(s)) / d * decay(d, M) /
            (67.0 * std::numbers::pi * std::exp(2.0));
  b.provenance = "symmetric_difference_reference";
  b.requirements = {decided("reference_only", 0.0, false)};
  b.note = "asymptotic reference line; requires M sufficiently large";
  b.extras = {{"d", d}};
  finalize(b);
  return b;
}

double asymptotic_lower_mw(int d) {
  check_dim(d);
  return (d - 1.0) / (d + 1.0) * pow_dm1(2.0 * sphere_area(d) / ((d + 1.0) * kappa(d - 1)), d);
}

double asymptotic_lower_vol(int d) { return sphere_area(d) / 2.0 * asymptotic_lower_mw(d); }

std::pair<double, double> div_bracket(int d) {
  check_dim(d);
  const double lower = (d - 1.0) / (d + 1.0) * pow_dm1(2.0 / ((d + 1.0) * kappa(d - 1)), d);
  const double e = 2.0 / (d - 1.0);
  const double upper = e * std::exp(std::lgamma(e)) / pow_dm1(kappa(d - 1), d);
  return {lower, upper};
}

double muller_limit(int d) {
  check_dim(d);
  const double e = 2.0 / (d - 1.0);
  return e * pow_dm1(sphere_area(d) / kappa(d - 1), d) * std::exp(std::lgamma(e));
}

}  // namespace ballapprox
