#pragma once

// Closed-form lower bounds for polytopal approximation of B_d, each returned
// with the predicates under which it applies.

#include "ballapprox/errors.hpp"

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ballapprox {

enum class Side { inscribed, circumscribed };
enum class BracketMode { statement, proof };
enum class HausdorffBranch { insc_facets, insc_vertices, circ_facets, circ_vertices };
enum class KRange { vertex_side, facet_side, any };

std::string_view side_name(Side s);
std::string_view krange_name(KRange r);
std::string_view branch_name(HausdorffBranch b);

bool k_in_range(KRange r, int d, int k);

struct Requirement {
  std::string kind;       // e.g. "M>=threshold", "k_range", "P_in_sqrt2_B"
  double threshold = std::numeric_limits<double>::quiet_NaN();
  std::string detail;     // k-range tag or free text
  std::optional<bool> holds;  // unset until an instance is supplied
};

struct BoundValue {
  double value = 0.0;
  bool valid = true;
  std::vector<Requirement> requirements;
  std::string provenance;
  std::vector<std::pair<std::string, double>> extras;
  std::string note;

  std::optional<double> extra(std::string_view key) const;
};

/// Facts about a concrete instance used to resolve pending requirements.
struct InstanceFacts {
  int k = -1;
  std::optional<double> max_vertex_norm;
  std::optional<bool> origin_interior;
  std::optional<bool> facets_meet_interior;
};

/// Evaluates every unset requirement that `facts` can decide, then sets
/// valid = value > 0 and no requirement is known to fail.
void apply_instance(BoundValue& b, const InstanceFacts& facts);

struct RhoD {
  int d = 0;
  double rho = 0.0;      // S_d / (4 kappa_{d-1})
  double rho_pow = 0.0;  // rho^{2/(d-1)}
};
RhoD rho_d(int d);

struct RhoTrend {
  std::vector<RhoD> rows;
  bool monotone_beyond_4 = false;  // |rho_pow - 1| decreasing for d >= 4 within the range
};
RhoTrend flag_ratio_trend(int d_lo, int d_hi);

BoundValue bound_mw_inscribed(int d, double M);
BoundValue bound_vol_circumscribed(int d, double M);
BoundValue bound_delta_j(int d, int j, double M, Side side,
                         BracketMode mode = BracketMode::statement, double c = 0.5);
BoundValue bound_wills(int d, double M, double c, Side side);
BoundValue bound_symdiff_arbitrary(int d, double boundary_mass_A, double M);
BoundValue bound_hausdorff(int d, double N, double surface_area_P, HausdorffBranch branch);
/// Ball specialization of Boroczky's symmetric-difference bound (reference only).
BoundValue boroczky_reference(int d, double M);

double eta_dN(int d, double N);
/// Cap heights from the Hausdorff lemmas: the 1/2 (inscribed) or 1/3 (circumscribed)
/// multiple of (surface / (4 N area))^{2/(d-1)} with area = kappa_{d-1} (facets) or S_d (vertices).
double eta_PN(int d, double N, double surface_area_P, Side side);
double r_PN(int d, double N, double surface_area_P, Side side);

double asymptotic_lower_mw(int d);
double asymptotic_lower_vol(int d);
std::pair<double, double> div_bracket(int d);
double muller_limit(int d);

}  // namespace ballapprox
