#pragma once

// Instance-by-instance certification of the lower bounds, plus the studies
// that only report (Mueller convergence, div bracket, boundary-mass probe,
// empirical surface-deviation constants).

#include "ballapprox/bounds.hpp"
#include "ballapprox/constructions.hpp"
#include "ballapprox/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ballapprox {

enum class Status { pass, fail, not_applicable };
std::string_view status_name(Status s);

struct CertRow {
  int d = 0;
  int k = 0;
  long N = 0;  // generator size parameter
  long M = 0;  // f_k of the certified polytope
  std::string generator;
  std::string metric;
  double measured = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  bool valid = false;
  double ratio = 0.0;
  Status status = Status::not_applicable;
  std::uint64_t seed = 0;
  std::string error;  // set when the row could not be evaluated
};

/// fail iff valid and measured + 3 stderr < bound; not_applicable iff !valid.
Status decide(double measured, double std_error, const BoundValue& bound);

struct SweepConfig {
  std::vector<int> d_list{2, 3, 4};
  std::vector<int> k_list;  // empty: 0..d-1
  std::vector<int> n_list;  // empty: default_n_grid(d)
  std::vector<GenKind> generators{GenKind::random_inscribed, GenKind::polar_of_inscribed,
                                  GenKind::circumscribed_tangent};
  int instances_per_cell = 10;
  long long samples = 200000;
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  bool diagnostics = true;  // isoperimetric chain, polarity inequality, sublevel fraction
};

void validate(const SweepConfig& cfg);  // throws ConfigError
/// round(linspace(d+1, 30, 8)), deduplicated.
std::vector<int> default_n_grid(int d);
std::uint64_t instance_seed(std::uint64_t seed, int d, int n, GenKind kind, int instance);

struct InstanceContext {
  std::string generator;
  long N = 0;
  std::uint64_t seed = 0;
  long long samples = 200000;
  bool diagnostics = true;
};

/// All rows for one polytope over the given k values (out-of-range k are
/// skipped). The polytope's nesting picks the side. Diagnostic rows are
/// reported once per instance with k = 0 and M = f_0.
std::vector<CertRow> certify_instance(const VPolytope& p, const std::vector<int>& ks,
                                      const InstanceContext& ctx);
std::vector<CertRow> certify(const SweepConfig& cfg);

void write_csv(std::ostream& out, const std::vector<CertRow>& rows);
void write_json(std::ostream& out, const std::vector<CertRow>& rows);
/// 0 when no row failed, 1 otherwise.
int exit_code(const std::vector<CertRow>& rows);

// ---- studies -------------------------------------------------------------

struct DivStudyRow {
  int d = 0;
  double lower = 0.0, upper = 0.0;
  std::vector<int> n_seq;
  std::vector<MCEstimate> mueller;       // N^{2/(d-1)} (2 - E w), random hulls
  std::vector<MCEstimate> optimized;     // N^{2/(d-1)} Delta_w of optimized hulls
  std::vector<double> optimized_scaled;  // optimized / S_d^{2/(d-1)}
  bool above_lower = true;               // every optimized_scaled >= lower - 3 stderr
};

struct DivStudyConfig {
  std::vector<int> d_list{2, 3};
  std::vector<int> n_seq{16, 32, 64, 128};
  int trials = 200;
  long long samples = 20000;
  int opt_iters = 3000;
  int opt_restarts = 2;
  std::uint64_t seed = 0;
};
std::vector<DivStudyRow> study_div(const DivStudyConfig& cfg);

struct ConjectureRow {
  int d = 0;
  std::uint64_t seed = 0;
  std::string generator;
  long N = 0;  // vertex count of P
  double c1 = 0.0;
  double t = 0.0;
  MCEstimate ratio;  // boundary mass outside (1+t)B / S_d
};
struct ConjectureConfig {
  std::vector<int> d_list{2, 3};
  std::vector<int> n_list{8, 16};
  std::vector<double> c1_list{0.1, 0.5, 1.0, 2.0};
  int instances = 5;
  long long samples = 100000;
  std::uint64_t seed = 0;
  bool include_cube = true;
};
std::vector<ConjectureRow> study_conjecture(const ConjectureConfig& cfg);
/// Minimum observed ratio per (d, c1): candidate c2 values.
std::vector<ConjectureRow> conjecture_minima(const std::vector<ConjectureRow>& rows);

struct HswRow {
  int d = 0;
  int k = 0;
  std::string generator;
  std::uint64_t seed = 0;
  long M = 0;
  double deviation = 0.0;  // surface-area deviation
  double deviation_stderr = 0.0;
  double surface = 0.0;
  double c_hat = 0.0;
  std::string error;  // ContainmentViolated etc.
};
/// Empirical constant Delta_s kappa_{d-1}^{2/(d-1)} M^{2/(d-1)} / surface^{(d+1)/(d-1)}.
double hsw_constant(int d, double deviation, double M, double surface);
HswRow hsw_row(const VPolytope& p, int k, const std::string& generator, std::uint64_t seed,
               long long samples);
std::vector<HswRow> report_hsw_constants(const SweepConfig& cfg);

}  // namespace ballapprox
