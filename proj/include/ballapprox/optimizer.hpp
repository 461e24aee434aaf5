#pragma once

#include "ballapprox/geometry.hpp"

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace ballapprox {

enum class Objective { mw_inscribed, vol_circumscribed, hausdorff_inscribed, hausdorff_circumscribed };
std::string_view objective_name(Objective o);
Objective parse_objective(std::string_view s);  // throws ConfigError

struct OptConfig {
  int iters = 2000;
  int restarts = 4;
  double step0 = 0.3;  // radians
  double decay = 0.7;
  std::uint64_t seed = 0;
  Objective objective = Objective::mw_inscribed;
  long long samples_per_eval = 20000;
  int reject_streak = 20;  // rejections before the step decays
};

struct OptResult {
  VPolytope best;
  double objective_value = 0.0;
  std::vector<std::pair<int, double>> history;  // (iteration, best value so far)
  std::uint64_t seed_used = 0;
  int restart_used = 0;
};

void validate(const OptConfig& cfg);  // throws ConfigError
/// Objectives are deviations: 2 - w(P), vol(P) - kappa_d, or d_H(P, B_d).
OptResult optimize(int d, int N, const OptConfig& cfg);

}  // namespace ballapprox
