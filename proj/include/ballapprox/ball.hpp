#pragma once

#include <vector>

namespace ballapprox {

/// Per-dimension constants of the unit ball B_d.
struct BallConstants {
  int d = 0;
  std::vector<double> kappa;   // kappa[m] = vol_m(B_m), m = 0..d
  double S = 0.0;              // surface area of the unit sphere S^{d-1}
  std::vector<double> flag;    // flag[j], j = 0..d (Kubota normalization)
  std::vector<double> Vj_ball; // Vj_ball[j] = V_j(B_d), j = 0..d
  double wills = 0.0;          // sum_j V_j(B_d)
  double avg_wills = 0.0;      // sum_{j>=1} (j/d) V_j(B_d)
};

/// 2 <= d <= 8; throws UnsupportedDimension otherwise.
BallConstants ball_constants(int d);

double kappa(int m);
double sphere_area(int d);
double binomial(int n, int k);
double flag_coefficient(int d, int j);
double ball_intrinsic_volume(int d, int j);

}  // namespace ballapprox
