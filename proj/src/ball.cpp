#include "ballapprox/ball.hpp"

#include "ballapprox/errors.hpp"

#include <cmath>
#include <numbers>

namespace ballapprox {

double kappa(int m) {
  return std::exp(0.5 * m * std::log(std::numbers::pi) - std::lgamma(0.5 * m + 1.0));
}

double sphere_area(int d) { return d * kappa(d); }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

double flag_coefficient(int d, int j) {
  return binomial(d, j) * kappa(d) / (kappa(j) * kappa(d - j));
}

double ball_intrinsic_volume(int d, int j) { return binomial(d, j) * kappa(d) / kappa(d - j); }

BallConstants ball_constants(int d) {
  if (d < 2 || d > 8) throw UnsupportedDimension("ball constants need 2 <= d <= 8");
  BallConstants b;
  b.d = d;
  for (int m = 0; m <= d; ++m) b.kappa.push_back(kappa(m));
  b.S = sphere_area(d);
  for (int j = 0; j <= d; ++j) {
    b.flag.push_back(flag_coefficient(d, j));
    b.Vj_ball.push_back(ball_intrinsic_volume(d, j));
    b.wills += b.Vj_ball.back();
    if (j >= 1) b.avg_wills += static_cast<double>(j) / d * b.Vj_ball.back();
  }
  return b;
}

}  // namespace ballapprox
