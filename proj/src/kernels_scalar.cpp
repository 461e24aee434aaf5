#include "ballapprox/kernels.hpp"

#include <limits>

namespace ballapprox::kernels {
namespace {

// Every variant accumulates <row, u> as ((c0*u0 + c1*u1) + c2*u2) + ... with
// no fused multiply-add, so results match bit for bit across variants.

double max_dot_scalar(const double* soa, std::size_t stride, int dim, const double* u,
                      std::size_t* arg) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < stride; ++i) {
    double acc = soa[i] * u[0];
    for (int k = 1; k < dim; ++k) acc = acc + soa[k * stride + i] * u[k];
    if (acc > best) {
      best = acc;
      best_i = i;
    }
  }
  if (arg) *arg = best_i;
  return best;
}

double max_residual_scalar(const double* soa, const double* offsets, std::size_t stride, int dim,
                           const double* x) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < stride; ++i) {
    double acc = soa[i] * x[0];
    for (int k = 1; k < dim; ++k) acc = acc + soa[k * stride + i] * x[k];
    const double r = acc - offsets[i];
    if (r > best) best = r;
  }
  return best;
}

void dots_scalar(const double* soa, std::size_t stride, int dim, const double* u, double* out) {
  for (std::size_t i = 0; i < stride; ++i) {
    double acc = soa[i] * u[0];
    for (int k = 1; k < dim; ++k) acc = acc + soa[k * stride + i] * u[k];
    out[i] = acc;
  }
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{Isa::Scalar, max_dot_scalar, max_residual_scalar, dots_scalar};
}

}  // namespace ballapprox::kernels
