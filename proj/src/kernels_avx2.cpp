#include "ballapprox/kernels.hpp"

#include <immintrin.h>

#include <limits>

namespace ballapprox::kernels {
namespace {

inline __m256d dot4(const double* soa, std::size_t stride, int dim, const double* u,
                    std::size_t i) {
  __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(soa + i), _mm256_set1_pd(u[0]));
  for (int k = 1; k < dim; ++k)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(soa + k * stride + i),
                                           _mm256_set1_pd(u[k])));
  return acc;
}

// Per-lane running maximum keeping the first index of each lane's maximum;
// the horizontal step then picks the smallest index among tied lanes, which
// is exactly the first maximizer a sequential scan would report.
struct LaneMax {
  __m256d best = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  __m256d idx = _mm256_setzero_pd();

  void update(__m256d v, std::size_t i) {
    const __m256d gt = _mm256_cmp_pd(v, best, _CMP_GT_OQ);
    const double fi = static_cast<double>(i);
    const __m256d iv = _mm256_set_pd(fi + 3, fi + 2, fi + 1, fi);
    best = _mm256_blendv_pd(best, v, gt);
    idx = _mm256_blendv_pd(idx, iv, gt);
  }

  double reduce(std::size_t* arg) const {
    alignas(32) double b[4], ix[4];
    _mm256_store_pd(b, best);
    _mm256_store_pd(ix, idx);
    int lane = 0;
    for (int l = 1; l < 4; ++l)
      if (b[l] > b[lane] || (b[l] == b[lane] && ix[l] < ix[lane])) lane = l;
    if (arg) *arg = static_cast<std::size_t>(ix[lane]);
    return b[lane];
  }
};

double max_dot_avx2(const double* soa, std::size_t stride, int dim, const double* u,
                    std::size_t* arg) {
  LaneMax m;
  for (std::size_t i = 0; i < stride; i += 4) m.update(dot4(soa, stride, dim, u, i), i);
  return m.reduce(arg);
}

double max_residual_avx2(const double* soa, const double* offsets, std::size_t stride, int dim,
                         const double* x) {
  LaneMax m;
  for (std::size_t i = 0; i < stride; i += 4)
    m.update(_mm256_sub_pd(dot4(soa, stride, dim, x, i), _mm256_loadu_pd(offsets + i)), i);
  return m.reduce(nullptr);
}

void dots_avx2(const double* soa, std::size_t stride, int dim, const double* u, double* out) {
  for (std::size_t i = 0; i < stride; i += 4) _mm256_storeu_pd(out + i, dot4(soa, stride, dim, u, i));
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{Isa::Avx2, max_dot_avx2, max_residual_avx2, dots_avx2};
}

}  // namespace ballapprox::kernels
