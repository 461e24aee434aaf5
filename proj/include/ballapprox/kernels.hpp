#pragma once

// Data-parallel inner loops of the Monte Carlo estimators.
//
// Each kernel has a scalar reference implementation and an AVX2 variant; the
// active table is chosen once at runtime from CPUID and can be overridden
// (tests pin both and require bit-identical results). Rows are stored
// structure-of-arrays, padded to a multiple of four with copies of the last
// row, so every variant reads whole lanes without a remainder loop.

#include "ballapprox/linalg.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ballapprox::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Rows (vertices or facet normals) in column-major SoA layout.
struct PackedRows {
  int dim = 0;
  std::size_t count = 0;   // real rows
  std::size_t stride = 0;  // padded row count, multiple of 4
  std::vector<double> data;

  static PackedRows pack(const std::vector<Point>& rows);
  const double* column(int k) const { return data.data() + k * stride; }
};

/// Pads a per-row scalar (e.g. facet offsets) to the stride of `rows`.
std::vector<double> pad_like(const PackedRows& rows, std::span<const double> values);

struct KernelTable {
  Isa isa;
  /// max_i <row_i, u>; `arg` receives the smallest maximizing index.
  double (*max_dot)(const double* soa, std::size_t stride, int dim, const double* u,
                    std::size_t* arg);
  /// max_i (<row_i, x> - offset_i).
  double (*max_residual)(const double* soa, const double* offsets, std::size_t stride,
                         int dim, const double* x);
  /// out_i = <row_i, u> for every padded row.
  void (*dots)(const double* soa, std::size_t stride, int dim, const double* u, double* out);
};

bool available(Isa isa);
Isa best_available();
const KernelTable& table(Isa isa);
const KernelTable& active();
/// Overrides the runtime choice (process-wide). Throws if `isa` is unavailable.
void select(Isa isa);

double max_dot(const PackedRows& rows, const Point& u, std::size_t* arg = nullptr);
double max_residual(const PackedRows& rows, std::span<const double> padded_offsets,
                    const Point& x);

namespace detail {
extern const KernelTable kScalarTable;
#if defined(BALLAPPROX_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace ballapprox::kernels
