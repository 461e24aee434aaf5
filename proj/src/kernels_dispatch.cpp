#include "ballapprox/errors.hpp"
#include "ballapprox/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace ballapprox::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(BALLAPPROX_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  const char* force = std::getenv("BALLAPPROX_FORCE_SCALAR");
  if (force && std::strcmp(force, "0") != 0) return &detail::kScalarTable;
  return &table(best_available());
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

PackedRows PackedRows::pack(const std::vector<Point>& rows) {
  PackedRows p;
  p.count = rows.size();
  p.dim = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  p.stride = std::max<std::size_t>(4, (p.count + 3) / 4 * 4);
  p.data.assign(p.stride * static_cast<std::size_t>(p.dim), 0.0);
  for (std::size_t i = 0; i < p.stride; ++i) {
    const Point& r = rows[std::min(i, p.count - 1)];
    for (int k = 0; k < p.dim; ++k) p.data[k * p.stride + i] = r[k];
  }
  return p;
}

std::vector<double> pad_like(const PackedRows& rows, std::span<const double> values) {
  std::vector<double> out(rows.stride);
  for (std::size_t i = 0; i < rows.stride; ++i) out[i] = values[std::min(i, values.size() - 1)];
  return out;
}

bool available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

Isa best_available() { return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar; }

const KernelTable& table(Isa isa) {
  if (isa == Isa::Scalar) return detail::kScalarTable;
#if defined(BALLAPPROX_HAVE_AVX2)
  if (cpu_has_avx2()) return detail::kAvx2Table;
#endif
  throw ConfigError("AVX2 kernels are not available on this machine");
}

const KernelTable& active() { return *active_slot().load(std::memory_order_relaxed); }

void select(Isa isa) { active_slot().store(&table(isa), std::memory_order_relaxed); }

double max_dot(const PackedRows& rows, const Point& u, std::size_t* arg) {
  std::size_t a = 0;
  const double v = active().max_dot(rows.data.data(), rows.stride, rows.dim, u.data(), &a);
  if (arg) *arg = std::min(a, rows.count - 1);  // padding repeats the last row
  return v;
}

double max_residual(const PackedRows& rows, std::span<const double> padded_offsets,
                    const Point& x) {
  return active().max_residual(rows.data.data(), padded_offsets.data(), rows.stride, rows.dim,
                               x.data());
}

}  // namespace ballapprox::kernels
