#include "ballapprox/kernels.hpp"
#include "ballapprox/sampling.hpp"

#include <doctest.h>

#include <limits>

using namespace ballapprox;
using namespace ballapprox::kernels;

namespace {

std::vector<Point> random_rows(Rng& rng, int d, int n) {
  std::vector<Point> rows;
  for (int i = 0; i < n; ++i) rows.push_back(sampling::normal_vector(rng, d));
  return rows;
}

double reference_max_dot(const std::vector<Point>& rows, const Point& u, std::size_t& arg) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double s = rows[i].dot(u);
    if (s > best) best = s, arg = i;
  }
  return best;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("packing pads with the last row") {
  Rng rng(1);
  const auto rows = random_rows(rng, 3, 5);
  const PackedRows p = PackedRows::pack(rows);
  CHECK(p.count == 5);
  CHECK(p.stride == 8);
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 5; i < 8; ++i) CHECK(p.column(k)[i] == rows[4][k]);
  const std::vector<double> off{1, 2, 3, 4, 5};
  const auto padded = pad_like(p, off);
  CHECK(padded.size() == 8);
  CHECK(padded[7] == 5.0);
}

TEST_CASE("scalar kernel agrees with a plain loop") {
  Rng rng(2);
  const KernelTable& t = table(Isa::Scalar);
  for (int d = 2; d <= 8; ++d) {
    for (int n : {1, 3, 4, 7, 33}) {
      const auto rows = random_rows(rng, d, n);
      const PackedRows p = PackedRows::pack(rows);
      for (int trial = 0; trial < 20; ++trial) {
        const Point u = sampling::sphere(rng, d);
        std::size_t arg = 0, ref_arg = 0;
        const double got = t.max_dot(p.data.data(), p.stride, d, u.data(), &arg);
        const double ref = reference_max_dot(rows, u, ref_arg);
        CHECK(got == doctest::Approx(ref).epsilon(1e-14));
        CHECK(arg == ref_arg);
      }
    }
  }
}

TEST_CASE("AVX2 kernels are bit-identical to scalar") {
  if (!available(Isa::Avx2)) {
    MESSAGE("AVX2 not available on this machine; equivalence not exercised");
    return;
  }
  Rng rng(3);
  const KernelTable& s = table(Isa::Scalar);
  const KernelTable& v = table(Isa::Avx2);
  for (int d = 2; d <= 8; ++d) {
    for (int n : {1, 2, 4, 5, 8, 17, 64, 129}) {
      const auto rows = random_rows(rng, d, n);
      const PackedRows p = PackedRows::pack(rows);
      std::vector<double> off;
      for (int i = 0; i < n; ++i) off.push_back(std::abs(rows[i][0]));
      const auto poff = pad_like(p, off);
      std::vector<double> out_s(p.stride), out_v(p.stride);
      for (int trial = 0; trial < 50; ++trial) {
        const Point u = sampling::normal_vector(rng, d);
        std::size_t as = 0, av = 0;
        CHECK(s.max_dot(p.data.data(), p.stride, d, u.data(), &as) ==
              v.max_dot(p.data.data(), p.stride, d, u.data(), &av));
        CHECK(as == av);
        CHECK(s.max_residual(p.data.data(), poff.data(), p.stride, d, u.data()) ==
              v.max_residual(p.data.data(), poff.data(), p.stride, d, u.data()));
        s.dots(p.data.data(), p.stride, d, u.data(), out_s.data());
        v.dots(p.data.data(), p.stride, d, u.data(), out_v.data());
        CHECK(out_s == out_v);
      }
    }
  }
}

TEST_CASE("ties resolve to the smallest index in every variant") {
  std::vector<Point> rows(9, Point::Zero(3));
  rows[2] = Point::Unit(3, 0);
  rows[6] = Point::Unit(3, 0);
  rows[7] = Point::Unit(3, 0);
  const PackedRows p = PackedRows::pack(rows);
  const Point u = Point::Unit(3, 0);
  for (Isa isa : {Isa::Scalar, Isa::Avx2}) {
    if (!available(isa)) continue;
    std::size_t arg = 99;
    CHECK(table(isa).max_dot(p.data.data(), p.stride, 3, u.data(), &arg) == 1.0);
    CHECK(arg == 2);
  }
  // Padding copies of the last row never win over it.
  std::vector<Point> last(5, Point::Zero(2));
  last[4] = Point::Unit(2, 1);
  const PackedRows q = PackedRows::pack(last);
  for (Isa isa : {Isa::Scalar, Isa::Avx2}) {
    if (!available(isa)) continue;
    std::size_t arg = 99;
    const Point up = Point::Unit(2, 1);
    table(isa).max_dot(q.data.data(), q.stride, 2, up.data(), &arg);
    CHECK(arg == 4);
  }
}

TEST_CASE("dispatch can be pinned") {
  const Isa before = active().isa;
  select(Isa::Scalar);
  CHECK(active().isa == Isa::Scalar);
  if (available(Isa::Avx2)) {
    select(Isa::Avx2);
    CHECK(active().isa == Isa::Avx2);
  } else {
    CHECK_THROWS(select(Isa::Avx2));
  }
  select(before);
  CHECK(best_available() == (available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar));
  CHECK(isa_name(Isa::Scalar) == "scalar");
}

}  // TEST_SUITE
