#pragma once

// Seeded sampling on spheres, balls and Grassmannians, plus the chunked
// Monte Carlo driver. Samples are split into fixed-size chunks, each chunk
// draws from its own generator seeded by (seed, chunk index), and per-chunk
// statistics are merged in chunk order. The result therefore depends only on
// (seed, samples), never on how many workers ran it.

#include "ballapprox/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace ballapprox {

using Rng = std::mt19937_64;

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample sd / sqrt(samples)
  long long samples = 0;
  std::uint64_t seed = 0;
};

inline MCEstimate exact_value(double v) { return MCEstimate{v, 0.0, 0, 0}; }

/// SplitMix64 finalizer applied to (seed, stream); used for every derived seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

namespace sampling {
Point normal_vector(Rng& rng, int d);
Point sphere(Rng& rng, int d);
Point ball(Rng& rng, int d, double radius = 1.0);
/// Haar-random orthonormal d x j frame; first nonzero entry of each column positive.
Matrix frame(Rng& rng, int d, int j);
/// Uniform barycentric weights on the (m-1)-simplex.
std::vector<double> barycentric(Rng& rng, int m);
}  // namespace sampling

/// Welford accumulator with Chan's pairwise merge.
struct RunningStats {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  void merge(const RunningStats& o);
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double std_error() const {
    return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
  }
};

inline constexpr long long kChunkSize = 1024;

/// Worker count used by every parallel loop (default: hardware concurrency).
int worker_count();
void set_worker_count(int n);

/// Runs body(i) for i in [0, n) on the worker pool. Nested calls run inline.
void parallel_for(long long n, const std::function<void(long long)>& body);

/// body(rng, count, stats) must draw `count` samples from rng and add them to stats.
using ChunkBody = std::function<void(Rng&, long long, RunningStats&)>;
MCEstimate chunked_estimate(std::uint64_t seed, long long samples, const ChunkBody& body);

/// Sum of independent estimates, errors in quadrature.
MCEstimate add_estimates(const MCEstimate& a, const MCEstimate& b);
MCEstimate scale_estimate(const MCEstimate& a, double c);

}  // namespace ballapprox
