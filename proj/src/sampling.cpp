#include "ballapprox/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace ballapprox {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::atomic<int> g_workers{0};
thread_local bool t_in_worker = false;

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
}

namespace sampling {

Point normal_vector(Rng& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Point x(d);
  for (int i = 0; i < d; ++i) x[i] = g(rng);
  return x;
}

Point sphere(Rng& rng, int d) {
  while (true) {
    Point x = normal_vector(rng, d);
    const double n = x.norm();
    if (n > 1e-300) return x / n;
  }
}

Point ball(Rng& rng, int d, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Point s = sphere(rng, d);
  return s * (radius * std::pow(u(rng), 1.0 / d));
}

Matrix frame(Rng& rng, int d, int j) {
  Matrix g(d, j);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int c = 0; c < j; ++c)
    for (int r = 0; r < d; ++r) g(r, c) = n(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, j);
  for (int c = 0; c < j; ++c) {
    for (int r = 0; r < d; ++r) {
      if (q(r, c) != 0.0) {
        if (q(r, c) < 0) q.col(c) = -q.col(c);
        break;
      }
    }
  }
  return q;
}

std::vector<double> barycentric(Rng& rng, int m) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(m);
  double s = 0.0;
  for (auto& x : w) {
    x = e(rng);
    s += x;
  }
  for (auto& x : w) x /= s;
  return w;
}

}  // namespace sampling

void RunningStats::merge(const RunningStats& o) {
  if (o.n == 0) return;
  if (n == 0) {
    *this = o;
    return;
  }
  const double total = static_cast<double>(n + o.n);
  const double delta = o.mean - mean;
  mean += delta * static_cast<double>(o.n) / total;
  m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
  n += o.n;
}

int worker_count() {
  const int w = g_workers.load();
  if (w > 0) return w;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_worker_count(int n) { g_workers.store(std::max(0, n)); }

void parallel_for(long long n, const std::function<void(long long)>& body) {
  const int workers = static_cast<int>(std::min<long long>(worker_count(), n));
  if (workers <= 1 || t_in_worker) {
    for (long long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<long long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    t_in_worker = true;
    while (true) {
      const long long i = next.fetch_add(1);
      if (i >= n) break;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
    t_in_worker = false;
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

MCEstimate chunked_estimate(std::uint64_t seed, long long samples, const ChunkBody& body) {
  MCEstimate out;
  out.seed = seed;
  if (samples <= 0) return out;
  const long long chunks = (samples + kChunkSize - 1) / kChunkSize;
  std::vector<RunningStats> stats(chunks);
  parallel_for(chunks, [&](long long c) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    const long long count = std::min(kChunkSize, samples - c * kChunkSize);
    body(rng, count, stats[c]);
  });
  RunningStats total;
  for (const auto& s : stats) total.merge(s);
  out.mean = total.mean;
  out.std_error = total.std_error();
  out.samples = total.n;
  return out;
}

MCEstimate add_estimates(const MCEstimate& a, const MCEstimate& b) {
  MCEstimate out;
  out.mean = a.mean + b.mean;
  out.std_error = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  out.samples = a.samples + b.samples;
  out.seed = a.seed;
  return out;
}

MCEstimate scale_estimate(const MCEstimate& a, double c) {
  MCEstimate out = a;
  out.mean = a.mean * c;
  out.std_error = a.std_error * std::abs(c);
  return out;
}

}  // namespace ballapprox
