#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bceid {

using Vec = std::vector<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Numerical tolerances used throughout. A single record so that result
/// files can echo the exact values a run was produced with.
struct Tolerances {
  double pmf_sum = 1e-12;       // pmf normalisation check
  double residual = 1e-9;       // constraint residuals of induced joints
  double feasibility = 1e-8;    // phase-1 optimum below which a system counts as feasible
  double argmax_rel = 1e-10;    // relative tie window for expected-utility argmax
  double lp_pivot = 1e-10;      // simplex pivot threshold
  double qclp_gap = 1e-9;       // ball-constrained solver duality gap target
};

inline const Tolerances& default_tols() {
  static const Tolerances t{};
  return t;
}

struct ZeroMassSignal : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GridTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AllZeroMass : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotObedient : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleModel : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool is_pmf(const Vec& p, double tol = 1e-12) {
  double s = 0.0;
  for (double v : p) {
    if (v < -tol || !std::isfinite(v)) return false;
    s += v;
  }
  return std::abs(s - 1.0) <= std::max(tol, 1e-12 * p.size());
}

inline void normalize(Vec& p) {
  double s = 0.0;
  for (double v : p) s += v;
  if (s <= 0.0) throw AllZeroMass("cannot normalise all-zero vector");
  for (double& v : p) v /= s;
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(std::max(0.0, dot(a, a))); }

// SplitMix64, used to derive independent per-worker / per-draw RNG streams
// from a master seed. Merging results is order-independent, so outputs do
// not depend on the worker count.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 stream_rng(uint64_t seed, uint64_t stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 0x51ed2701)));
}

inline double uniform01(std::mt19937_64& g) {
  // 53-bit mantissa in (0,1); avoids 0 so inverse-CDF transforms stay finite
  return (static_cast<double>(g() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

/// Runs fn(i) for i in [0,n) on `workers` threads. Chunking is fixed, so any
/// shared accumulation keyed by i is deterministic regardless of thread count.
inline void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  int k = std::min<int>(workers, static_cast<int>(n));
  std::vector<std::exception_ptr> errs(k);
  for (int w = 0; w < k; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= n) break;
          fn(i);
        }
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

inline int default_workers() {
  if (const char* env = std::getenv("BCEID_WORKERS")) {
    int k = std::atoi(env);
    if (k >= 1) return k;
  }
  unsigned h = std::thread::hardware_concurrency();
  return h > 0 ? static_cast<int>(h) : 1;
}

/// Halton sequence point (base-prime radical inverse per coordinate),
/// index starts at 1.
inline Vec halton_point(uint64_t index, size_t dim) {
  static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                               31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  if (dim > std::size(primes)) throw ConfigError("halton dimension too large");
  Vec p(dim);
  for (size_t d = 0; d < dim; ++d) {
    uint64_t i = index;
    double f = 1.0, r = 0.0;
    while (i > 0) {
      f /= primes[d];
      r += f * static_cast<double>(i % primes[d]);
      i /= primes[d];
    }
    p[d] = r;
  }
  return p;
}

}  // namespace bceid
