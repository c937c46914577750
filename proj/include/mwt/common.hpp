#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace mwt {

// Thrown when a caller violates a documented precondition (bad parameter,
// mismatched grids, out-of-range cube, malformed family string).
class contract_error : public std::invalid_argument {
 public:
  explicit contract_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Thrown when an iterative scheme cannot bracket or converge (overflowing
// integrand, failed bisection bracket, internal consistency violation).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw contract_error(msg);
}

// Fixed-format double -> string, locale-independent, for deterministic reports.
std::string format_double(double x);

// Seeded generator with a bit-exact uniform: the mt19937_64 stream is pinned
// by the standard and the 53-bit ldexp mapping avoids the library-dependent
// std::uniform_real_distribution.
struct DetRng {
  std::mt19937_64 eng;
  explicit DetRng(std::uint64_t seed) : eng(seed) {}
  double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

// Number of worker threads: MWT_THREADS if set, else 1.
int worker_count();

// Runs body(i) for i in [0, n). Work is split into contiguous chunks over the
// workers; each index must write only its own output slot so that serial and
// parallel runs produce identical results.
template <class Body>
void parallel_for(long long n, const Body& body);

}  // namespace mwt

#include <thread>
#include <vector>

namespace mwt {

template <class Body>
void parallel_for(long long n, const Body& body) {
  const int workers = worker_count();
  if (workers <= 1 || n < 2 * workers) {
    for (long long i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const long long chunk = (n + workers - 1) / workers;
  for (int t = 0; t < workers; ++t) {
    const long long lo = t * chunk;
    const long long hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (long long i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace mwt
