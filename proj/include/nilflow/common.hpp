#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace nilflow {

using i64 = std::int64_t;
using u64 = std::uint64_t;

// -- checked 64-bit arithmetic -------------------------------------------
//
// Integer state in this project (group exponents, lattice coordinates) must
// never wrap silently; an out-of-range result is an error the caller sees.

inline i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("integer overflow in add");
  return r;
}

inline i64 checked_sub(i64 a, i64 b) {
  i64 r;
  if (__builtin_sub_overflow(a, b, &r))
    throw std::overflow_error("integer overflow in sub");
  return r;
}

inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("integer overflow in mul");
  return r;
}

inline i64 checked_neg(i64 a) { return checked_sub(0, a); }

// -- deterministic RNG ----------------------------------------------------
//
// splitmix64: tiny counter-friendly generator.  Streams are derived from a
// (seed, index) pair so parallel work items draw independent, reproducible
// sequences regardless of scheduling.

struct SplitMix64 {
  u64 state;

  explicit SplitMix64(u64 seed) : state(seed) {}
  SplitMix64(u64 seed, u64 stream)
      : state(seed ^ (0x9e3779b97f4a7c15ull * (stream + 1))) {
    next();
    next();
  }

  u64 next() {
    u64 z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  // uniform integer in [lo, hi] inclusive
  i64 uniform_int(i64 lo, i64 hi) {
    u64 span = u64(hi - lo) + 1;
    return lo + i64(next() % span);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

// FNV-1a, used for content hashes embedded in reports.
struct Fnv1a {
  u64 h = 0xcbf29ce484222325ull;
  void add_bytes(const void* p, std::size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ull;
    }
  }
  void add(u64 v) { add_bytes(&v, sizeof v); }
  void add(double v) { add_bytes(&v, sizeof v); }
  void add(const std::string& s) { add_bytes(s.data(), s.size()); }
};

// -- parallel sweep helper -------------------------------------------------
//
// Results must not depend on scheduling: work items write into disjoint
// slots and reductions happen sequentially afterwards.  NILFLOW_THREADS
// caps the pool size.

inline unsigned thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("NILFLOW_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && static_cast<unsigned long>(v) < hw) hw = unsigned(v);
  }
  return hw;
}

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned workers = thread_budget();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<bool> failed{false};
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed.load()) throw std::runtime_error("parallel_for: worker failed");
}

// Compensated accumulation for layouts and totals; plain double summation
// over ~1e5 terms would eat into the 1e-12 normalization budget.
struct StableSum {
  long double acc = 0.0L;
  void add(double v) { acc += static_cast<long double>(v); }
  double value() const { return static_cast<double>(acc); }
  long double value_ld() const { return acc; }
};

}  // namespace nilflow
