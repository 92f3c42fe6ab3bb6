#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "nilflow/common.hpp"

namespace nilflow {

// Markov process on N_0^d with transition probabilities
//
//     p((n_1,...,n_i,...) -> (...,1+n_i,...)) = (1+n_i) / (d + n_1+...+n_d)
//
// and the series S(omega) = sum_k |I_{omega_k}|^alpha along a path.  The
// probabilities are exact rationals (rows sum to one identically); sampling
// uses their floating images.

struct Rational {
  i64 num = 0;
  i64 den = 1;
  double value() const { return double(num) / double(den); }
  bool operator==(const Rational&) const = default;
};

inline std::vector<Rational> markov_transition(std::span<const i64> state) {
  i64 d = i64(state.size());
  if (d < 1) throw std::invalid_argument("markov_transition: empty state");
  i64 den = d;
  for (i64 n : state) {
    if (n < 0) throw std::invalid_argument("markov_transition: negative coordinate");
    den = checked_add(den, n);
  }
  std::vector<Rational> probs(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) probs[i] = {state[i] + 1, den};
  return probs;
}

// lengths 1/(1 + sum_i n_i^{e_i}) with lazily grown power tables; copies are
// independent, which makes per-worker copies thread safe
struct PowerSumLengths {
  std::vector<double> exponents;

  explicit PowerSumLengths(std::vector<double> expo) : exponents(std::move(expo)) {}

  double operator()(std::span<const i64> n) {
    if (n.size() != exponents.size())
      throw std::invalid_argument("PowerSumLengths: dimension mismatch");
    double s = 1.0;
    for (std::size_t i = 0; i < n.size(); ++i) s += table(i, n[i]);
    return 1.0 / s;
  }

 private:
  std::vector<std::vector<double>> tables_;

  double table(std::size_t coord, i64 n) {
    if (tables_.size() < exponents.size()) tables_.resize(exponents.size());
    auto& t = tables_[coord];
    if (std::size_t(n) >= t.size()) {
      std::size_t old = t.size();
      t.resize(std::max<std::size_t>(std::size_t(n) + 1, old * 2 + 16));
      for (std::size_t v = old; v < t.size(); ++v)
        t[v] = std::pow(double(v), exponents[coord]);
    }
    return t[std::size_t(n)];
  }
};

struct MarkovResult {
  std::vector<i64> horizons;
  std::vector<double> means;       // Monte Carlo mean of the truncated series
  std::vector<double> std_errors;  // standard error of each mean
  double final_delta_rel = 0.0;    // relative gap between the last two horizons
  i64 paths = 0;
};

// Monte Carlo estimate of E[S] truncated at increasing horizons.  Each path
// draws from its own (seed, path) stream, so the result is independent of
// the thread schedule.
template <class LengthFn>
MarkovResult markov_expectation(int d, LengthFn length_fn, double alpha, i64 paths,
                                std::vector<i64> horizons, u64 seed) {
  if (d < 1) throw std::invalid_argument("markov_expectation: d must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("markov_expectation: alpha must be positive");
  if (horizons.empty()) throw std::invalid_argument("markov_expectation: no horizons");
  std::sort(horizons.begin(), horizons.end());
  const i64 max_h = horizons.back();

  std::vector<std::vector<double>> partial(std::size_t(paths),
                                           std::vector<double>(horizons.size(), 0.0));

  const std::size_t chunk = 64;
  const std::size_t chunks = (std::size_t(paths) + chunk - 1) / chunk;
  parallel_for(chunks, [&](std::size_t ci) {
    LengthFn local = length_fn;  // per-worker copy
    std::vector<i64> state(static_cast<std::size_t>(d), 0);
    for (std::size_t p = ci * chunk; p < std::min(std::size_t(paths), (ci + 1) * chunk); ++p) {
      SplitMix64 rng(seed, u64(p));
      std::fill(state.begin(), state.end(), 0);
      i64 total = 0;
      double s = std::pow(local(state), alpha);  // term at omega_0
      std::size_t next_cp = 0;
      for (i64 step = 1; step <= max_h; ++step) {
        // draw the incremented coordinate
        double u = rng.uniform() * double(d + total);
        double acc = 0.0;
        int pick = d - 1;
        for (int i = 0; i < d; ++i) {
          acc += double(state[std::size_t(i)] + 1);
          if (u < acc) {
            pick = i;
            break;
          }
        }
        ++state[std::size_t(pick)];
        ++total;
        s += std::pow(local(state), alpha);
        while (next_cp < horizons.size() && step == horizons[next_cp]) {
          partial[p][next_cp] = s;
          ++next_cp;
        }
      }
      while (next_cp < horizons.size()) partial[p][next_cp++] = s;
    }
  });

  MarkovResult out;
  out.horizons = horizons;
  out.paths = paths;
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    StableSum sum, sq;
    for (i64 p = 0; p < paths; ++p) {
      double v = partial[std::size_t(p)][h];
      sum.add(v);
      sq.add(v * v);
    }
    double mean = sum.value() / double(paths);
    double var = std::max(0.0, sq.value() / double(paths) - mean * mean);
    out.means.push_back(mean);
    out.std_errors.push_back(std::sqrt(var / double(paths)));
  }
  if (out.means.size() >= 2) {
    double last = out.means.back(), prev = out.means[out.means.size() - 2];
    out.final_delta_rel = std::fabs(last - prev) / std::max(1e-300, std::fabs(last));
  }
  return out;
}

}  // namespace nilflow
