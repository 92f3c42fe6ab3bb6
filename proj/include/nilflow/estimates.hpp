#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nilflow/common.hpp"
#include "nilflow/family.hpp"

namespace nilflow {

// Box sweeps over the closed-form quantities behind the Holder estimates.
// Every "uniformly bounded" claim is tested as stabilization of the box
// maximum across increasing truncation radii; the sweeps only use the
// length formula, so no layout is required.

struct BoxMax {
  double value = 0.0;
  LatticePoint argmax;
};

// max over the box of phi(i,j,k)^alpha * |log(|I||J'| / (|I'||J|))| with
// I = I_{i,j,k}, J = I_{i,j,k+ij}, I' = I_{i,j,k-1}, J' = I_{i,j,k+ij-1}
inline BoxMax case1_bound(const ParamSet& ps, int N, double alpha) {
  PhiFunction phi(ps);
  BoxMax out;
  for (i64 i = -N; i <= N; ++i)
    for (i64 j = -N; j <= N; ++j)
      for (i64 k = -N; k <= N; ++k) {
        double ij = double(i * j);
        double num = phi.G(i, j, double(k)) + phi.G(i, j, double(k) + ij - 1.0) -
                     phi.G(i, j, double(k) - 1.0) - phi.G(i, j, double(k) + ij);
        double v = std::pow(phi.phi(i, j, double(k)), alpha) * std::fabs(num);
        if (v > out.value) out = {v, {i, j, k}};
      }
  return out;
}

struct IslaResult {
  double max_ratio = 1.0;
  LatticePoint argmax;
  double argmax_xi = 0.0;
};

// phi(i,j,xi) vs phi(i,j,k) over the hypothesis region
// |xi - k| <= S^{1/r} + 2|ij|, S = 1 + |i|^p + |j|^q
inline IslaResult isla_check(const ParamSet& ps, int N, int xi_samples = 33) {
  PhiFunction phi(ps);
  IslaResult out;
  for (i64 i = -N; i <= N; ++i)
    for (i64 j = -N; j <= N; ++j) {
      double S = 1.0 + std::pow(std::llabs(i), ps.p) + std::pow(std::llabs(j), ps.q);
      double radius = std::pow(S, 1.0 / ps.r) + 2.0 * std::fabs(double(i * j));
      for (i64 k = -N; k <= N; ++k) {
        double ph_k = phi.phi(i, j, double(k));
        for (int s = 0; s <= xi_samples; ++s) {
          double xi = double(k) - radius + 2.0 * radius * double(s) / xi_samples;
          double ratio = phi.phi(i, j, xi) / ph_k;
          double worst = std::max(ratio, 1.0 / ratio);
          if (worst > out.max_ratio) out = {worst, {i, j, k}, xi};
        }
      }
    }
  return out;
}

struct SecondIncrementResult {
  double min_slack = 0.0;  // min over samples of bound - |increment|; >= -1e-9 means no violation
  i64 violations = 0;
  i64 samples = 0;
};

// |G(k+a+b) - G(k+a) - G(k+b) + G(k)| <= |ab| * max_{hull} |G''|
inline SecondIncrementResult second_increment_check(const ParamSet& ps, int N, i64 samples,
                                                    u64 seed, int hull_grid = 257) {
  PhiFunction phi(ps);
  SplitMix64 rng(seed);
  SecondIncrementResult out;
  out.min_slack = std::numeric_limits<double>::infinity();
  auto run_one = [&](i64 i, i64 j, i64 k, double a, double b) {
    double inc = phi.G(i, j, k + a + b) - phi.G(i, j, k + a) - phi.G(i, j, double(k) + b) +
                 phi.G(i, j, double(k));
    double lo = double(k) + std::min({0.0, a, b, a + b});
    double hi = double(k) + std::max({0.0, a, b, a + b});
    double g2max = 0.0;
    for (int s = 0; s <= hull_grid; ++s) {
      double xi = lo + (hi - lo) * double(s) / hull_grid;
      g2max = std::max(g2max, std::fabs(phi.G2(i, j, xi)));
    }
    double slack = std::fabs(a * b) * g2max - std::fabs(inc);
    out.min_slack = std::min(out.min_slack, slack);
    if (slack < -1e-9) ++out.violations;
    ++out.samples;
  };
  for (i64 s = 0; s < samples; ++s) {
    i64 i = rng.uniform_int(-N, N), j = rng.uniform_int(-N, N), k = rng.uniform_int(-N, N);
    double a = double(rng.uniform_int(-10, 10));
    double b = double(rng.uniform_int(-10, 10));
    run_one(i, j, k, a, b);
    // the case-1 instantiation a = -1, b = ij
    run_one(i, j, k, -1.0, double(i * j));
  }
  return out;
}

// the weighted monomial bound |i|^a1 |j|^a2 |k|^a3 <= M phi^b when
// a1/p + a2/q + a3/r <= b; checked for the exponent tuples the estimates use
struct EqIneqEntry {
  double a1 = 0, a2 = 0, a3 = 0, b = 0;
  std::string role;
  double max_ratio = 0.0;
  bool hypothesis_ok = false;
};

inline std::vector<EqIneqEntry> eq_ineq_check(const ParamSet& ps, int N, double alpha) {
  PhiFunction phi(ps);
  const double r = ps.r;
  std::vector<EqIneqEntry> entries = {
      {1.0, 1.0, 0.0, 1.0 - alpha, "case1/regime1: |ij| vs phi^(1-alpha)"},
      {r, r, 0.0, 0.5, "isla: |ij|^r vs phi^(1/2)"},
      {ps.p * (1.0 - alpha) / r + (r - 1.0), r - 1.0, 0.0, 1.0 - alpha,
       "regime2 (i side)"},
      {r - 1.0, ps.q * (1.0 - alpha) / r + (r - 1.0), 0.0, 1.0 - alpha,
       "regime2 (j side)"},
      {1.0, 1.0, (alpha + 1.0) * (r - 1.0), 1.0, "regime3"},
  };
  for (auto& e : entries) {
    e.hypothesis_ok = e.a1 / ps.p + e.a2 / ps.q + e.a3 / ps.r <= e.b + 1e-12;
    for (i64 i = -N; i <= N; ++i)
      for (i64 j = -N; j <= N; ++j)
        for (i64 k = -N; k <= N; ++k) {
          double num = std::pow(std::llabs(i), e.a1) * std::pow(std::llabs(j), e.a2) *
                       std::pow(std::llabs(k), e.a3);
          double v = num / std::pow(phi.phi(i, j, double(k)), e.b);
          e.max_ratio = std::max(e.max_ratio, v);
        }
  }
  return entries;
}

}  // namespace nilflow
