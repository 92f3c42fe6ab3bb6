#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "nilflow/common.hpp"
#include "nilflow/realization.hpp"

namespace nilflow {

// Empirical Holder constant of log Dg over [0,1]:
//
//     C = max |log Dg(x) - log Dg(y)| / |x - y|^alpha.
//
// The maximization is stratified the way the estimates reduce the problem:
//   (a) within-interval pairs,
//   (b) pairs in distinct intervals I_{i,j,k}, I_{i,j,k'} sharing (i,j),
//       sub-labelled by the three k-regimes
//       [0, 2|ij|], [2|ij|+1, S^{1/r}], [S^{1/r}+1, inf),
//   (c) endpoint pairs, where log Dg has closed form.
// Pairs across different (i,j) blocks are never compared: under truncation
// the block seams are artifacts of the box, not of the action.

enum class PointTag { Interior = 0, LeftEnd = 1, RightEnd = 2 };

struct HolderPoint {
  double x = 0.0;
  double log_d = 0.0;
  LatticePoint idx;
  PointTag tag = PointTag::Interior;
};

struct HolderArg {
  HolderPoint a, b;
  double quotient = 0.0;
  bool valid = false;
};

struct HolderStratum {
  double c = 0.0;
  HolderArg arg;
  void offer(const HolderPoint& p, const HolderPoint& q, double quotient) {
    if (quotient > c) {
      c = quotient;
      arg = {p, q, quotient, true};
    }
  }
  void merge(const HolderStratum& o) {
    if (o.c > c) *this = o;
  }
};

struct HolderPlan {
  int interior_per_interval = 2;
  u64 seed = 0;
};

struct HolderReport {
  Letter3 gen = Letter3::F;
  double alpha = 0.0;
  int N = 0;
  std::size_t pair_count = 0;
  double c = 0.0;
  HolderArg arg;
  HolderStratum within;     // stratum (a)
  HolderStratum cross;      // stratum (b), all regimes
  HolderStratum endpoints;  // stratum (c)
  // regime sub-reports for stratum (b): 0,1,2 the paper regimes, 3 = mixed
  std::array<HolderStratum, 4> regimes;
};

namespace detail {

inline int regime_of(i64 k, i64 kp, double abs_ij, double s_pow) {
  if (k > kp) std::swap(k, kp);
  if ((k < 0 && kp > 0)) return 3;
  double lo = double(std::min(std::llabs(k), std::llabs(kp)));
  double hi = double(std::max(std::llabs(k), std::llabs(kp)));
  if (hi <= 2.0 * abs_ij) return 0;
  if (lo >= 2.0 * abs_ij + 1.0 && hi <= s_pow) return 1;
  if (lo >= s_pow + 1.0) return 2;
  return 3;
}

}  // namespace detail

inline HolderReport holder_constant(const Realization& real, Letter3 gen, double alpha,
                                    const HolderPlan& plan = {}) {
  const IntervalFamily& fam = real.family();
  const ParamSet& ps = fam.params();
  const int N = fam.truncation();

  HolderReport rep;
  rep.gen = gen;
  rep.alpha = alpha;
  rep.N = N;

  const i64 side = 2 * i64(N) + 1;
  const std::size_t blocks = std::size_t(side) * std::size_t(side);

  struct BlockResult {
    HolderStratum within, cross, endpoints;
    std::array<HolderStratum, 4> regimes;
    std::size_t pairs = 0;
  };
  std::vector<BlockResult> partial(blocks);

  parallel_for(blocks, [&](std::size_t bi) {
    i64 i = i64(bi) / side - N;
    i64 j = i64(bi) % side - N;
    BlockResult& out = partial[bi];

    std::vector<HolderPoint> pts;
    for (i64 k = -N; k <= N; ++k) {
      LatticePoint idx{i, j, k};
      if (!real.safe_forward(gen, idx)) continue;
      PtMap m = real.forward_map(gen, idx);
      pts.push_back({fam.left_endpoint(idx), std::log(m.len_j_prev / m.len_i_prev), idx,
                     PointTag::LeftEnd});
      pts.push_back({fam.right_endpoint(idx), std::log(m.len_j / m.len_i), idx,
                     PointTag::RightEnd});
      SplitMix64 rng(plan.seed, u64(fam.flatten(idx)));
      for (int s = 0; s < plan.interior_per_interval; ++s) {
        double u = 0.1 + 0.8 * (double(s) + rng.uniform()) / plan.interior_per_interval;
        double x = m.left_i + u * m.len_i;
        pts.push_back({x, std::log(pt_derivative(real.profile(), m, x)), idx,
                       PointTag::Interior});
      }
    }

    double abs_ij = std::fabs(double(i * j));
    double s_pow = std::pow(1.0 + std::pow(std::llabs(i), ps.p) + std::pow(std::llabs(j), ps.q),
                            1.0 / ps.r);
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = a + 1; b < pts.size(); ++b) {
        double dist = std::fabs(pts[a].x - pts[b].x);
        if (dist < 1e-14) continue;
        double quotient = std::fabs(pts[a].log_d - pts[b].log_d) / std::pow(dist, alpha);
        ++out.pairs;
        if (pts[a].idx == pts[b].idx) {
          out.within.offer(pts[a], pts[b], quotient);
        } else {
          out.cross.offer(pts[a], pts[b], quotient);
          int reg = detail::regime_of(pts[a].idx.k, pts[b].idx.k, abs_ij, s_pow);
          out.regimes[std::size_t(reg)].offer(pts[a], pts[b], quotient);
        }
        if (pts[a].tag != PointTag::Interior && pts[b].tag != PointTag::Interior)
          out.endpoints.offer(pts[a], pts[b], quotient);
      }
  });

  for (const BlockResult& br : partial) {
    rep.within.merge(br.within);
    rep.cross.merge(br.cross);
    rep.endpoints.merge(br.endpoints);
    for (int r = 0; r < 4; ++r) rep.regimes[std::size_t(r)].merge(br.regimes[std::size_t(r)]);
    rep.pair_count += br.pairs;
  }
  rep.c = std::max(rep.within.c, rep.cross.c);
  rep.arg = rep.within.c >= rep.cross.c ? rep.within.arg : rep.cross.arg;
  return rep;
}

// recompute the quotient of a stored argmax pair from scratch
inline double reproduce_quotient(const Realization& real, Letter3 gen, double alpha,
                                 const HolderArg& arg) {
  if (!arg.valid) return 0.0;
  auto log_d = [&](const HolderPoint& p) {
    PtMap m = real.forward_map(gen, p.idx);
    switch (p.tag) {
      case PointTag::LeftEnd: return std::log(m.len_j_prev / m.len_i_prev);
      case PointTag::RightEnd: return std::log(m.len_j / m.len_i);
      default: return std::log(pt_derivative(real.profile(), m, p.x));
    }
  };
  return std::fabs(log_d(arg.a) - log_d(arg.b)) / std::pow(std::fabs(arg.a.x - arg.b.x), alpha);
}

// general-word variant over a sampled grid of safe points; used for words
// like "e e^-1" where the constant must vanish
inline double holder_constant_word(const Realization& real, const RWord& w, double alpha,
                                   const std::vector<double>& xs) {
  std::vector<std::pair<double, double>> vals;
  for (double x : xs) {
    auto idx = real.family().locate(x);
    if (!idx || !real.safe_for_word(w, *idx)) continue;
    vals.emplace_back(x, std::log(real.derivative(w, x)));
  }
  double c = 0.0;
  for (std::size_t a = 0; a < vals.size(); ++a)
    for (std::size_t b = a + 1; b < vals.size(); ++b) {
      double dist = std::fabs(vals[a].first - vals[b].first);
      if (dist < 1e-14) continue;
      c = std::max(c, std::fabs(vals[a].second - vals[b].second) / std::pow(dist, alpha));
    }
  return c;
}

}  // namespace nilflow
