#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "nilflow/common.hpp"

namespace nilflow {

// One-parameter chart family h_lam: (0,1) -> R.  Each chart is a smooth
// increasing bijection with second-order poles at the ends,
//
//     h'(t) = lam / t^2        on (0, 1/3]
//     h'(t) = 1 / (1-t)^2      on [2/3, 1)
//
// blended geometrically in the middle third:
//
//     log h'(t) = (1-w(t)) log(lam t^-2) + w(t) log((1-t)^-2),
//
// with w a fixed C-infinity step (0 below 1/3, 1 above 2/3).  Anchoring
// h(1/2) = 0 fixes the chart.  Composing chart_J^{-1} after chart_I yields
// interval maps that are equivariant under composition by construction;
// the pole coefficients are tuned so the endpoint derivatives come out as
// the neighbour-length ratios.  lam = (length of left neighbour)/(length).

// -- smooth step ---------------------------------------------------------

namespace stepfn {

inline double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// w == 0 on (-inf,1/3], w == 1 on [2/3,inf), C-infinity monotone between
inline double w(double t) {
  double x = 3.0 * t - 1.0;
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double b0 = bump(x), b1 = bump(1.0 - x);
  return b0 / (b0 + b1);
}

inline double w_prime(double t) {
  double x = 3.0 * t - 1.0;
  if (x <= 0.0 || x >= 1.0) return 0.0;
  double b0 = bump(x), b1 = bump(1.0 - x);
  double d0 = b0 / (x * x);
  double d1 = b1 / ((1.0 - x) * (1.0 - x));
  double den = b0 + b1;
  return 3.0 * (d0 * b1 + b0 * d1) / (den * den);
}

}  // namespace stepfn

// h'(t) for chart parameter lam, valid on all of (0,1)
inline double chart_speed(double lam, double t) {
  if (t <= 1.0 / 3.0) return lam / (t * t);
  if (t >= 2.0 / 3.0) return 1.0 / ((1.0 - t) * (1.0 - t));
  double W = stepfn::w(t);
  return std::exp((1.0 - W) * (std::log(lam) - 2.0 * std::log(t)) -
                  2.0 * W * std::log1p(-t));
}

// (log h')'(t)
inline double chart_log_speed_prime(double lam, double t) {
  if (t <= 1.0 / 3.0) return -2.0 / t;
  if (t >= 2.0 / 3.0) return 2.0 / (1.0 - t);
  double W = stepfn::w(t);
  double Wp = stepfn::w_prime(t);
  return -Wp * (std::log(lam) - 2.0 * std::log(t)) - 2.0 * (1.0 - W) / t -
         2.0 * Wp * std::log1p(-t) + 2.0 * W / (1.0 - t);
}

// -- quadrature ------------------------------------------------------------

namespace quadrature {

// 12-point Gauss-Legendre on [-1,1]
inline constexpr std::array<double, 6> kNodes = {
    0.1252334085114689, 0.3678314989981802, 0.5873179542866175,
    0.7699026741943047, 0.9041172563704749, 0.9815606342467192};
inline constexpr std::array<double, 6> kWeights = {
    0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
    0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

template <class F>
double gauss12(const F& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 6; ++i)
    s += kWeights[i] * (f(c - h * kNodes[i]) + f(c + h * kNodes[i]));
  return s * h;
}

template <class F>
double composite(const F& f, double a, double b, int panels) {
  StableSum s;
  for (int i = 0; i < panels; ++i) {
    double x0 = a + (b - a) * double(i) / panels;
    double x1 = a + (b - a) * double(i + 1) / panels;
    s.add(gauss12(f, x0, x1));
  }
  return s.value();
}

}  // namespace quadrature

// -- per-parameter chart data -----------------------------------------------

struct ChartData {
  double lam = 1.0;
  double ql = 0.0;  // integral of h' over [1/3, 1/2]
  double qr = 0.0;  // integral of h' over [1/2, 2/3]
  // cumulative h at uniform nodes over [1/3, 2/3]; built on first use
  mutable std::vector<double> mid;
  mutable std::once_flag mid_once;
  static constexpr int kMidPanels = 128;
  static constexpr int kBoundaryPanels = 32;

  explicit ChartData(double lam_) : lam(lam_) {
    auto f = [&](double t) { return chart_speed(lam, t); };
    ql = quadrature::composite(f, 1.0 / 3.0, 0.5, kBoundaryPanels);
    qr = quadrature::composite(f, 0.5, 2.0 / 3.0, kBoundaryPanels);
  }

  const std::vector<double>& middle_table() const {
    std::call_once(mid_once, [&] {
      std::vector<double> h(kMidPanels + 1);
      StableSum acc;
      acc.add(-ql);
      h[0] = -ql;  // h(1/3)
      auto f = [&](double t) { return chart_speed(lam, t); };
      for (int m = 0; m < kMidPanels; ++m) {
        double t0 = node(m), t1 = node(m + 1);
        acc.add(quadrature::gauss12(f, t0, t1));
        h[m + 1] = acc.value();
      }
      mid = std::move(h);
    });
    return mid;
  }

  static double node(int m) { return 1.0 / 3.0 + (1.0 / 3.0) * double(m) / kMidPanels; }
};

// h_lam(u); u must lie in (0,1)
inline double chart_value(const ChartData& cd, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("chart_value: u outside (0,1)");
  if (u <= 1.0 / 3.0) return -cd.lam / u + 3.0 * cd.lam - cd.ql;
  if (u >= 2.0 / 3.0) return cd.qr - 3.0 + 1.0 / (1.0 - u);
  const auto& H = cd.middle_table();
  int m = int((u - 1.0 / 3.0) * 3.0 * ChartData::kMidPanels);
  if (m >= ChartData::kMidPanels) m = ChartData::kMidPanels - 1;
  auto f = [&](double t) { return chart_speed(cd.lam, t); };
  return H[m] + quadrature::gauss12(f, ChartData::node(m), u);
}

// h_lam^{-1}(s); defined for every finite s
inline double chart_inverse(const ChartData& cd, double s) {
  if (!std::isfinite(s)) throw std::domain_error("chart_inverse: s must be finite");
  if (s <= -cd.ql) {
    double den = 3.0 * cd.lam - cd.ql - s;
    return cd.lam / den;
  }
  if (s >= cd.qr) return 1.0 - 1.0 / (s + 3.0 - cd.qr);

  const auto& H = cd.middle_table();
  int lo = 0, hi = ChartData::kMidPanels;
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (H[mid] <= s) lo = mid;
    else hi = mid;
  }
  double a = ChartData::node(lo), b = ChartData::node(hi);
  double v = 0.5 * (a + b);
  double tol = 1e-13 * std::max(1.0, std::fabs(s));
  for (int it = 0; it < 60; ++it) {
    double res = chart_value(cd, v) - s;
    if (std::fabs(res) <= tol) break;
    if (res > 0.0) b = v; else a = v;
    double step = res / chart_speed(cd.lam, v);
    double vn = v - step;
    v = (vn > a && vn < b) ? vn : 0.5 * (a + b);
  }
  return v;
}

// -- shared profile with memoized charts --------------------------------------
//
// Charts are keyed by their parameter quantized at 1e-12 so that maps built
// from equal length ratios share one chart object exactly; the quantized
// value is used throughout a chart's formulas, keeping every evaluation
// self-consistent.

class ChartProfile {
 public:
  static double quantize(double lam) {
    if (!(lam > 0.0) || lam < 1e-9 || lam > 1e9)
      throw std::domain_error("ChartProfile: length ratio out of supported range");
    return std::round(lam * 1e12) / 1e12;
  }

  std::shared_ptr<const ChartData> chart(double lam) const {
    double q = quantize(lam);
    i64 key = i64(std::llround(q * 1e12));
    {
      std::shared_lock lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    auto fresh = std::make_shared<const ChartData>(q);
    std::unique_lock lock(mutex_);
    auto [it, inserted] = cache_.emplace(key, fresh);
    return it->second;
  }

  std::size_t cached_count() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
  }

  // deterministic content hash over profile constants and the sorted cache
  u64 content_hash() const {
    Fnv1a h;
    h.add(std::string("pole-exponent-2 bump-step gl12"));
    h.add(u64(ChartData::kMidPanels));
    h.add(u64(ChartData::kBoundaryPanels));
    std::vector<i64> keys;
    {
      std::shared_lock lock(mutex_);
      keys.reserve(cache_.size());
      for (const auto& kv : cache_) keys.push_back(kv.first);
    }
    std::sort(keys.begin(), keys.end());
    std::shared_lock lock(mutex_);
    for (i64 k : keys) {
      h.add(u64(k));
      auto it = cache_.find(k);
      h.add(it->second->ql);
      h.add(it->second->qr);
    }
    return h.h;
  }

 private:
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<i64, std::shared_ptr<const ChartData>> cache_;
};

}  // namespace nilflow
