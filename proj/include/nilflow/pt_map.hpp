#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "nilflow/chart.hpp"
#include "nilflow/common.hpp"

namespace nilflow {

// An interval map phi_{I',I}^{J',J}: I -> J determined by four lengths and
// the two left endpoints (I' and J' are the left neighbours of I and J).
// Evaluation routes through the charts: normalize x into I, push through
// chart_I, pull back through chart_J^{-1}, denormalize into J.
//
//   endpoint derivatives:  D(x-) = |J'|/|I'|,  D(x+) = |J|/|I|
//   equivariance:          map(J->K) after map(I->J) == map(I->K)
//   rho := (|I||J'|)/(|J||I'|) == 1  <=>  the map is affine
//
// Equivariance is exact because both sides reduce to chart_K^{-1} o chart_I.

struct PtMap {
  double len_i_prev = 0.0, len_i = 0.0;
  double len_j_prev = 0.0, len_j = 0.0;
  double left_i = 0.0, left_j = 0.0;

  void validate() const {
    if (!(len_i_prev > 0.0 && len_i > 0.0 && len_j_prev > 0.0 && len_j > 0.0))
      throw std::invalid_argument("PtMap: lengths must be positive");
  }

  double right_i() const { return left_i + len_i; }
  double right_j() const { return left_j + len_j; }
  double lam_i() const { return len_i_prev / len_i; }
  double lam_j() const { return len_j_prev / len_j; }
  double rho() const { return (len_i * len_j_prev) / (len_j * len_i_prev); }
};

struct EndpointDerivatives {
  double left = 0.0;
  double right = 0.0;
};

inline EndpointDerivatives endpoint_derivatives(const PtMap& m) {
  return {m.len_j_prev / m.len_i_prev, m.len_j / m.len_i};
}

namespace detail {

inline double unit_coordinate(const PtMap& m, double x) {
  double u = (x - m.left_i) / m.len_i;
  if (u < -1e-9 || u > 1.0 + 1e-9)
    throw std::domain_error("pt map: x outside the source interval");
  return u;
}

}  // namespace detail

inline double pt_eval(const ChartProfile& profile, const PtMap& m, double x) {
  m.validate();
  if (x <= m.left_i) {
    (void)detail::unit_coordinate(m, x);  // range check
    return m.left_j;
  }
  if (x >= m.right_i()) {
    (void)detail::unit_coordinate(m, x);
    return m.right_j();
  }
  double u = detail::unit_coordinate(m, x);
  if (u <= 0.0) return m.left_j;
  if (u >= 1.0) return m.right_j();
  double li = ChartProfile::quantize(m.lam_i());
  double lj = ChartProfile::quantize(m.lam_j());
  // identical charts compose to the identity: keep the affine case exact
  double v = u;
  if (li != lj) {
    auto ci = profile.chart(li);
    auto cj = profile.chart(lj);
    v = chart_inverse(*cj, chart_value(*ci, u));
  }
  return m.left_j + m.len_j * v;
}

inline double pt_derivative(const ChartProfile& profile, const PtMap& m, double x) {
  m.validate();
  double u = detail::unit_coordinate(m, x);
  if (x <= m.left_i || u <= 0.0) return m.len_j_prev / m.len_i_prev;
  if (x >= m.right_i() || u >= 1.0) return m.len_j / m.len_i;
  double li = ChartProfile::quantize(m.lam_i());
  double lj = ChartProfile::quantize(m.lam_j());
  if (li == lj) return m.len_j / m.len_i;
  auto ci = profile.chart(li);
  auto cj = profile.chart(lj);
  double v = chart_inverse(*cj, chart_value(*ci, u));
  return (m.len_j / m.len_i) * chart_speed(li, u) / chart_speed(lj, v);
}

// D log D(map) at x; the distortion bound reads
//   |D log D(map)(x)| <= (M/|I|) |rho - 1|
// for comparable quadruples, with M a profile constant.
inline double pt_dlog_derivative(const ChartProfile& profile, const PtMap& m, double x) {
  m.validate();
  double u = detail::unit_coordinate(m, x);
  if (u <= 0.0 || u >= 1.0)
    throw std::domain_error("pt_dlog_derivative: interior points only");
  double li = ChartProfile::quantize(m.lam_i());
  double lj = ChartProfile::quantize(m.lam_j());
  if (li == lj) return 0.0;
  auto ci = profile.chart(li);
  auto cj = profile.chart(lj);
  double v = chart_inverse(*cj, chart_value(*ci, u));
  double dv_du = chart_speed(li, u) / chart_speed(lj, v);
  return (chart_log_speed_prime(li, u) - chart_log_speed_prime(lj, v) * dv_du) / m.len_i;
}

// -- empirical distortion constant ---------------------------------------

struct RegularityProbeResult {
  double m_estimate = 0.0;        // sup |D log D| * |I| / |rho-1|
  double affine_residual = 0.0;   // sup |D log D| over rho == 1 samples
  std::size_t quadruples = 0;
  std::size_t rejected = 0;       // failed the comparability hypothesis
};

inline bool comparable(const PtMap& m, double factor = 2.0) {
  double lo = std::min(std::min(m.len_i_prev, m.len_i), std::min(m.len_j_prev, m.len_j));
  double hi = std::max(std::max(m.len_i_prev, m.len_i), std::max(m.len_j_prev, m.len_j));
  return hi <= factor * lo;
}

inline RegularityProbeResult regularity_probe(const ChartProfile& profile,
                                              std::span<const PtMap> maps,
                                              int points_per_map = 33) {
  RegularityProbeResult out;
  std::vector<double> local(maps.size(), 0.0);
  std::vector<double> local_affine(maps.size(), 0.0);
  std::vector<char> used(maps.size(), 0);
  parallel_for(maps.size(), [&](std::size_t idx) {
    const PtMap& m = maps[idx];
    if (!comparable(m)) return;
    used[idx] = 1;
    double rho = m.rho();
    for (int s = 1; s <= points_per_map; ++s) {
      double u = double(s) / (points_per_map + 1);
      double x = m.left_i + u * m.len_i;
      double dl = std::fabs(pt_dlog_derivative(profile, m, x));
      if (std::fabs(rho - 1.0) < 1e-12) {
        local_affine[idx] = std::max(local_affine[idx], dl);
      } else {
        local[idx] = std::max(local[idx], dl * m.len_i / std::fabs(rho - 1.0));
      }
    }
  });
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (!used[i]) {
      ++out.rejected;
      continue;
    }
    ++out.quadruples;
    out.m_estimate = std::max(out.m_estimate, local[i]);
    out.affine_residual = std::max(out.affine_residual, local_affine[i]);
  }
  return out;
}

}  // namespace nilflow
