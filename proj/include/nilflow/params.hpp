#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "nilflow/common.hpp"

namespace nilflow {

// Exponent parameters (alpha, p, q, r) for the interval-length family
// |I_{i,j,k}| = 1 / (|i|^p + |j|^q + |k|^r + 1).  Feasibility means the
// eight inequality conditions below hold simultaneously; they are jointly
// satisfiable exactly when alpha < 1/2, with (p,q,r) = (4/alpha, 4/alpha, 4/3)
// always a witness.

struct ParamSet {
  double alpha = 0.0;
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
};

struct ConditionReport {
  // (i)   alpha + r <= 2
  // (ii)  4r <= p
  // (iii) 4r <= q
  // (iv)  4 <= p(1-alpha)
  // (v)   4 <= q(1-alpha)
  // (vi)  1/p + 1/q + 1/r < 1
  // (vii) alpha <= 1/p + 1/r  and  alpha <= r/(p(r-1))
  // (viii)alpha <= 1/q + 1/r  and  alpha <= r/(q(r-1))
  std::array<bool, 8> holds{};
  bool feasible = false;
};

inline ConditionReport check_conditions(const ParamSet& ps) {
  if (!(ps.alpha > 0.0 && ps.alpha < 1.0))
    throw std::domain_error("check_conditions: alpha must lie in (0,1)");
  if (!(ps.p > 0.0 && ps.q > 0.0 && ps.r > 0.0))
    throw std::domain_error("check_conditions: p, q, r must be positive");

  const double a = ps.alpha, p = ps.p, q = ps.q, r = ps.r;
  ConditionReport rep;
  rep.holds[0] = a + r <= 2.0;
  rep.holds[1] = 4.0 * r <= p;
  rep.holds[2] = 4.0 * r <= q;
  rep.holds[3] = 4.0 <= p * (1.0 - a);
  rep.holds[4] = 4.0 <= q * (1.0 - a);
  rep.holds[5] = 1.0 / p + 1.0 / q + 1.0 / r < 1.0;
  // conditions (vii)/(viii) need r > 1 for their second half; (vi) already
  // forces 1/r < 1, but guard against division through zero on raw input
  rep.holds[6] = a <= 1.0 / p + 1.0 / r && r > 1.0 && a <= r / (p * (r - 1.0));
  rep.holds[7] = a <= 1.0 / q + 1.0 / r && r > 1.0 && a <= r / (q * (r - 1.0));
  rep.feasible = true;
  for (bool h : rep.holds) rep.feasible = rep.feasible && h;
  return rep;
}

inline bool feasible(const ParamSet& ps) { return check_conditions(ps).feasible; }

struct GridSpec {
  // logarithmic grid for p and q, linear for r; the closed-form candidate
  // (4/alpha, 4/alpha, 4/3) is always tried first
  double pq_lo = 4.0, pq_hi = 400.0;
  int pq_points = 64;
  double r_lo = 1.0, r_hi = 2.0;  // r sampled in (r_lo, r_hi]
  int r_points = 64;
};

inline std::optional<ParamSet> search_feasible(double alpha, const GridSpec& grid = {}) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("search_feasible: alpha must lie in (0,1)");

  ParamSet candidate{alpha, 4.0 / alpha, 4.0 / alpha, 4.0 / 3.0};
  if (check_conditions(candidate).feasible) return candidate;

  for (int ri = 1; ri <= grid.r_points; ++ri) {
    double r = grid.r_lo + (grid.r_hi - grid.r_lo) * double(ri) / double(grid.r_points);
    for (int pi = 0; pi < grid.pq_points; ++pi) {
      double p = grid.pq_lo * std::pow(grid.pq_hi / grid.pq_lo,
                                       double(pi) / double(grid.pq_points - 1));
      for (int qi = 0; qi < grid.pq_points; ++qi) {
        double q = grid.pq_lo * std::pow(grid.pq_hi / grid.pq_lo,
                                         double(qi) / double(grid.pq_points - 1));
        ParamSet ps{alpha, p, q, r};
        if (check_conditions(ps).feasible) return ps;
      }
    }
  }
  return std::nullopt;
}

}  // namespace nilflow
