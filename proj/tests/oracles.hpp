#pragma once

// Test-side oracles, independent of the library code paths they check.

#include <cmath>
#include <functional>
#include <vector>

#include "nilflow/common.hpp"
#include "nilflow/lattice.hpp"

namespace oracles {

using nilflow::i64;

// brute-force lattice action: apply single generator maps one at a time,
// spelled out directly from the defining formulas
inline nilflow::LatticePoint brute_apply_letters(const std::vector<std::pair<char, int>>& word,
                                                 nilflow::LatticePoint p, bool interval_conv) {
  // rightmost letter first; base shifts are the Proposition formulas
  // (f: k-ij, a: k-j, b: k+i, c: k+1), the Interval convention negates them
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    auto [ch, rep] = *it;
    for (int n = 0; n < std::abs(rep); ++n) {
      i64 dir = rep < 0 ? -1 : 1;
      i64 sc = interval_conv ? -1 : 1;
      switch (ch) {
        case 'e': p.i += dir; break;
        case 'd': p.j += dir; break;
        case 'f': p.k += dir * sc * (-p.i * p.j); break;
        case 'a': p.k += dir * sc * (-p.j); break;
        case 'b': p.k += dir * sc * (p.i); break;
        case 'c': p.k += dir * sc; break;
      }
    }
  }
  return p;
}

// one-sided difference quotients with Richardson extrapolation (ratio 10);
// used to confirm analytic endpoint derivatives
inline double richardson_one_sided(const std::function<double(double)>& f, double x0, double dir,
                                   double h0 = 1e-4, int levels = 4) {
  std::vector<double> q(levels);
  double f0 = f(x0);
  double h = h0;
  for (int i = 0; i < levels; ++i) {
    q[i] = (f(x0 + dir * h) - f0) / (dir * h);
    h /= 10.0;
  }
  // one extrapolation pass removes the O(h) term
  std::vector<double> r(levels - 1);
  for (int i = 0; i + 1 < levels; ++i) r[i] = (10.0 * q[i + 1] - q[i]) / 9.0;
  return r.back();
}

inline double central_difference(const std::function<double(double)>& f, double x0, double h) {
  return (f(x0 + h) - f(x0 - h)) / (2.0 * h);
}

// plain bisection inverse of a monotone function, for round-trip checks
inline double bisect_inverse(const std::function<double(double)>& f, double target, double lo,
                             double hi, int iters = 200) {
  for (int i = 0; i < iters; ++i) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) < target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracles
