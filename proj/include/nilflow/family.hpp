#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "nilflow/common.hpp"
#include "nilflow/lattice.hpp"
#include "nilflow/params.hpp"

namespace nilflow {

// -- theta spline ------------------------------------------------------------
//
// k -> |k|^r is not C^2 for r < 2, so the smooth surrogate theta agrees with
// |xi|^r on |xi| >= 1 and is an even polynomial A xi^2 + B xi^4 + C xi^6 on
// (-1,1).  The three coefficients are pinned by value, first and second
// derivative at xi = 1, which makes the splice exactly C^2:
//
//   C = (r-2)(r-4)/8,  B = (r-2-4C)/2,  A = 1 - B - C.
//
// For 0 < r <= 2 this theta is nondecreasing on [0,inf): theta'(xi)/xi is a
// quadratic in xi^2 whose minimum over [0,1] sits at xi = 1, where it equals
// r > 0.

struct ThetaSpline {
  double r = 0.0;
  double A = 0.0, B = 0.0, C = 0.0;

  ThetaSpline() = default;
  explicit ThetaSpline(double r_) : r(r_) {
    C = (r - 2.0) * (r - 4.0) / 8.0;
    B = (r - 2.0 - 4.0 * C) / 2.0;
    A = 1.0 - B - C;
  }

  double value(double xi) const {
    double t = std::fabs(xi);
    if (t >= 1.0) return std::pow(t, r);
    double u = t * t;
    return ((C * u + B) * u + A) * u;
  }

  double d1(double xi) const {
    double t = std::fabs(xi);
    double s = xi < 0.0 ? -1.0 : 1.0;
    if (t >= 1.0) return s * r * std::pow(t, r - 1.0);
    double u = t * t;
    return s * t * (2.0 * A + 4.0 * B * u + 6.0 * C * u * u);
  }

  double d2(double xi) const {
    double t = std::fabs(xi);
    if (t >= 1.0) return r * (r - 1.0) * std::pow(t, r - 2.0);
    double u = t * t;
    return 2.0 * A + 12.0 * B * u + 30.0 * C * u * u;
  }
};

// -- phi and its log ----------------------------------------------------------

struct PhiFunction {
  ParamSet params;
  ThetaSpline theta;

  PhiFunction() = default;
  explicit PhiFunction(const ParamSet& ps) : params(ps), theta(ps.r) {}

  // phi(i,j,xi) = 1 + |i|^p + |j|^q + theta(xi); for integer xi this equals
  // the reciprocal interval length bitwise (theta(k) = |k|^r at integers)
  double phi(i64 i, i64 j, double xi) const {
    return 1.0 + std::pow(std::llabs(i), params.p) + std::pow(std::llabs(j), params.q) +
           theta.value(xi);
  }

  double G(i64 i, i64 j, double xi) const { return std::log(phi(i, j, xi)); }

  double G1(i64 i, i64 j, double xi) const { return theta.d1(xi) / phi(i, j, xi); }

  // G'' = theta''/phi - (theta'/phi)^2
  double G2(i64 i, i64 j, double xi) const {
    double ph = phi(i, j, xi);
    double t1 = theta.d1(xi) / ph;
    return theta.d2(xi) / ph - t1 * t1;
  }

  double raw_length(i64 i, i64 j, i64 k) const { return 1.0 / phi(i, j, double(k)); }
};

// -- truncated lexicographic layout -------------------------------------------
//
// Box max(|i|,|j|,|k|) <= N, intervals packed contiguously in lexicographic
// order and normalized to [0,1].  Packing keeps endpoint sharing exact, so
// C^1-matching across consecutive intervals is testable at machine precision;
// the discarded tail is quantified separately by total-mass convergence.

class IntervalFamily {
 public:
  IntervalFamily(const ParamSet& ps, int N) : phi_(ps), N_(N) {
    if (N < 1) throw std::invalid_argument("IntervalFamily: N must be >= 1");
    if (!check_conditions(ps).feasible)
      throw std::invalid_argument("IntervalFamily: parameter set is infeasible");
    side_ = 2 * std::size_t(N) + 1;
    count_ = side_ * side_ * side_;
    raw_.resize(count_);
    left_.resize(count_ + 1);

    for (i64 i = -N_; i <= N_; ++i)
      for (i64 j = -N_; j <= N_; ++j)
        for (i64 k = -N_; k <= N_; ++k) raw_[flatten({i, j, k})] = phi_.raw_length(i, j, k);

    StableSum acc;
    for (double v : raw_) acc.add(v);
    total_ = acc.value();

    // left endpoints as prefix sums of raw lengths over the total; the last
    // entry lands on 1 exactly (total/total)
    StableSum run;
    long double tot = acc.value_ld();
    for (std::size_t f = 0; f < count_; ++f) {
      left_[f] = double(run.value_ld() / tot);
      run.add(raw_[f]);
    }
    left_[count_] = 1.0;
  }

  const PhiFunction& phi() const { return phi_; }
  const ParamSet& params() const { return phi_.params; }
  int truncation() const { return N_; }
  std::size_t count() const { return count_; }
  double total_raw() const { return total_; }
  double normalization() const { return 1.0 / total_; }

  bool in_box(const LatticePoint& p) const {
    return std::llabs(p.i) <= N_ && std::llabs(p.j) <= N_ && std::llabs(p.k) <= N_;
  }

  std::size_t flatten(const LatticePoint& p) const {
    if (!in_box(p)) throw std::out_of_range("IntervalFamily: index outside the box");
    std::size_t a = std::size_t(p.i + N_), b = std::size_t(p.j + N_), c = std::size_t(p.k + N_);
    return (a * side_ + b) * side_ + c;
  }

  LatticePoint unflatten(std::size_t f) const {
    i64 c = i64(f % side_);
    f /= side_;
    i64 b = i64(f % side_);
    i64 a = i64(f / side_);
    return {a - N_, b - N_, c - N_};
  }

  double raw_length(const LatticePoint& p) const { return raw_[flatten(p)]; }
  double left_endpoint(const LatticePoint& p) const { return left_[flatten(p)]; }
  double right_endpoint(const LatticePoint& p) const { return left_[flatten(p) + 1]; }

  // normalized length as raw/total: full relative precision at every scale.
  // The prefix endpoints position the intervals; differencing them instead
  // would lose ~4 digits on the smallest intervals and poison every
  // log-derivative built from a length ratio.
  double norm_length(const LatticePoint& p) const { return raw_[flatten(p)] / total_; }

  double midpoint(const LatticePoint& p) const {
    std::size_t f = flatten(p);
    return 0.5 * (left_[f] + left_[f + 1]);
  }

  std::optional<LatticePoint> locate(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) return std::nullopt;
    auto it = std::upper_bound(left_.begin(), left_.end(), x);
    std::size_t f = std::size_t(it - left_.begin());
    if (f == 0) return unflatten(0);  // x == 0.0
    --f;
    if (f >= count_) f = count_ - 1;  // x == 1.0
    return unflatten(f);
  }

  void export_csv(std::ostream& os) const {
    os << "i,j,k,raw_length,normalized_length,left_endpoint\n";
    os.precision(17);
    for (std::size_t f = 0; f < count_; ++f) {
      LatticePoint p = unflatten(f);
      os << p.i << ',' << p.j << ',' << p.k << ',' << raw_[f] << ',' << raw_[f] / total_ << ','
         << left_[f] << '\n';
    }
  }

 private:
  PhiFunction phi_;
  int N_;
  std::size_t side_ = 0, count_ = 0;
  double total_ = 0.0;
  std::vector<double> raw_;
  std::vector<double> left_;
};

inline IntervalFamily build_family(const ParamSet& ps, int N) { return IntervalFamily(ps, N); }

// raw mass of the full box at truncation N, without building a layout
inline double box_total(const ParamSet& ps, int N) {
  PhiFunction phi(ps);
  StableSum acc;
  for (i64 i = -N; i <= N; ++i)
    for (i64 j = -N; j <= N; ++j)
      for (i64 k = -N; k <= N; ++k) acc.add(phi.raw_length(i, j, k));
  return acc.value();
}

}  // namespace nilflow
