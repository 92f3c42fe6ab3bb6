#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "nilflow/common.hpp"
#include "nilflow/group.hpp"

namespace nilflow {

// The exact action of the group on Z^3.  Two sign conventions coexist:
//
//   Proposition:  e:(i+1,j,k)  d:(i,j+1,k)  f:(i,j,k-ij)
//                 a:(i,j,k-j)  b:(i,j,k+i)  c:(i,j,k+1)
//
//   Interval:     same e,d but f:(i,j,k+ij); the derived maps become
//                 a:(i,j,k+j)  b:(i,j,k-i)  c:(i,j,k-1)
//
// The Interval convention is the one induced by the interval assignment
// f: I_{i,j,k} -> I_{i,j,k+ij}; it is the Proposition action precomposed
// with the automorphism (f,e,d) -> (f^-1,e,d), which inverts a, b and c.
// Keeping c at k+1 under Interval would break the homomorphism property,
// so c is k-1 there.  Both conventions preserve the lexicographic order of
// Z^3, since every k-shift depends only on (i,j).

struct LatticePoint {
  i64 i = 0, j = 0, k = 0;
  bool operator==(const LatticePoint&) const = default;
};

inline bool lex_less(const LatticePoint& p, const LatticePoint& q) {
  if (p.i != q.i) return p.i < q.i;
  if (p.j != q.j) return p.j < q.j;
  return p.k < q.k;
}

inline std::string to_string(const LatticePoint& p) {
  return "(" + std::to_string(p.i) + "," + std::to_string(p.j) + "," + std::to_string(p.k) + ")";
}

inline std::ostream& operator<<(std::ostream& os, const LatticePoint& p) { return os << to_string(p); }

enum class Convention { Proposition, Interval };

inline LatticePoint apply_generator_power(Gen g, i64 exp, LatticePoint p, Convention conv) {
  // f^m, a^m, b^m, c^m shift k by m times a function of (i,j), so generator
  // powers apply in closed form
  i64 sign = (conv == Convention::Proposition) ? 1 : -1;
  switch (g) {
    case Gen::E: p.i = checked_add(p.i, exp); break;
    case Gen::D: p.j = checked_add(p.j, exp); break;
    case Gen::F: p.k = checked_sub(p.k, checked_mul(sign, checked_mul(exp, checked_mul(p.i, p.j)))); break;
    case Gen::A: p.k = checked_sub(p.k, checked_mul(sign, checked_mul(exp, p.j))); break;
    case Gen::B: p.k = checked_add(p.k, checked_mul(sign, checked_mul(exp, p.i))); break;
    case Gen::C: p.k = checked_add(p.k, checked_mul(sign, exp)); break;
  }
  return p;
}

inline LatticePoint apply_generator(Gen g, const LatticePoint& p, Convention conv) {
  return apply_generator_power(g, 1, p, conv);
}

// Left action: reading the normal form f^n1 e^n2 d^n3 a^n4 b^n5 c^n6, the
// rightmost factor acts first, so apply(g*h, p) == apply(g, apply(h, p)).
inline LatticePoint apply(const N4Element& g, LatticePoint p, Convention conv) {
  for (int idx = 5; idx >= 0; --idx)
    if (g.n[idx] != 0) p = apply_generator_power(static_cast<Gen>(idx), g.n[idx], p, conv);
  return p;
}

// ---------------------------------------------------------------------------

struct LatticeCheckReport {
  i64 samples = 0;
  i64 violations = 0;
  std::string first_failure;
  bool ok() const { return violations == 0; }
};

namespace detail {
inline N4Element random_element(SplitMix64& rng, i64 lo, i64 hi) {
  N4Element g;
  for (auto& e : g.n) e = rng.uniform_int(lo, hi);
  return g;
}
inline LatticePoint random_point(SplitMix64& rng, i64 lo, i64 hi) {
  return {rng.uniform_int(lo, hi), rng.uniform_int(lo, hi), rng.uniform_int(lo, hi)};
}
}  // namespace detail

inline LatticeCheckReport check_homomorphism(i64 samples, u64 seed, Convention conv,
                                             i64 exp_bound = 10, i64 coord_bound = 50) {
  LatticeCheckReport rep;
  SplitMix64 rng(seed);
  for (i64 s = 0; s < samples; ++s) {
    N4Element g = detail::random_element(rng, -exp_bound, exp_bound);
    N4Element h = detail::random_element(rng, -exp_bound, exp_bound);
    LatticePoint p = detail::random_point(rng, -coord_bound, coord_bound);
    LatticePoint lhs = apply(multiply(g, h), p, conv);
    LatticePoint rhs = apply(g, apply(h, p, conv), conv);
    ++rep.samples;
    if (!(lhs == rhs)) {
      ++rep.violations;
      if (rep.first_failure.empty())
        rep.first_failure = "g=" + to_string(g) + " h=" + to_string(h) + " p=" + to_string(p) +
                            " lhs=" + to_string(lhs) + " rhs=" + to_string(rhs);
    }
  }
  return rep;
}

inline LatticeCheckReport check_order_preservation(i64 samples, u64 seed, Convention conv,
                                                   i64 exp_bound = 10, i64 coord_bound = 50) {
  LatticeCheckReport rep;
  SplitMix64 rng(seed);
  for (i64 s = 0; s < samples; ++s) {
    N4Element g = detail::random_element(rng, -exp_bound, exp_bound);
    LatticePoint p = detail::random_point(rng, -coord_bound, coord_bound);
    LatticePoint q = detail::random_point(rng, -coord_bound, coord_bound);
    if (p == q) continue;
    if (lex_less(q, p)) std::swap(p, q);
    ++rep.samples;
    if (!lex_less(apply(g, p, conv), apply(g, q, conv))) {
      ++rep.violations;
      if (rep.first_failure.empty())
        rep.first_failure = "g=" + to_string(g) + " p=" + to_string(p) + " q=" + to_string(q);
    }
  }
  return rep;
}

}  // namespace nilflow
