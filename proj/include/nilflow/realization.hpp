#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nilflow/chart.hpp"
#include "nilflow/family.hpp"
#include "nilflow/group.hpp"
#include "nilflow/lattice.hpp"
#include "nilflow/pt_map.hpp"

namespace nilflow {

// The three homeomorphisms of [0,1].  On each interval I_{i,j,k} the
// generator acts by the interval map whose source pair is
// (I_{i,j,k-1}, I_{i,j,k}) and whose target pair is indexed by
//
//     e: (i+1, j, k)      d: (i, j+1, k)      f: (i, j, k+ij)
//
// (the Interval sign convention).  Under truncation a map exists only where
// all four indices sit inside the box; evaluation outside that safe domain
// is refused rather than extrapolated, so no boundary artifact can leak
// into the statistics built on top.

enum class Letter3 { E, D, F };

inline char letter3_char(Letter3 l) { return l == Letter3::E ? 'e' : (l == Letter3::D ? 'd' : 'f'); }

inline Gen letter3_gen(Letter3 l) {
  switch (l) {
    case Letter3::E: return Gen::E;
    case Letter3::D: return Gen::D;
    default: return Gen::F;
  }
}

// word over e,d,f with integer exponents, leftmost factor acting last
struct RWord {
  std::vector<std::pair<Letter3, i64>> factors;

  void push(Letter3 l, i64 exp) {
    if (exp != 0) factors.emplace_back(l, exp);
  }

  RWord inverse() const {
    RWord w;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it)
      w.factors.emplace_back(it->first, -it->second);
    return w;
  }

  RWord then(const RWord& right) const {  // concatenation: (*this) * right
    RWord w = *this;
    w.factors.insert(w.factors.end(), right.factors.begin(), right.factors.end());
    return w;
  }

  N4Element element() const {
    N4Element acc = N4Element::identity();
    for (auto [l, exp] : factors) acc = multiply(acc, N4Element::generator(letter3_gen(l), exp));
    return acc;
  }

  std::string str() const {
    std::string s;
    for (auto [l, exp] : factors) {
      if (!s.empty()) s += ' ';
      s += letter3_char(l);
      if (exp != 1) s += "^" + std::to_string(exp);
    }
    return s.empty() ? "1" : s;
  }
};

inline RWord parse_rword(const std::string& text) {
  RWord w;
  std::size_t i = 0;
  auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
  skip_ws();
  if (i < text.size() && text[i] == '1') {
    ++i;
    skip_ws();
    if (i != text.size()) throw std::invalid_argument("parse_rword: trailing input");
    return w;
  }
  while (i < text.size()) {
    Letter3 l;
    switch (text[i]) {
      case 'e': l = Letter3::E; break;
      case 'd': l = Letter3::D; break;
      case 'f': l = Letter3::F; break;
      default:
        throw std::invalid_argument(std::string("parse_rword: only e,d,f allowed, got ") + text[i]);
    }
    ++i;
    i64 exp = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      std::size_t start = i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i == start) throw std::invalid_argument("parse_rword: missing exponent");
      exp = std::stoll(text.substr(start, i - start));
    }
    w.push(l, exp);
    skip_ws();
  }
  return w;
}

// commutator words realizing a, b, c through e,d,f:
//   a = [f,e],  b = [d,f],  c = [d,[f,e]]
inline RWord word_a() { return parse_rword("f e f^-1 e^-1"); }
inline RWord word_b() { return parse_rword("d f d^-1 f^-1"); }
inline RWord word_c() {
  RWord a = word_a();
  RWord d;
  d.push(Letter3::D, 1);
  return d.then(a).then(d.inverse()).then(a.inverse());
}

struct UnsafeWordError : std::domain_error {
  using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------

class Realization {
 public:
  Realization(std::shared_ptr<const IntervalFamily> family, std::shared_ptr<ChartProfile> profile)
      : family_(std::move(family)), profile_(std::move(profile)) {
    std::size_t n = family_->count();
    len_.resize(n);
    for (std::size_t f = 0; f < n; ++f) {
      LatticePoint p = family_->unflatten(f);
      len_[f] = family_->norm_length(p);
    }
  }

  const IntervalFamily& family() const { return *family_; }
  ChartProfile& profile() const { return *profile_; }

  // test hook: scale the target length of the forward map of `letter`
  // rooted at `src`; used to demonstrate that the C^1 checker detects a
  // genuinely broken table
  void inject_length_perturbation(Letter3 letter, const LatticePoint& src, double factor) {
    perturb_[{static_cast<int>(letter), family_->flatten(src)}] = factor;
  }

  LatticePoint step_index(Letter3 l, bool inv, const LatticePoint& p) const {
    Gen g = letter3_gen(l);
    return inv ? apply(inverse(N4Element::generator(g)), p, Convention::Interval)
               : apply_generator(g, p, Convention::Interval);
  }

  // a forward map exists at src iff src, its left neighbour, the target and
  // the target's left neighbour are all in the box
  bool safe_forward(Letter3 l, const LatticePoint& src) const {
    const int N = family_->truncation();
    if (!family_->in_box(src) || src.k - 1 < -N) return false;
    LatticePoint t = step_index(l, false, src);
    return family_->in_box(t) && t.k - 1 >= -N;
  }

  std::optional<LatticePoint> safe_step(Letter3 l, bool inv, const LatticePoint& src) const {
    if (!inv) {
      if (!safe_forward(l, src)) return std::nullopt;
      return step_index(l, false, src);
    }
    LatticePoint s = step_index(l, true, src);
    if (!family_->in_box(s) || !safe_forward(l, s)) return std::nullopt;
    return s;
  }

  PtMap forward_map(Letter3 l, const LatticePoint& src) const {
    if (!safe_forward(l, src))
      throw UnsafeWordError("forward_map: index " + to_string(src) + " unsafe for generator " +
                            std::string(1, letter3_char(l)));
    LatticePoint src_prev{src.i, src.j, src.k - 1};
    LatticePoint tgt = step_index(l, false, src);
    LatticePoint tgt_prev{tgt.i, tgt.j, tgt.k - 1};
    PtMap m;
    m.len_i_prev = len_[family_->flatten(src_prev)];
    m.len_i = len_[family_->flatten(src)];
    m.len_j_prev = len_[family_->flatten(tgt_prev)];
    m.len_j = len_[family_->flatten(tgt)];
    m.left_i = family_->left_endpoint(src);
    m.left_j = family_->left_endpoint(tgt);
    if (!perturb_.empty()) {
      auto it = perturb_.find({static_cast<int>(l), family_->flatten(src)});
      if (it != perturb_.end()) m.len_j *= it->second;
    }
    return m;
  }

  static PtMap swap_sides(const PtMap& m) {
    return {m.len_j_prev, m.len_j, m.len_i_prev, m.len_i, m.left_j, m.left_i};
  }

  PtMap map_at(Letter3 l, bool inv, const LatticePoint& src) const {
    if (!inv) return forward_map(l, src);
    LatticePoint s = step_index(l, true, src);
    if (!family_->in_box(s))
      throw UnsafeWordError("map_at: inverse step leaves the box at " + to_string(src));
    return swap_sides(forward_map(l, s));
  }

  struct Traced {
    double y = 0.0;
    LatticePoint index;
  };

  // apply one generator (or its inverse) to a traced point
  Traced apply_step(Letter3 l, bool inv, const Traced& t) const {
    auto next = safe_step(l, inv, t.index);
    if (!next)
      throw UnsafeWordError(std::string("unsafe step ") + letter3_char(l) + (inv ? "^-1" : "") +
                            " at index " + to_string(t.index));
    PtMap m = map_at(l, inv, t.index);
    return {pt_eval(*profile_, m, t.y), *next};
  }

  Traced trace(double x) const {
    auto idx = family_->locate(x);
    if (!idx) throw std::domain_error("trace: x outside [0,1]");
    return {x, *idx};
  }

  Traced eval_traced(const RWord& w, Traced t) const {
    // rightmost factor acts first
    for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it) {
      auto [l, exp] = *it;
      bool inv = exp < 0;
      for (i64 s = 0; s < std::llabs(exp); ++s) t = apply_step(l, inv, t);
    }
    return t;
  }

  double eval(const RWord& w, double x) const { return eval_traced(w, trace(x)).y; }

  double derivative(const RWord& w, double x) const {
    Traced t = trace(x);
    double deriv = 1.0;
    for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it) {
      auto [l, exp] = *it;
      bool inv = exp < 0;
      for (i64 s = 0; s < std::llabs(exp); ++s) {
        auto next = safe_step(l, inv, t.index);
        if (!next)
          throw UnsafeWordError(std::string("unsafe step ") + letter3_char(l) + (inv ? "^-1" : "") +
                                " at index " + to_string(t.index));
        PtMap m = map_at(l, inv, t.index);
        deriv *= pt_derivative(*profile_, m, t.y);
        t = {pt_eval(*profile_, m, t.y), *next};
      }
    }
    return deriv;
  }

  bool safe_for_word(const RWord& w, const LatticePoint& start) const {
    LatticePoint p = start;
    for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it) {
      auto [l, exp] = *it;
      bool inv = exp < 0;
      for (i64 s = 0; s < std::llabs(exp); ++s) {
        auto next = safe_step(l, inv, p);
        if (!next) return false;
        p = *next;
      }
    }
    return true;
  }

  std::vector<LatticePoint> safe_sources(Letter3 l) const {
    std::vector<LatticePoint> out;
    for (std::size_t f = 0; f < family_->count(); ++f) {
      LatticePoint p = family_->unflatten(f);
      if (safe_forward(l, p)) out.push_back(p);
    }
    return out;
  }

  // -- structural checks ----------------------------------------------------

  struct C1Report {
    double max_abs_log_mismatch = 0.0;
    std::size_t endpoints_checked = 0;
  };

  // at the endpoint shared by I_{i,j,k} and I_{i,j,k+1} the right derivative
  // of the lower map must equal the left derivative of the upper map
  C1Report check_c1_matching() const {
    C1Report rep;
    for (Letter3 l : {Letter3::E, Letter3::D, Letter3::F}) {
      for (const LatticePoint& p : safe_sources(l)) {
        LatticePoint up{p.i, p.j, p.k + 1};
        if (!family_->in_box(up) || !safe_forward(l, up)) continue;
        double right_of_lower = forward_map(l, p).len_j / forward_map(l, p).len_i;
        PtMap mu = forward_map(l, up);
        double left_of_upper = mu.len_j_prev / mu.len_i_prev;
        double mismatch = std::fabs(std::log(right_of_lower / left_of_upper));
        rep.max_abs_log_mismatch = std::max(rep.max_abs_log_mismatch, mismatch);
        ++rep.endpoints_checked;
      }
    }
    return rep;
  }

  struct PermutationReport {
    std::size_t checked = 0;
    std::size_t mismatches = 0;
    bool ok() const { return mismatches == 0; }
  };

  // the induced permutation of interval indices must agree with the exact
  // lattice action
  PermutationReport induced_permutation_check() const {
    PermutationReport rep;
    for (Letter3 l : {Letter3::E, Letter3::D, Letter3::F}) {
      for (const LatticePoint& p : safe_sources(l)) {
        PtMap m = forward_map(l, p);
        double y = pt_eval(*profile_, m, family_->midpoint(p));
        auto got = family_->locate(y);
        LatticePoint want = apply_generator(letter3_gen(l), p, Convention::Interval);
        ++rep.checked;
        if (!got || !(*got == want)) ++rep.mismatches;
      }
    }
    return rep;
  }

 private:
  std::shared_ptr<const IntervalFamily> family_;
  std::shared_ptr<ChartProfile> profile_;
  std::vector<double> len_;
  std::map<std::pair<int, std::size_t>, double> perturb_;
};

inline Realization build_action(std::shared_ptr<const IntervalFamily> family,
                                std::shared_ptr<ChartProfile> profile = nullptr) {
  if (!profile) profile = std::make_shared<ChartProfile>();
  return Realization(std::move(family), std::move(profile));
}

}  // namespace nilflow
