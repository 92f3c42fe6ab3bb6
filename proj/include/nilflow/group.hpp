#pragma once

#include <array>
#include <cctype>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nilflow/common.hpp"

namespace nilflow {

// The group of 4x4 lower unitriangular integer matrices, generated by the
// six elementary matrices
//
//     e -> (2,1)   f -> (3,2)   d -> (4,3)
//     a -> (3,1)   b -> (4,2)   c -> (4,1)
//
// Every element factors uniquely as f^n1 e^n2 d^n3 a^n4 b^n5 c^n6; that
// normal form is the canonical representation used throughout.

enum class Gen : int { F = 0, E = 1, D = 2, A = 3, B = 4, C = 5 };

inline char gen_letter(Gen g) { return "fedabc"[static_cast<int>(g)]; }

inline Gen gen_from_letter(char ch) {
  switch (ch) {
    case 'f': return Gen::F;
    case 'e': return Gen::E;
    case 'd': return Gen::D;
    case 'a': return Gen::A;
    case 'b': return Gen::B;
    case 'c': return Gen::C;
    default: throw std::invalid_argument(std::string("unknown generator: ") + ch);
  }
}

// ---------------------------------------------------------------------------

struct IntMatrix4 {
  // row-major, m[r][c]
  std::array<std::array<i64, 4>, 4> m{};

  static IntMatrix4 identity() {
    IntMatrix4 M;
    for (int r = 0; r < 4; ++r) M.m[r][r] = 1;
    return M;
  }

  // elementary generator matrix with entry `exp` in the slot of `g`
  static IntMatrix4 generator(Gen g, i64 exp = 1) {
    IntMatrix4 M = identity();
    switch (g) {
      case Gen::E: M.m[1][0] = exp; break;
      case Gen::F: M.m[2][1] = exp; break;
      case Gen::D: M.m[3][2] = exp; break;
      case Gen::A: M.m[2][0] = exp; break;
      case Gen::B: M.m[3][1] = exp; break;
      case Gen::C: M.m[3][0] = exp; break;
    }
    return M;
  }

  bool lower_unitriangular() const {
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        if (r == c && m[r][c] != 1) return false;
        if (r < c && m[r][c] != 0) return false;
      }
    return true;
  }

  friend IntMatrix4 operator*(const IntMatrix4& x, const IntMatrix4& y) {
    IntMatrix4 z;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        i64 s = 0;
        for (int t = 0; t < 4; ++t) s = checked_add(s, checked_mul(x.m[r][t], y.m[t][c]));
        z.m[r][c] = s;
      }
    return z;
  }

  // (I + L)^-1 = I - L + L^2 - L^3 for strictly lower triangular L
  IntMatrix4 inverse() const {
    IntMatrix4 L = *this;
    for (int r = 0; r < 4; ++r) L.m[r][r] = 0;
    IntMatrix4 L2 = L * L;
    IntMatrix4 L3 = L2 * L;
    IntMatrix4 out = identity();
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        out.m[r][c] = checked_add(out.m[r][c],
                                  checked_add(checked_sub(L2.m[r][c], L.m[r][c]),
                                              checked_neg(L3.m[r][c])));
    return out;
  }

  bool operator==(const IntMatrix4&) const = default;
};

// ---------------------------------------------------------------------------

struct N4Element {
  // exponents of f, e, d, a, b, c, in normal-form order
  std::array<i64, 6> n{};

  static N4Element identity() { return {}; }

  static N4Element generator(Gen g, i64 exp = 1) {
    N4Element x;
    x.n[static_cast<int>(g)] = exp;
    return x;
  }

  i64 exponent(Gen g) const { return n[static_cast<int>(g)]; }
  bool is_identity() const { return *this == identity(); }

  bool operator==(const N4Element&) const = default;
};

inline IntMatrix4 to_matrix(const N4Element& g) {
  // product of the generator powers in normal-form order; the matrix model
  // is the arbiter for all normal-form arithmetic
  IntMatrix4 M = IntMatrix4::identity();
  for (int idx = 0; idx < 6; ++idx)
    if (g.n[idx] != 0) M = M * IntMatrix4::generator(static_cast<Gen>(idx), g.n[idx]);
  return M;
}

inline N4Element from_matrix(const IntMatrix4& M) {
  if (!M.lower_unitriangular())
    throw std::invalid_argument("from_matrix: matrix is not lower unitriangular");
  N4Element g;
  i64 n2 = M.m[1][0];
  i64 n1 = M.m[2][1];
  i64 n3 = M.m[3][2];
  i64 n4 = checked_sub(M.m[2][0], checked_mul(n1, n2));
  i64 n5 = M.m[3][1];
  i64 n6 = checked_sub(M.m[3][0], checked_mul(n3, n4));
  g.n = {n1, n2, n3, n4, n5, n6};
  return g;
}

inline N4Element multiply(const N4Element& g, const N4Element& h) {
  return from_matrix(to_matrix(g) * to_matrix(h));
}

inline N4Element inverse(const N4Element& g) { return from_matrix(to_matrix(g).inverse()); }

inline N4Element commutator(const N4Element& g, const N4Element& h) {
  // [g,h] = g h g^-1 h^-1
  return multiply(multiply(g, h), multiply(inverse(g), inverse(h)));
}

inline N4Element power(const N4Element& g, i64 k) {
  IntMatrix4 M = IntMatrix4::identity();
  IntMatrix4 base = k >= 0 ? to_matrix(g) : to_matrix(g).inverse();
  i64 reps = k >= 0 ? k : checked_neg(k);
  for (i64 i = 0; i < reps; ++i) M = M * base;
  return from_matrix(M);
}

// ---------------------------------------------------------------------------

// A word is a sequence of generator powers; no normal-ordering is assumed.
struct Word {
  std::vector<std::pair<Gen, i64>> factors;

  void push(Gen g, i64 exp) {
    if (exp != 0) factors.emplace_back(g, exp);
  }
};

inline N4Element evaluate_word(const Word& w) {
  N4Element acc = N4Element::identity();
  for (auto [g, exp] : w.factors) acc = multiply(acc, N4Element::generator(g, exp));
  return acc;
}

// [d^n1 e^n2, a^n1 b^-n2 c^n3] = c^(n1^2 + n2^2); this identity drives the
// faithfulness argument, so it gets a direct checker.
inline bool embedding_identity_check(i64 n1, i64 n2, i64 n3) {
  if (n1 == 0 && n2 == 0)
    throw std::invalid_argument("embedding_identity_check: (n1,n2) must be nonzero");
  N4Element lhs = commutator(
      multiply(N4Element::generator(Gen::D, n1), N4Element::generator(Gen::E, n2)),
      multiply(multiply(N4Element::generator(Gen::A, n1), N4Element::generator(Gen::B, checked_neg(n2))),
               N4Element::generator(Gen::C, n3)));
  i64 want = checked_add(checked_mul(n1, n1), checked_mul(n2, n2));
  return lhs == N4Element::generator(Gen::C, want);
}

// -- text form --------------------------------------------------------------
//
// "f^2 e^-1 c^3", zero-exponent factors omitted, "1" for the identity.

inline std::string to_string(const N4Element& g) {
  std::ostringstream os;
  bool first = true;
  for (int idx = 0; idx < 6; ++idx) {
    if (g.n[idx] == 0) continue;
    if (!first) os << ' ';
    os << gen_letter(static_cast<Gen>(idx));
    if (g.n[idx] != 1) os << '^' << g.n[idx];
    first = false;
  }
  if (first) os << '1';
  return os.str();
}

inline Word parse_word(const std::string& text) {
  Word w;
  std::size_t i = 0;
  auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
  skip_ws();
  if (i < text.size() && text[i] == '1') {
    ++i;
    skip_ws();
    if (i != text.size()) throw std::invalid_argument("parse_word: trailing input after '1'");
    return w;
  }
  while (i < text.size()) {
    Gen g = gen_from_letter(text[i]);
    ++i;
    i64 exp = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      std::size_t start = i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i == start) throw std::invalid_argument("parse_word: missing exponent");
      exp = std::stoll(text.substr(start, i - start));
    }
    w.push(g, exp);
    skip_ws();
  }
  return w;
}

inline N4Element parse_element(const std::string& text) { return evaluate_word(parse_word(text)); }

inline std::ostream& operator<<(std::ostream& os, const N4Element& g) { return os << to_string(g); }

}  // namespace nilflow
