#include <catch2/catch_amalgamated.hpp>

#include "nilflow/group.hpp"

using namespace nilflow;

namespace {
N4Element gen(Gen g, i64 e = 1) { return N4Element::generator(g, e); }
}

TEST_CASE("generator matrices occupy their slots") {
  IntMatrix4 E = IntMatrix4::generator(Gen::E);
  CHECK(E.m[1][0] == 1);
  i64 off = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (r > c && !(r == 1 && c == 0)) off += std::abs(E.m[r][c]);
  CHECK(off == 0);

  CHECK(to_matrix(gen(Gen::E)) == E);
  CHECK(to_matrix(N4Element::identity()) == IntMatrix4::identity());
}

TEST_CASE("to_matrix of f*e has the mixed (3,1) entry") {
  // oracle: multiply the two generator matrices directly
  IntMatrix4 M = IntMatrix4::generator(Gen::F) * IntMatrix4::generator(Gen::E);
  CHECK(M.m[2][0] == 1);
  N4Element fe;
  fe.n = {1, 1, 0, 0, 0, 0};
  CHECK(to_matrix(fe) == M);
  CHECK(from_matrix(M) == fe);
}

TEST_CASE("from_matrix on basic inputs") {
  CHECK(from_matrix(IntMatrix4::identity()) == N4Element::identity());
  CHECK(from_matrix(IntMatrix4::generator(Gen::C)) == gen(Gen::C));
  IntMatrix4 bad = IntMatrix4::identity();
  bad.m[0][3] = 2;
  CHECK_THROWS_AS(from_matrix(bad), std::invalid_argument);
}

TEST_CASE("normal form round trip is exact") {
  SplitMix64 rng(0x5eed0001);
  for (int t = 0; t < 10000; ++t) {
    N4Element g;
    for (auto& e : g.n) e = rng.uniform_int(-50, 50);
    CHECK(from_matrix(to_matrix(g)) == g);
  }
}

TEST_CASE("group axioms on random samples") {
  SplitMix64 rng(0x5eed0002);
  for (int t = 0; t < 2000; ++t) {
    N4Element g, h, k;
    for (auto& e : g.n) e = rng.uniform_int(-20, 20);
    for (auto& e : h.n) e = rng.uniform_int(-20, 20);
    for (auto& e : k.n) e = rng.uniform_int(-20, 20);
    CHECK(multiply(multiply(g, h), k) == multiply(g, multiply(h, k)));
    CHECK(multiply(g, N4Element::identity()) == g);
    CHECK(multiply(g, inverse(g)) == N4Element::identity());
  }
}

TEST_CASE("defining commutators") {
  CHECK(commutator(gen(Gen::F), gen(Gen::E)) == gen(Gen::A));
  CHECK(commutator(gen(Gen::D), gen(Gen::F)) == gen(Gen::B));
  CHECK(commutator(gen(Gen::D), gen(Gen::A)) == gen(Gen::C));
  CHECK(inverse(N4Element::identity()) == N4Element::identity());
  // e f = f a^-1 e in normal form
  N4Element ef = multiply(gen(Gen::E), gen(Gen::F));
  N4Element want;
  want.n = {1, 1, 0, -1, 0, 0};
  CHECK(ef == want);
}

TEST_CASE("conjugation relations from the semidirect structure") {
  // e: f -> f a^-1, b -> b c^-1 ; d: f -> f b, a -> a c
  auto conj = [](const N4Element& x, const N4Element& y) {
    return multiply(multiply(x, y), inverse(x));
  };
  CHECK(conj(gen(Gen::E), gen(Gen::F)) == multiply(gen(Gen::F), gen(Gen::A, -1)));
  CHECK(conj(gen(Gen::E), gen(Gen::B)) == multiply(gen(Gen::B), gen(Gen::C, -1)));
  CHECK(conj(gen(Gen::D), gen(Gen::F)) == multiply(gen(Gen::F), gen(Gen::B)));
  CHECK(conj(gen(Gen::D), gen(Gen::A)) == multiply(gen(Gen::A), gen(Gen::C)));
}

TEST_CASE("lower central series and metabelian structure") {
  SplitMix64 rng(0x5eed0003);
  for (int t = 0; t < 500; ++t) {
    N4Element g;
    for (auto& e : g.n) e = rng.uniform_int(-10, 10);
    N4Element h = N4Element::identity();  // element of <a,b,c>
    h.n[3] = rng.uniform_int(-10, 10);
    h.n[4] = rng.uniform_int(-10, 10);
    h.n[5] = rng.uniform_int(-10, 10);
    N4Element c = commutator(g, h);
    for (int idx = 0; idx < 5; ++idx) CHECK(c.n[idx] == 0);
  }
  // commutators of elements of <a,b,c> are trivial
  for (int t = 0; t < 500; ++t) {
    N4Element x = N4Element::identity(), y = N4Element::identity();
    for (int idx = 3; idx < 6; ++idx) {
      x.n[idx] = rng.uniform_int(-10, 10);
      y.n[idx] = rng.uniform_int(-10, 10);
    }
    CHECK(commutator(x, y) == N4Element::identity());
  }
}

TEST_CASE("word evaluation") {
  CHECK(evaluate_word(parse_word("d a d^-1 a^-1")) == gen(Gen::C));
  CHECK(evaluate_word(Word{}) == N4Element::identity());
  // c = [d,[f,e]] spelled out over generators
  CHECK(evaluate_word(parse_word("d f e f^-1 e^-1 d^-1 e f e^-1 f^-1")) == gen(Gen::C));
}

TEST_CASE("embedding identity [d^n1 e^n2, a^n1 b^-n2 c^n3] = c^(n1^2+n2^2)") {
  CHECK(embedding_identity_check(1, 0, 5));
  CHECK(embedding_identity_check(2, 3, 0));
  CHECK(embedding_identity_check(1, 1, -7));
  CHECK_THROWS_AS(embedding_identity_check(0, 0, 3), std::invalid_argument);
  SplitMix64 rng(0x5eed0004);
  for (int t = 0; t < 1000; ++t) {
    i64 n1 = rng.uniform_int(-30, 30), n2 = rng.uniform_int(-30, 30);
    if (n1 == 0 && n2 == 0) continue;
    CHECK(embedding_identity_check(n1, n2, rng.uniform_int(-30, 30)));
  }
}

TEST_CASE("checked arithmetic reports overflow instead of wrapping") {
  N4Element big;
  big.n = {i64(1) << 32, i64(1) << 32, 0, 0, 0, 0};
  CHECK_THROWS_AS(multiply(big, big), std::overflow_error);
}

TEST_CASE("text round trip") {
  CHECK(to_string(N4Element::identity()) == "1");
  CHECK(parse_element("1") == N4Element::identity());
  N4Element g;
  g.n = {2, 0, -1, 0, 3, 1};
  CHECK(to_string(g) == "f^2 d^-1 b^3 c");
  CHECK(parse_element(to_string(g)) == g);
  SplitMix64 rng(0x5eed0005);
  for (int t = 0; t < 200; ++t) {
    N4Element h;
    for (auto& e : h.n) e = rng.uniform_int(-9, 9);
    CHECK(parse_element(to_string(h)) == h);
  }
  // parser accepts unordered words and reduces them
  CHECK(parse_element("a f e") == evaluate_word(parse_word("a f e")));
}
