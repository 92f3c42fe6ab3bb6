#include <catch2/catch_amalgamated.hpp>

#include "nilflow/params.hpp"

using namespace nilflow;

TEST_CASE("reference parameter set is feasible") {
  // alpha = 0.4, p = q = 4/alpha = 10, r = 4/3
  ParamSet ps{0.4, 10.0, 10.0, 4.0 / 3.0};
  auto rep = check_conditions(ps);
  for (int i = 0; i < 8; ++i) {
    INFO("condition " << i + 1);
    CHECK(rep.holds[i]);
  }
  CHECK(rep.feasible);
}

TEST_CASE("condition (vi) fails exactly at alpha = 1/2 on the closed-form line") {
  ParamSet ps{0.5, 8.0, 8.0, 4.0 / 3.0};
  auto rep = check_conditions(ps);
  CHECK_FALSE(rep.holds[5]);  // 1/8 + 1/8 + 3/4 == 1, not < 1
  CHECK_FALSE(rep.feasible);
}

TEST_CASE("constraints slacken as alpha -> 0") {
  for (double alpha : {0.05, 0.01, 0.002}) {
    ParamSet ps{alpha, 4.0 / alpha, 4.0 / alpha, 4.0 / 3.0};
    CHECK(check_conditions(ps).feasible);
  }
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(check_conditions({0.4, -1.0, 10.0, 1.5}), std::domain_error);
  CHECK_THROWS_AS(check_conditions({1.5, 10.0, 10.0, 1.5}), std::domain_error);
  CHECK_THROWS_AS(search_feasible(0.0), std::domain_error);
}

TEST_CASE("search_feasible returns the closed-form witness below 1/2") {
  auto got = search_feasible(0.45);
  REQUIRE(got.has_value());
  CHECK(got->p == Catch::Approx(4.0 / 0.45));
  CHECK(got->q == Catch::Approx(4.0 / 0.45));
  CHECK(got->r == Catch::Approx(4.0 / 3.0));
  CHECK(check_conditions(*got).feasible);
}

TEST_CASE("search_feasible frontier at one half") {
  CHECK(search_feasible(0.49).has_value());
  CHECK_FALSE(search_feasible(0.50).has_value());
  CHECK_FALSE(search_feasible(0.55).has_value());
}

TEST_CASE("second halves of (vii)/(viii) together with (vi) pin alpha below 1/2") {
  // property: any feasible sample must satisfy 2 alpha (1 - 1/r) <= 1/p + 1/q < 1 - 1/r
  SplitMix64 rng(0x9a11);
  for (int t = 0; t < 20000; ++t) {
    ParamSet ps{rng.uniform(0.05, 0.95), rng.uniform(4.0, 400.0), rng.uniform(4.0, 400.0),
                rng.uniform(1.01, 2.0)};
    if (!check_conditions(ps).feasible) continue;
    CHECK(ps.alpha < 0.5);
  }
}
