#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "nilflow/chart.hpp"
#include "nilflow/pt_map.hpp"
#include "oracles.hpp"

using namespace nilflow;

TEST_CASE("smooth step shape") {
  CHECK(stepfn::w(0.0) == 0.0);
  CHECK(stepfn::w(1.0 / 3.0) == 0.0);
  CHECK(stepfn::w(2.0 / 3.0) == 1.0);
  CHECK(stepfn::w(1.0) == 1.0);
  double prev = 0.0;
  for (double t = 1.0 / 3.0; t <= 2.0 / 3.0 + 1e-12; t += 1e-3) {
    double v = stepfn::w(t);
    CHECK(v >= prev - 1e-15);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
  // endpoint flatness: derivative vanishes to high order at both knots
  CHECK(std::fabs(stepfn::w_prime(1.0 / 3.0 + 1e-4)) < 1e-12);
  CHECK(std::fabs(stepfn::w_prime(2.0 / 3.0 - 1e-4)) < 1e-12);
  // w' matches a central difference
  for (double t : {0.4, 0.5, 0.55}) {
    double fd = oracles::central_difference([](double s) { return stepfn::w(s); }, t, 1e-6);
    CHECK(stepfn::w_prime(t) == Catch::Approx(fd).margin(1e-7));
  }
}

TEST_CASE("chart anchored at one half") {
  ChartProfile profile;
  for (double lam : {1.0, 0.35, 2.7}) {
    auto cd = profile.chart(lam);
    CHECK(std::fabs(chart_value(*cd, 0.5)) < 1e-12);
    CHECK(chart_inverse(*cd, 0.0) == Catch::Approx(0.5).margin(1e-12));
  }
}

TEST_CASE("chart asymptotics at both poles") {
  ChartProfile profile;
  double lam = 1.7;
  auto cd = profile.chart(lam);
  // h(u) = -lam/u + O(1) near 0: the difference tends to a constant
  double c0 = chart_value(*cd, 1e-5) + lam / 1e-5;
  double c1 = chart_value(*cd, 1e-8) + lam / 1e-8;
  CHECK(c0 == Catch::Approx(c1).margin(1e-9));
  // h(u) = 1/(1-u) + O(1) near 1; evaluate 1-u the same way the chart does
  double u0 = 1.0 - 1e-5, u1 = 1.0 - 1e-8;
  double d0 = chart_value(*cd, u0) - 1.0 / (1.0 - u0);
  double d1 = chart_value(*cd, u1) - 1.0 / (1.0 - u1);
  CHECK(d0 == Catch::Approx(d1).margin(1e-9));
  // inverse far in the left tail: u ~ lam/(-s)
  double s = -1e3 * lam;
  CHECK(chart_inverse(*cd, s) == Catch::Approx(1e-3).epsilon(2e-2));
}

TEST_CASE("chart is increasing and h' matches the speed function") {
  ChartProfile profile;
  auto cd = profile.chart(0.8);
  double prev = chart_value(*cd, 1e-3);
  for (double u = 0.01; u < 0.995; u += 0.008) {
    double v = chart_value(*cd, u);
    CHECK(v > prev);
    prev = v;
    double fd = oracles::central_difference([&](double t) { return chart_value(*cd, t); }, u, 1e-6);
    CHECK(chart_speed(0.8, u) == Catch::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("middle table is consistent with the closed forms at the seams") {
  ChartProfile profile;
  for (double lam : {0.5, 1.0, 3.1}) {
    auto cd = profile.chart(lam);
    CHECK(chart_value(*cd, 1.0 / 3.0 + 1e-13) == Catch::Approx(-cd->ql).margin(1e-10));
    CHECK(chart_value(*cd, 2.0 / 3.0 - 1e-13) == Catch::Approx(cd->qr).margin(1e-10));
  }
}

TEST_CASE("chart round trip to 1e-12 relative") {
  ChartProfile profile;
  SplitMix64 rng(0xc4a7);
  for (int t = 0; t < 1000; ++t) {
    double lam = std::exp(rng.uniform(std::log(0.2), std::log(5.0)));
    auto cd = profile.chart(lam);
    double s = rng.uniform(-50.0, 50.0);
    double u = chart_inverse(*cd, s);
    double back = chart_value(*cd, u);
    CHECK(std::fabs(back - s) <= 1e-12 * std::max(1.0, std::fabs(s)));
  }
}

TEST_CASE("chart inverse agrees with a bisection oracle") {
  ChartProfile profile;
  auto cd = profile.chart(1.3);
  for (double s : {-7.0, -0.3, 0.02, 0.8, 11.0}) {
    double u = chart_inverse(*cd, s);
    double v = oracles::bisect_inverse([&](double t) { return chart_value(*cd, t); }, s, 1e-9,
                                       1.0 - 1e-9);
    CHECK(u == Catch::Approx(v).margin(1e-9));
  }
}

// -- pt maps -----------------------------------------------------------------

namespace {
PtMap random_map(SplitMix64& rng, bool force_comparable = false) {
  PtMap m;
  do {
    m.len_i_prev = std::exp(rng.uniform(std::log(0.05), 0.0));
    m.len_i = std::exp(rng.uniform(std::log(0.05), 0.0));
    m.len_j_prev = std::exp(rng.uniform(std::log(0.05), 0.0));
    m.len_j = std::exp(rng.uniform(std::log(0.05), 0.0));
  } while (force_comparable && !comparable(m));
  m.left_i = rng.uniform(0.0, 0.5);
  m.left_j = rng.uniform(0.0, 0.5);
  return m;
}
}  // namespace

TEST_CASE("identity quadruple gives the identity map") {
  ChartProfile profile;
  PtMap m{0.2, 0.3, 0.2, 0.3, 0.25, 0.25};
  for (double u : {0.0, 0.17, 0.5, 0.93, 1.0}) {
    double x = m.left_i + u * m.len_i;
    CHECK(std::fabs(pt_eval(profile, m, x) - x) < 1e-12);
  }
  auto ed = endpoint_derivatives(m);
  CHECK(ed.left == 1.0);
  CHECK(ed.right == 1.0);
}

TEST_CASE("endpoints map to endpoints") {
  ChartProfile profile;
  SplitMix64 rng(0x97a1);
  for (int t = 0; t < 50; ++t) {
    PtMap m = random_map(rng);
    CHECK(pt_eval(profile, m, m.left_i) == m.left_j);
    CHECK(pt_eval(profile, m, m.right_i()) == m.right_j());
    CHECK_THROWS_AS(pt_eval(profile, m, m.left_i - 0.2 * m.len_i), std::domain_error);
  }
}

TEST_CASE("rho == 1 makes the map exactly affine") {
  ChartProfile profile;
  SplitMix64 rng(0x97a2);
  for (int t = 0; t < 200; ++t) {
    double li = std::exp(rng.uniform(std::log(0.01), 0.0));
    double lj = std::exp(rng.uniform(std::log(0.01), 0.0));
    double lam = std::exp(rng.uniform(std::log(0.3), std::log(3.0)));
    PtMap m{lam * li, li, lam * lj, lj, rng.uniform(0.0, 0.4), rng.uniform(0.0, 0.4)};
    CHECK(m.rho() == Catch::Approx(1.0).margin(1e-12));
    double u = rng.uniform(1e-4, 1.0 - 1e-4);
    double x = m.left_i + u * m.len_i;
    double affine = m.left_j + (m.len_j / m.len_i) * (x - m.left_i);
    CHECK(std::fabs(pt_eval(profile, m, x) - affine) < 1e-12);
  }
}

TEST_CASE("equivariance: maps compose exactly through the chart") {
  ChartProfile profile;
  SplitMix64 rng(0x97a3);
  for (int t = 0; t < 1000; ++t) {
    double lens[6];
    for (double& v : lens) v = std::exp(rng.uniform(std::log(0.05), 0.0));
    PtMap ij{lens[0], lens[1], lens[2], lens[3], 0.1, 0.2};
    PtMap jk{lens[2], lens[3], lens[4], lens[5], 0.2, 0.3};
    PtMap ik{lens[0], lens[1], lens[4], lens[5], 0.1, 0.3};
    double u = rng.uniform(0.0, 1.0);
    double x = ij.left_i + u * ij.len_i;
    double via = pt_eval(profile, jk, pt_eval(profile, ij, x));
    double direct = pt_eval(profile, ik, x);
    CHECK(std::fabs(via - direct) < 1e-10);
  }
}

TEST_CASE("endpoint derivatives match the one-sided limits") {
  ChartProfile profile;
  SplitMix64 rng(0x97a4);
  for (int t = 0; t < 25; ++t) {
    PtMap m = random_map(rng);
    auto ed = endpoint_derivatives(m);
    CHECK(ed.left == m.len_j_prev / m.len_i_prev);
    CHECK(ed.right == m.len_j / m.len_i);
    auto f = [&](double x) { return pt_eval(profile, m, x); };
    double dl = oracles::richardson_one_sided(f, m.left_i, +1.0, 1e-4 * m.len_i);
    double dr = oracles::richardson_one_sided(f, m.right_i(), -1.0, 1e-4 * m.len_i);
    CHECK(dl == Catch::Approx(ed.left).epsilon(1e-6));
    CHECK(dr == Catch::Approx(ed.right).epsilon(1e-6));
    // interior derivative agrees with central differences
    double x = m.left_i + 0.37 * m.len_i;
    double fd = oracles::central_difference(f, x, 1e-7 * m.len_i);
    CHECK(pt_derivative(profile, m, x) == Catch::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("dlog derivative: analytic formula vs central difference of log D") {
  ChartProfile profile;
  SplitMix64 rng(0x97a5);
  for (int t = 0; t < 25; ++t) {
    PtMap m = random_map(rng, true);
    auto logd = [&](double x) { return std::log(pt_derivative(profile, m, x)); };
    for (double u : {0.2, 0.5, 0.8}) {
      double x = m.left_i + u * m.len_i;
      double fd = oracles::central_difference(logd, x, 1e-6 * m.len_i);
      CHECK(pt_dlog_derivative(profile, m, x) == Catch::Approx(fd).margin(1e-3 / m.len_i * 1e-2));
    }
  }
}

TEST_CASE("regularity probe: finite constant, affine case flat, scale invariance") {
  ChartProfile profile;
  SplitMix64 rng(0x97a6);
  std::vector<PtMap> maps;
  for (int t = 0; t < 300; ++t) maps.push_back(random_map(rng, true));
  auto res = regularity_probe(profile, maps, 17);
  CHECK(res.quadruples == maps.size());
  CHECK(res.m_estimate > 0.0);
  CHECK(res.m_estimate < 1e3);

  // affine quadruples contribute exact zeros
  std::vector<PtMap> affine;
  for (int t = 0; t < 20; ++t) {
    double li = rng.uniform(0.05, 0.1), lj = rng.uniform(0.05, 0.1);
    double lam = rng.uniform(0.6, 1.6);
    affine.push_back({lam * li, li, lam * lj, lj, 0.0, 0.5});
  }
  auto res2 = regularity_probe(profile, affine, 9);
  CHECK(res2.m_estimate == 0.0);
  CHECK(res2.affine_residual == 0.0);

  // scaling all lengths leaves the normalized estimate unchanged
  for (double scale : {1e-1, 1e-3, 1e-6}) {
    std::vector<PtMap> scaled = maps;
    for (auto& m : scaled) {
      m.len_i_prev *= scale;
      m.len_i *= scale;
      m.len_j_prev *= scale;
      m.len_j *= scale;
      m.left_i *= scale;
      m.left_j *= scale;
    }
    auto rs = regularity_probe(profile, scaled, 17);
    CHECK(rs.m_estimate == Catch::Approx(res.m_estimate).epsilon(1e-9));
  }
}

TEST_CASE("scaling the frame conjugates the map and preserves derivatives") {
  ChartProfile profile;
  SplitMix64 rng(0x5ca1e);
  for (int t = 0; t < 20; ++t) {
    PtMap m = random_map(rng);
    for (double scale : {1e-1, 1e-3, 1e-6}) {
      PtMap s = m;
      s.len_i_prev *= scale;
      s.len_i *= scale;
      s.len_j_prev *= scale;
      s.len_j *= scale;
      s.left_i *= scale;
      s.left_j *= scale;
      double u = rng.uniform(0.05, 0.95);
      double x = m.left_i + u * m.len_i;
      double xs = s.left_i + u * s.len_i;
      // conjugation by the scaling: s(xs) = scale * m(x)
      CHECK(pt_eval(profile, s, xs) ==
            Catch::Approx(scale * pt_eval(profile, m, x)).epsilon(1e-12));
      // derivatives are scale free
      CHECK(pt_derivative(profile, s, xs) ==
            Catch::Approx(pt_derivative(profile, m, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("comparability filter rejects wild quadruples") {
  ChartProfile profile;
  std::vector<PtMap> maps{{0.9, 0.1, 0.5, 0.5, 0.0, 0.0}};
  auto res = regularity_probe(profile, maps, 5);
  CHECK(res.quadruples == 0);
  CHECK(res.rejected == 1);
}

TEST_CASE("profile cache is shared and hashable") {
  ChartProfile profile;
  auto a = profile.chart(1.25);
  auto b = profile.chart(1.25 + 1e-14);  // same key after quantization
  CHECK(a.get() == b.get());
  u64 h1 = profile.content_hash();
  auto c = profile.chart(0.5);
  CHECK(profile.content_hash() != h1);
  CHECK(profile.cached_count() == 2);
}
