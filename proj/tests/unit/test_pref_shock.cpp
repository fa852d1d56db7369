#include <doctest.h>

#include <cmath>

#include "bubblelab/pref_shock.hpp"

using namespace bubblelab;
using namespace bubblelab::pref_shock;
using paths::PathSpec;

namespace {

Distribution two_point() { return Distribution({{1.0, 0.5}, {2.0, 0.5}}); }

Distribution five_point() {
  return Distribution({{0.5, 0.3}, {0.9, 0.1}, {1.3, 0.2}, {2.0, 0.25}, {3.1, 0.15}});
}

PrefShockEconomy economy(PathSpec A, PathSpec D, double gamma = 1.0) {
  PrefShockEconomy e;
  e.beta = 0.96;
  e.gamma = gamma;
  e.F = two_point();
  e.A = A;
  e.D = D;
  return e;
}

}  // namespace

TEST_CASE("distribution") {
  const Distribution F({{2.0, 0.5}, {1.0, 0.5}});
  CHECK(F.theta_L() == 1.0);
  CHECK(F.theta_H() == 2.0);
  CHECK(F.gap() == 1.0);
  CHECK_THROWS_AS(Distribution({{1.0, 0.5}, {2.0, 0.4}}), Error);
  CHECK_THROWS_AS(Distribution({{1.0, 1.0}}), Error);
  CHECK_THROWS_AS(Distribution({{-1.0, 0.5}, {2.0, 0.5}}), Error);
}

TEST_CASE("liquidity_premium") {
  CHECK(liquidity_premium(two_point(), 2.0) == 1.0);
  CHECK(liquidity_premium(two_point(), 1.0) == 1.5);
  // Five atoms, direct sum at theta_bar = 1.3.
  const double expect = 0.3 + 0.1 + 0.2 + 0.25 * 2.0 / 1.3 + 0.15 * 3.1 / 1.3;
  CHECK(std::abs(liquidity_premium(five_point(), 1.3) - expect) <= 1e-14);
}

TEST_CASE("savings_wedge") {
  CHECK(savings_wedge(two_point(), 1.0, 1.0) == 0.0);
  CHECK(savings_wedge(two_point(), 2.0, 1.0) == 0.5);
  CHECK(savings_wedge(two_point(), 1.5, 1.0) == 0.25);
  const double expect = 0.3 * (std::sqrt(2.0) - std::sqrt(0.5)) + 0.1 * (std::sqrt(2.0) - std::sqrt(0.9)) +
                        0.2 * (std::sqrt(2.0) - std::sqrt(1.3));
  CHECK(std::abs(savings_wedge(five_point(), 2.0, 2.0) - expect) <= 1e-14);
}

TEST_CASE("price_given_cutoff") {
  CHECK(price_given_cutoff(1.0, 1.0, two_point(), 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(price_given_cutoff(1.0, 1.0, two_point(), 1.5) == doctest::Approx(7.0 / 24.0).epsilon(1e-15));
  CHECK(price_given_cutoff(16.0, 1.0, two_point(), 1.5) == doctest::Approx(16.0 * 7.0 / 24.0).epsilon(1e-15));
  CHECK(price_given_cutoff(16.0, 2.0, two_point(), 1.5) ==
        doctest::Approx(4.0 * price_given_cutoff(1.0, 2.0, two_point(), 1.5)).epsilon(1e-14));
}

TEST_CASE("consumption_rule") {
  CHECK(consumption_rule(1.0, 1.0, 1.0, 2.0, 1.0, 0.96) == doctest::Approx(1.0 / 0.96).epsilon(1e-15));
  CHECK(consumption_rule(3.0, 1.0, 1.0, 2.0, 1.0, 0.96) == consumption_rule(2.0, 1.0, 1.0, 2.0, 1.0, 0.96));
  CHECK(consumption_rule(1.0, 2.0, 1.1, 2.0, 3.0, 0.96) ==
        doctest::Approx(std::cbrt(2.0) * consumption_rule(1.0, 1.0, 1.1, 2.0, 3.0, 0.96)).epsilon(1e-14));
}

TEST_CASE("component shapes on a grid") {
  for (const Distribution& F : {two_point(), five_point()}) {
    double prev_lp = INFINITY, prev_sw = -INFINITY;
    for (int i = 0; i <= 200; ++i) {
      const double tb = F.theta_L() + (F.theta_H() - F.theta_L()) * i / 200.0;
      const double lp = liquidity_premium(F, tb);
      const double sw = savings_wedge(F, tb, 1.5);
      CHECK(lp >= 1.0);
      CHECK(lp <= F.theta_H() / F.theta_L() + 1e-15);
      CHECK(lp <= prev_lp);
      CHECK(sw >= prev_sw);
      prev_lp = lp;
      prev_sw = sw;
    }
  }
}

TEST_CASE("necessity") {
  CHECK(check_necessity_pref(economy(PathSpec::geometric(1.0, 1.05), PathSpec::geometric(0.001, 1.01))).holds);
  const NecessityReport g2 =
      check_necessity_pref(economy(PathSpec::geometric(1.0, 1.05), PathSpec::geometric(0.001, 1.01), 2.0));
  CHECK(g2.G == doctest::Approx(std::sqrt(1.05)).epsilon(1e-14));
  CHECK(g2.holds);
  CHECK_FALSE(
      check_necessity_pref(economy(PathSpec::geometric(1.0, 1.05), PathSpec::geometric(0.001, 1.01), 8.0)).holds);
}

TEST_CASE("stationary cutoff") {
  // LP(theta_bar) = 1 / beta  =>  0.5 + 1 / theta_bar = 1 / 0.96
  const double oracle = 1.0 / (1.0 / 0.96 - 0.5);
  const PrefShockEconomy e = economy(PathSpec::constant(1.0), PathSpec::zero());
  PrefOptions o;
  o.n_terminals = 4;
  const PrefResult r = solve_pref_equilibrium(e, 200, o);
  for (const CutoffPath& p : r.sweep) {
    REQUIRE(p.valid_from == 0);
    for (std::size_t t = 0; t <= 100; ++t) CHECK(std::abs(p.theta_bar[t] - oracle) <= 1e-8);
  }
}

TEST_CASE("growing productivity gives a relevant bubble") {
  const PrefShockEconomy e = economy(PathSpec::geometric(1.0, 1.05), PathSpec::geometric(0.001, 1.01));
  const PrefResult r = solve_pref_equilibrium(e, 200);
  CHECK(r.verdict.label == bubble::Label::Bubbly);
  const double p = price_bound_constant(e);
  CHECK(p == doctest::Approx(0.25));
  for (const CutoffPath& path : r.sweep) {
    REQUIRE(path.valid_from == 0);
    CHECK(market_clearing_residual(e, path) <= 1e-9);
    CHECK(path.max_pricing_residual <= 1e-9);
    // Terminal cutoffs near theta_L sit below the bound; it holds on the trusted window.
    for (std::size_t t = 0; t <= 100; ++t) CHECK(path.price[t] >= p);
    for (std::size_t t = 0; t <= 200; ++t) CHECK(path.theta_bar[t] > e.F.theta_L());
    std::vector<double> P(201), D(201);
    for (std::size_t t = 0; t <= 200; ++t) {
      P[t] = path.P(t);
      D[t] = std::exp(path.log_scale[t]) * path.dividend[t];
    }
    CHECK(bubble::telescoping_check(path.log_q, P, D) <= 1e-8);
  }
}

TEST_CASE("five-point distribution with curvature") {
  PrefShockEconomy e = economy(PathSpec::geometric(1.0, 1.04), PathSpec::geometric(0.002, 1.0), 2.0);
  e.F = five_point();
  const PrefResult r = solve_pref_equilibrium(e, 200);
  CHECK(r.path.valid_from == 0);
  CHECK(market_clearing_residual(e, r.path) <= 1e-9);
  for (std::size_t t = 0; t <= 100; ++t) CHECK(r.path.price[t] >= price_bound_constant(e) * (1.0 - 1e-12));
  CHECK(r.verdict.label == bubble::Label::Bubbly);
}

TEST_CASE("reverse regime") {
  const PrefShockEconomy e = economy(PathSpec::geometric(1.0, 1.01), PathSpec::geometric(0.01, 1.08));
  CHECK_FALSE(check_necessity_pref(e).holds);
  const PrefResult r = solve_pref_equilibrium(e, 200);
  bool no_root = false;
  for (const auto& d : r.diagnostics) no_root = no_root || d.code == "NoRoot";
  CHECK((no_root || r.verdict.label != bubble::Label::Bubbly));
}

TEST_CASE("isolation and validation") {
  PrefShockEconomy e = economy(PathSpec::constant(1.0), PathSpec::zero());
  CHECK(e.isolation() == 0.5);
  e.delta = 0.8;
  CHECK(e.isolation() == 0.8);
  e.delta = 1.5;
  CHECK_THROWS_AS(e.validate(), Error);
  e.delta = 0.0;
  e.beta = 1.0;
  CHECK_THROWS_AS(e.validate(), Error);
  Diagnostics d;
  CHECK_THROWS_AS(solve_from_terminal(economy(PathSpec::constant(1.0), PathSpec::zero()), 10, 0.5, d), Error);
}
