#include <doctest.h>

#include <cmath>
#include <random>

#include "bubblelab/olg.hpp"

using namespace bubblelab;
using namespace bubblelab::olg;
using paths::PathSpec;

TEST_CASE("mrs") {
  CHECK(mrs(Linear{3.0}, 0.7, 2.0) == 3.0);
  CHECK(mrs(CRRA{0.5, 1.0}, 2.0, 1.0) == doctest::Approx(1.0));
  CHECK(mrs(CobbDouglasLog{0.5}, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(mrs(Linear{3.0}, 0.0, 1.0), Error);
  CHECK_THROWS_AS(mrs(Linear{3.0}, 1.0, -1.0), Error);
}

TEST_CASE("forward_rate is the reciprocal of mrs") {
  CHECK(forward_rate(CRRA{0.5, 1.0}, 1.0, 0.21) == doctest::Approx(0.42));
  CHECK(forward_rate(CRRA{0.5, 2.0}, 1.0, 0.0) == 0.0);
  CHECK(forward_rate(Linear{3.0}, 0.4, 9.0) == doctest::Approx(1.0 / 3.0));
  for (const UtilitySpec& u : {UtilitySpec{CRRA{0.7, 2.5}}, UtilitySpec{Linear{2.0}}, UtilitySpec{CobbDouglasLog{0.3}}}) {
    for (double y : {0.1, 0.5, 0.9}) {
      for (double z : {0.05, 0.4, 3.0}) {
        CHECK(forward_rate(u, y, z) * mrs(u, y, z) == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
  }
  CHECK_THROWS_AS(forward_rate(Linear{3.0}, 0.0, 1.0), Error);
}

TEST_CASE("utility parameters are validated") {
  CHECK_THROWS_AS(validate(CRRA{0.5, 0.0}), Error);
  CHECK_THROWS_AS(validate(Linear{0.0}), Error);
  CHECK_THROWS_AS(validate(CobbDouglasLog{1.0}), Error);
  CHECK_THROWS_AS(validate(Custom{"empty", {}, {}}), Error);
}

TEST_CASE("step_back") {
  SUBCASE("log utility prices at beta a_t whatever comes next") {
    const EconomyOLG e{CobbDouglasLog{0.4}, PathSpec::geometric(2.0, 1.03), PathSpec::zero(),
                       PathSpec::geometric(0.1, 0.9)};
    for (double next : {0.0, 0.3, 1.5}) {
      CHECK(step_back(e, 3, next) == doctest::Approx(0.4 * 2.0 * std::pow(1.03, 3.0)).epsilon(1e-14));
    }
  }
  SUBCASE("linear utility, interior and corner") {
    const EconomyOLG e{Linear{3.0}, PathSpec::constant(1.0), PathSpec::zero(), PathSpec::zero()};
    CHECK(step_back(e, 0, 0.1) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(step_back(e, 0, 2.0) == 1.0);
  }
}

TEST_CASE("invariant: the inner function decreases through interior roots") {
  const UtilitySpec u = CRRA{0.8, 2.0};
  const EconomyOLG e{u, PathSpec::geometric(1.0, 1.02), PathSpec::geometric(0.3, 1.02), PathSpec::constant(0.05)};
  for (double next : {0.05, 0.1, 0.2}) {
    const double p = step_back_detrended(e, 5, next);
    REQUIRE(p > 0.0);
    REQUIRE(p < 1.0);
    const double G = 1.02;
    const double d = 0.05 / std::pow(1.02, 6.0);
    const double s = G * (next + d);
    const double z = G * (0.3 + next + d);
    const auto g = [&](double x) { return mrs(u, 1.0 - x, z) * s - x; };
    CHECK(g(p - 1e-6) > 0.0);
    CHECK(g(p + 1e-6) < 0.0);
  }
}

TEST_CASE("solve_truncated") {
  SUBCASE("log utility with flat endowment") {
    const EconomyOLG e{CobbDouglasLog{0.5}, PathSpec::constant(1.0), PathSpec::zero(), PathSpec::constant(0.1)};
    const PricePath p = solve_truncated(e, 50, 0.9);
    for (std::size_t t = 0; t < 50; ++t) CHECK(p.P(t) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.P(50) == doctest::Approx(0.9));
  }
  SUBCASE("Wilson economy agrees across terminals at T = 80") {
    const EconomyOLG e{Linear{3.0}, PathSpec::constant(1.0), PathSpec::zero(), PathSpec::geometric(0.01, 0.5)};
    const double p0 = solve_truncated(e, 80, 0.0).P(0);
    CHECK(std::abs(solve_truncated(e, 80, 0.5).P(0) - p0) <= 1e-6);
    CHECK(std::abs(solve_truncated(e, 80, 1.0).P(0) - p0) <= 1e-6);
    CHECK(p0 == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("pure bubble asset with a zero terminal stays at zero") {
    const EconomyOLG e{Linear{0.5}, PathSpec::constant(1.0), PathSpec::zero(), PathSpec::zero()};
    const PricePath p = solve_truncated(e, 40, 0.0);
    for (std::size_t t = 0; t <= 40; ++t) CHECK(p.P(t) == 0.0);
  }
  SUBCASE("bad terminal") {
    const EconomyOLG e{Linear{0.5}, PathSpec::constant(1.0), PathSpec::zero(), PathSpec::zero()};
    CHECK_THROWS_AS(solve_truncated(e, 10, 1.5), Error);
    CHECK_THROWS_AS(solve_truncated(e, 0, 0.5), Error);
  }
}

TEST_CASE("invariants on solved paths") {
  const std::vector<EconomyOLG> economies{
      {CRRA{0.5, 1.0}, PathSpec::geometric(1.0, 1.05), PathSpec::geometric(0.2, 1.05), PathSpec::constant(0.01)},
      {CRRA{0.9, 3.0}, PathSpec::geometric(1.0, 1.01), PathSpec::geometric(0.05, 1.01), PathSpec::geometric(0.02, 0.99)},
      {Linear{3.0}, PathSpec::constant(1.0), PathSpec::zero(), PathSpec::geometric(0.01, 0.5)},
      {CobbDouglasLog{0.3}, PathSpec::geometric(1.0, 1.04), PathSpec::geometric(0.1, 1.04),
       paths::Explicit{{0.1, 0.05}, 1.0}},
  };
  for (const auto& e : economies) {
    const std::size_t T = 300;
    const PricePath p = solve_truncated(e, T, 0.5 * std::exp(e.a.log_at(T)));
    CHECK(p.max_foc_residual(e) <= 1e-10);
    std::vector<double> P(T + 1), D(T + 1);
    for (std::size_t t = 0; t <= T; ++t) {
      CHECK(p.p[t] >= 0.0);
      CHECK(p.p[t] <= 1.0);
      P[t] = p.P(t);
      D[t] = p.D(t);
    }
    CHECK(bubble::telescoping_check(p.log_q, P, D) <= 1e-8);
    // Detrended pricing equation at interior dates.
    for (std::size_t t = 0; t < T; ++t) {
      if (p.p[t] <= 0.0 || p.p[t] >= 1.0) continue;
      const double G = std::exp(p.log_a[t + 1] - p.log_a[t]);
      const double lhs = G * (p.p[t + 1] + p.d[t + 1]) / p.p[t];
      const double rhs = forward_rate(e.utility, 1.0 - p.p[t], G * (p.w[t + 1] + p.p[t + 1] + p.d[t + 1]));
      CHECK(std::abs(lhs - rhs) <= 1e-8 * rhs);
    }
  }
}

TEST_CASE("solve_equilibrium") {
  SUBCASE("textbook economy agrees exactly") {
    const EconomyOLG e{CobbDouglasLog{0.5}, PathSpec::geometric(1.0, 1.02), PathSpec::zero(),
                       PathSpec::geometric(0.01, 1.01)};
    SweepOptions o;
    o.analytic_yield_ratio = 1.01 / 1.02;
    const EquilibriumResult r = solve_equilibrium(e, 300, o);
    CHECK(r.early_window_agreement == 0.0);
    CHECK(r.verdict.label == bubble::Label::Bubbly);
    CHECK(r.sweep.size() == 3);
    CHECK(r.diagnostics.empty());
    // The numeric branch agrees with the analytic one.
    const EquilibriumResult numeric = solve_equilibrium(e, 300);
    CHECK(numeric.verdict.label == bubble::Label::Bubbly);
    CHECK(numeric.verdict.tail_decay == doctest::Approx(1.01 / 1.02).epsilon(1e-9));
  }
  SUBCASE("textbook economy with dividends outgrowing income") {
    const EconomyOLG e{CobbDouglasLog{0.5}, PathSpec::geometric(1.0, 1.02), PathSpec::zero(),
                       PathSpec::geometric(0.01, 1.03)};
    CHECK(solve_equilibrium(e, 300).verdict.label == bubble::Label::Fundamental);
  }
  SUBCASE("Wilson economy") {
    const EconomyOLG e{Linear{3.0}, PathSpec::constant(1.0), PathSpec::zero(), PathSpec::geometric(0.01, 0.5)};
    SweepOptions o;
    o.analytic_yield_ratio = 0.5;
    const EquilibriumResult r = solve_equilibrium(e, 200, o);
    CHECK(r.verdict.label == bubble::Label::Bubbly);
    CHECK(r.path.p[100] == doctest::Approx(1.0));
    CHECK(r.verdict.relevance_liminf == doctest::Approx(1.0));
  }
  SUBCASE("CRRA example converges to the steady state") {
    const EconomyOLG e{CRRA{0.5, 1.0}, PathSpec::geometric(1.0, 1.05), PathSpec::geometric(0.2, 1.05),
                       PathSpec::constant(0.01)};
    const EquilibriumResult r = solve_equilibrium(e, 400);
    CHECK(std::abs(r.path.p[200] - 0.2) <= 1e-4);
    CHECK(r.verdict.label == bubble::Label::Bubbly);
  }
  SUBCASE("too few terminals") {
    const EconomyOLG e{Linear{0.5}, PathSpec::constant(1.0), PathSpec::zero(), PathSpec::zero()};
    SweepOptions o;
    o.n_terminals = 1;
    CHECK_THROWS_AS(solve_equilibrium(e, 10, o), Error);
  }
}

TEST_CASE("solve_equilibrium survives endowments beyond double range") {
  const EconomyOLG e{CobbDouglasLog{0.5}, PathSpec::geometric(1.0, 10.0), PathSpec::zero(),
                     PathSpec::geometric(0.01, 5.0)};
  const EquilibriumResult r = solve_equilibrium(e, 400);
  CHECK(r.path.p[200] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.verdict.label == bubble::Label::Bubbly);
}

TEST_CASE("check_necessity") {
  const NecessityReport wilson =
      check_necessity({Linear{3.0}, PathSpec::constant(1.0), PathSpec::zero(), PathSpec::geometric(0.01, 0.5)});
  CHECK(wilson.R == doctest::Approx(1.0 / 3.0));
  CHECK(wilson.holds);

  const NecessityReport crra = check_necessity({CRRA{0.5, 1.0}, PathSpec::geometric(1.0, 1.05),
                                                PathSpec::geometric(0.2, 1.05), PathSpec::constant(0.01)});
  CHECK(crra.R == doctest::Approx(0.42));
  CHECK(crra.holds);

  const NecessityReport rich_old = check_necessity({CRRA{0.5, 1.0}, PathSpec::geometric(1.0, 1.05),
                                                    PathSpec::geometric(2.0, 1.05), PathSpec::constant(0.01)});
  CHECK(rich_old.R == doctest::Approx(4.2));
  CHECK_FALSE(rich_old.holds);

  const NecessityReport edge = check_necessity({Linear{2.0}, PathSpec::constant(1.0), PathSpec::zero(),
                                                PathSpec::geometric(0.01, 0.5)});
  CHECK(edge.borderline);
  CHECK_FALSE(edge.holds);
}

TEST_CASE("property: necessity implies asymptotically bubbly paths") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int checked = 0;
  for (int k = 0; k < 120 && checked < 40; ++k) {
    const int family = k % 3;
    const double G = 1.01 + 0.08 * u01(rng);
    const double w = 0.3 * u01(rng);
    UtilitySpec u;
    if (family == 0) u = CRRA{0.3 + 0.6 * u01(rng), 0.5 + 2.5 * u01(rng)};
    if (family == 1) u = Linear{1.5 + 3.0 * u01(rng)};
    if (family == 2) u = CobbDouglasLog{0.3 + 0.5 * u01(rng)};
    const double R = forward_rate(u, 1.0, G * w);
    if (!(R < 0.98 * G)) continue;
    const double Gd = R + (0.1 + 0.8 * u01(rng)) * (0.98 * G - R);
    const EconomyOLG e{u, PathSpec::geometric(1.0, G), PathSpec::geometric(w, G),
                       PathSpec::geometric(0.005 + 0.05 * u01(rng), Gd)};
    const NecessityReport n = check_necessity(e);
    REQUIRE(n.holds);
    const EquilibriumResult r = solve_equilibrium(e, 400);
    INFO("family " << family << " G " << G << " w " << w << " Gd " << Gd << " R " << R);
    CHECK(r.verdict.label == bubble::Label::Bubbly);
    CHECK(r.verdict.relevance_liminf >= 1e-3);
    ++checked;
  }
  CHECK(checked >= 30);
}

TEST_CASE("reverse regime admits an asymptotically irrelevant path") {
  // R = f(1, G w) = 8.32 > G_d = 1.05 > G = 1.02. With log utility p_t settles
  // at beta / (1 + beta) once dividends dominate, so curvature above one is needed.
  const EconomyOLG e{CRRA{0.5, 2.0}, PathSpec::geometric(1.0, 1.02), PathSpec::geometric(2.0, 1.02),
                     PathSpec::geometric(0.01, 1.05)};
  const NecessityReport n = check_necessity(e);
  CHECK_FALSE(n.holds);
  CHECK(n.R > n.G_d);
  CHECK(n.G_d > n.G);
  const EquilibriumResult r = solve_equilibrium(e, 400);
  const PricePath& zero_terminal = r.sweep.front();
  CHECK(zero_terminal.terminal == 0.0);
  CHECK(zero_terminal.p[399] < 1e-2);
  CHECK(zero_terminal.p[399] < zero_terminal.p[200]);
  CHECK(r.verdict.label != bubble::Label::Bubbly);
}
