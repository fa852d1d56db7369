#include <doctest.h>

#include <cmath>
#include <random>

#include "bubblelab/bubble.hpp"
#include "bubblelab/paths.hpp"

using namespace bubblelab;
using namespace bubblelab::bubble;

namespace {

std::vector<double> geometric_yields(double level, double ratio, std::size_t n) {
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = level * std::pow(ratio, static_cast<double>(i + 1));
  return y;
}

}  // namespace

TEST_CASE("analytic branch") {
  const auto y = geometric_yields(1.0, 0.5, 50);
  const BubbleVerdict v = montrucchio_test(y, 0.5);
  CHECK(v.label == Label::Bubbly);
  CHECK(v.tail_decay == 0.5);
  CHECK(montrucchio_test(y, 1.0).label == Label::Fundamental);
}

TEST_CASE("constant yields are fundamental") {
  const std::vector<double> y(400, 0.07);
  const BubbleVerdict v = montrucchio_test(y);
  CHECK(v.label == Label::Fundamental);
  CHECK(v.tail_decay == doctest::Approx(1.0));
}

TEST_CASE("geometric decay fitted numerically") {
  const BubbleVerdict v = montrucchio_test(geometric_yields(0.3, 0.9, 400));
  CHECK(v.label == Label::Bubbly);
  CHECK(v.tail_decay == doctest::Approx(0.9).epsilon(1e-10));
  CHECK(montrucchio_test(geometric_yields(0.3, 1.01, 400)).label == Label::Fundamental);
}

TEST_CASE("harmonic yields diverge") {
  const std::size_t n = 1000000;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = 1.0 / static_cast<double>(i + 1);
  const BubbleVerdict v = montrucchio_test(y);
  // ln N + Euler-Mascheroni + 1/(2N)
  const double oracle = std::log(1e6) + 0.5772156649015329 + 0.5e-6;
  CHECK(v.yield_partial_sum == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(v.yield_partial_sum == doctest::Approx(14.39).epsilon(1e-3));
  CHECK(v.label == Label::Fundamental);
  CHECK(v.notes.find("divergence") != std::string::npos);
}

TEST_CASE("inverse-square yields stay undecided") {
  std::vector<double> y(100000);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 1.0 / std::pow(static_cast<double>(i + 1), 2.0);
  CHECK(montrucchio_test(y).label == Label::Indeterminate);
}

TEST_CASE("vanishing yields are a pure bubble") {
  const std::vector<double> y(100, 0.0);
  const BubbleVerdict v = montrucchio_test(y);
  CHECK(v.label == Label::Bubbly);
  CHECK(v.tail_decay == 0.0);
}

TEST_CASE("negative yields are rejected") {
  std::vector<double> y(10, 0.1);
  y[3] = -0.1;
  try {
    montrucchio_test(y);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeYield);
  }
}

TEST_CASE("property: the label is invariant to a common rescaling of P and D") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ratio(0.5, 1.5);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int k = 0; k < 200; ++k) {
    const double r = ratio(rng);
    const double s = scale(rng);
    std::vector<double> P(300), D(300), y1(299), y2(299);
    for (std::size_t t = 0; t < 300; ++t) {
      P[t] = 1.0 + 0.1 * std::sin(static_cast<double>(t));
      D[t] = 0.05 * std::pow(r, static_cast<double>(t));
    }
    for (std::size_t t = 1; t < 300; ++t) {
      y1[t - 1] = D[t] / P[t];
      y2[t - 1] = (s * D[t]) / (s * P[t]);
    }
    CHECK(montrucchio_test(y1).label == montrucchio_test(y2).label);
  }
}

TEST_CASE("property: raising yields never turns Fundamental into Bubbly") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ratio(0.8, 1.2);
  std::uniform_real_distribution<double> bump(0.0, 0.5);
  for (int k = 0; k < 200; ++k) {
    const auto base = geometric_yields(0.1, ratio(rng), 400);
    auto raised = base;
    const double b = bump(rng);
    for (std::size_t i = 0; i < raised.size(); ++i) raised[i] += b * base[i] + b * 1e-3;
    const Label before = montrucchio_test(base).label;
    const Label after = montrucchio_test(raised).label;
    if (before == Label::Fundamental) CHECK(after != Label::Bubbly);
    if (before == Label::Bubbly && after == Label::Bubbly) {
      CHECK(montrucchio_test(raised).yield_partial_sum >= montrucchio_test(base).yield_partial_sum);
    }
  }
}

TEST_CASE("telescoping identity") {
  SUBCASE("no dividends, constant q P") {
    const std::size_t T = 100;
    std::vector<double> P(T + 1), D(T + 1, 0.0), R(T);
    for (std::size_t t = 0; t <= T; ++t) P[t] = std::pow(1.03, static_cast<double>(t));
    for (std::size_t t = 0; t < T; ++t) R[t] = P[t + 1] / P[t];
    CHECK(telescoping_check(paths::arrow_debreu_log(R), P, D) <= 1e-12);
  }
  SUBCASE("textbook path P_t = beta a_t") {
    const std::size_t T = 1000;
    const double beta = 0.6;
    std::vector<double> P(T + 1), D(T + 1), R(T);
    for (std::size_t t = 0; t <= T; ++t) {
      P[t] = beta * std::pow(1.02, static_cast<double>(t));
      D[t] = 0.01 * std::pow(1.01, static_cast<double>(t));
    }
    for (std::size_t t = 0; t < T; ++t) R[t] = (P[t + 1] + D[t + 1]) / P[t];
    CHECK(telescoping_check(paths::arrow_debreu_log(R), P, D) <= 1e-10);
  }
  SUBCASE("zero price") {
    const std::vector<double> lq{0.0, -0.1};
    const std::vector<double> P{1.0, 0.0};
    const std::vector<double> D{0.0, 0.1};
    CHECK_THROWS_AS(telescoping_check(lq, P, D), Error);
  }
}

TEST_CASE("relevance statistic") {
  const std::size_t T = 1000;
  std::vector<double> a(T + 1), P(T + 1), decaying(T + 1);
  for (std::size_t t = 0; t <= T; ++t) {
    a[t] = std::pow(1.02, static_cast<double>(t));
    P[t] = 0.5 * a[t];
    decaying[t] = a[t] * std::pow(0.99, static_cast<double>(t));
  }
  CHECK(relevance_statistic(P, a) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(relevance_statistic(decaying, a) <= 1e-4);
  CHECK(relevance_statistic(a, a) == 1.0);
  CHECK_THROWS_AS(relevance_statistic(P, std::vector<double>(3, 1.0)), Error);
}
