#include <doctest.h>

#include <cmath>

#include "bubblelab/numerics.hpp"

using namespace bubblelab;
using namespace bubblelab::numerics;

TEST_CASE("bisect_root finds sqrt(2)") {
  const double r = bisect_root([](double x) { return x * x - 2.0; }, {0.0, 2.0, 1e-14});
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("bisect_root reports bad brackets") {
  auto f = [](double x) { return x * x + 1.0; };
  CHECK_THROWS_AS(bisect_root(f, {0.0, 1.0}), Error);
  try {
    bisect_root(f, {0.0, 1.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoSignChange);
  }
  try {
    bisect_root(f, {1.0, 0.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainError);
  }
  try {
    bisect_root([](double x) { return std::log(x); }, {0.0, 2.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
}

TEST_CASE("bisect_root returns exact endpoint zeros") {
  CHECK(bisect_root([](double x) { return x; }, {0.0, 1.0}) == 0.0);
  CHECK(bisect_root([](double x) { return x - 1.0; }, {0.0, 1.0}) == 1.0);
}

TEST_CASE("SmallMatrix validates its input") {
  CHECK_THROWS_AS(SmallMatrix(0), Error);
  CHECK_THROWS_AS(SmallMatrix(33), Error);
  CHECK_THROWS_AS(SmallMatrix(2, {1.0, 2.0, 3.0}), Error);
  CHECK_THROWS_AS(SmallMatrix(1, {NAN}), Error);
  const SmallMatrix m(2, {1.0, 2.0, 3.0, 4.0});
  CHECK(m.transposed()(0, 1) == 3.0);
  const auto l = m.left_multiply(std::vector<double>{1.0, 1.0});
  CHECK(l[0] == 4.0);
  CHECK(l[1] == 6.0);
  const auto r = m.right_multiply(std::vector<double>{1.0, 1.0});
  CHECK(r[0] == 3.0);
  CHECK(r[1] == 7.0);
}

TEST_CASE("spectral_radius of the two-state growth matrix") {
  const SmallMatrix A(2, {0.0, 0.0, 0.144, 1.296});
  const SpectralResult s = spectral_radius(A);
  CHECK(s.rho == doctest::Approx(1.296).epsilon(1e-12));
  // Left eigenvector: u0 * 0 + u1 * 0.144 = 1.296 u0.
  CHECK(s.left_vector[0] == doctest::Approx(s.left_vector[1] * 0.144 / 1.296).epsilon(1e-10));
  CHECK(s.left_vector[0] > 0.0);
}

TEST_CASE("spectral_radius handles periodic matrices through the shift") {
  // Eigenvalues +1 and -1; the uniform start is not the Perron vector.
  const SmallMatrix P(2, {0.0, 2.0, 0.5, 0.0});
  const SpectralResult s = spectral_radius(P);
  CHECK(s.rho == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.used_shift);
  CHECK(s.left_vector[0] == doctest::Approx(0.5 * s.left_vector[1]).epsilon(1e-8));
}

TEST_CASE("spectral_radius rejects negative entries") {
  try {
    spectral_radius(SmallMatrix(2, {1.0, -1.0, 0.0, 1.0}));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNonnegative);
  }
}

TEST_CASE("spectral_radius of the zero matrix") {
  CHECK(spectral_radius(SmallMatrix(3)).rho == 0.0);
}

TEST_CASE("jacobian_fd reproduces a linear map") {
  const VectorMap f = [](std::span<const double> x) {
    return std::vector<double>{2.0 * x[0] + 3.0 * x[1], -x[0] + 0.5 * x[1]};
  };
  const SmallMatrix J = jacobian_fd(f, std::vector<double>{0.3, -0.7});
  CHECK(J(0, 0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(J(0, 1) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(J(1, 0) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(J(1, 1) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("eigenvalues_2x2") {
  const auto [l1, l2] = eigenvalues_2x2(SmallMatrix(2, {2.5, 0.0, 0.0, 1.0 / 1.05}));
  CHECK(l1 == doctest::Approx(2.5));
  CHECK(l2 == doctest::Approx(1.0 / 1.05));
  const auto [c1, c2] = eigenvalues_2x2(SmallMatrix(2, {0.0, -1.0, 1.0, 0.0}));
  CHECK(std::isnan(c1));
  CHECK(std::isnan(c2));
  // Near-cancellation: eigenvalues 1e8 and 1e-8.
  const auto [b1, b2] = eigenvalues_2x2(SmallMatrix(2, {1e8, 0.0, 0.0, 1e-8}));
  CHECK(b1 == doctest::Approx(1e8));
  CHECK(b2 == doctest::Approx(1e-8).epsilon(1e-12));
}
