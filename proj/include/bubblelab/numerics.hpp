#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "bubblelab/error.hpp"

namespace bubblelab::numerics {

inline constexpr double kRootTol = 1e-12;
inline constexpr double kEigenTol = 1e-10;
inline constexpr double kJacobianStep = 1e-5;
inline constexpr int kBisectionCap = 200;

struct Bracket {
  double lo = 0.0;
  double hi = 1.0;
  double tol = kRootTol;  // absolute, in units of the argument
};

template <typename F>
concept ScalarFunction = requires(F f, double x) {
  { f(x) } -> std::convertible_to<double>;
};

/// Midpoint bisection on a sign-changing bracket.
///
/// Stops when the bracket is narrower than `tol`, the midpoint hits an exact
/// zero, or the midpoint can no longer be distinguished from an endpoint.
/// The iteration cap is fixed so results are reproducible bit for bit.
template <ScalarFunction F>
double bisect_root(F&& f, Bracket bracket) {
  if (!(bracket.lo < bracket.hi) || !(bracket.tol > 0.0)) {
    throw Error(ErrorCode::DomainError, "bisect_root: need lo < hi and tol > 0");
  }
  double lo = bracket.lo;
  double hi = bracket.hi;
  double f_lo = static_cast<double>(f(lo));
  double f_hi = static_cast<double>(f(hi));
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi)) {
    throw Error(ErrorCode::NonFinite, "bisect_root: f not finite at bracket ends");
  }
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw Error(ErrorCode::NoSignChange, "bisect_root: f(lo) and f(hi) share a sign");
  }
  for (int it = 0; it < kBisectionCap; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi || hi - lo <= bracket.tol) break;
    const double f_mid = static_cast<double>(f(mid));
    if (!std::isfinite(f_mid)) {
      throw Error(ErrorCode::NonFinite, "bisect_root: f not finite inside bracket");
    }
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
}

/// Dense square matrix of modest size, row-major.
class SmallMatrix {
 public:
  static constexpr std::size_t kMaxDim = 32;

  SmallMatrix() = default;
  explicit SmallMatrix(std::size_t n);
  SmallMatrix(std::size_t n, std::vector<double> row_major);

  static SmallMatrix identity(std::size_t n);

  [[nodiscard]] std::size_t dim() const noexcept { return n_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  [[nodiscard]] std::span<const double> entries() const noexcept { return data_; }

  [[nodiscard]] SmallMatrix transposed() const;
  [[nodiscard]] SmallMatrix scaled(double alpha) const;
  [[nodiscard]] SmallMatrix plus_identity(double shift) const;

  /// Row vector times matrix: (x' M)_j = sum_i x_i M_ij.
  [[nodiscard]] std::vector<double> left_multiply(std::span<const double> x) const;
  [[nodiscard]] std::vector<double> right_multiply(std::span<const double> x) const;

  friend bool operator==(const SmallMatrix&, const SmallMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct SpectralResult {
  double rho = 0.0;
  std::vector<double> left_vector;  // nonnegative, sums to 1
  double residual = 0.0;            // |x'M - rho x'|_1 / rho at exit
  bool used_shift = false;
};

/// Perron root and left eigenvector of a nonnegative matrix by power
/// iteration on M', started from the all-ones vector. If the plain iteration
/// stalls (periodic chains), it is rerun on M + s I with s = 0.1 * rho_est.
SpectralResult spectral_radius(const SmallMatrix& m);

using VectorMap = std::function<std::vector<double>(std::span<const double>)>;

/// Central-difference Jacobian of a map R^n -> R^n.
SmallMatrix jacobian_fd(const VectorMap& map, std::span<const double> point,
                        double step = kJacobianStep);

/// Real eigenvalues of a 2x2 matrix sorted by descending modulus; NaN pair if complex.
std::pair<double, double> eigenvalues_2x2(const SmallMatrix& m);

}  // namespace bubblelab::numerics
