#include "bubblelab/numerics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace bubblelab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotNonnegative: return "NotNonnegative";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NegativeYield: return "NegativeYield";
    case ErrorCode::ZeroPrice: return "ZeroPrice";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::IndeterminateGrowth: return "IndeterminateGrowth";
    case ErrorCode::WrongRegime: return "WrongRegime";
    case ErrorCode::NoBubblySteadyState: return "NoBubblySteadyState";
    case ErrorCode::NoFixedPoint: return "NoFixedPoint";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace bubblelab

namespace bubblelab::numerics {

SmallMatrix::SmallMatrix(std::size_t n) : SmallMatrix(n, std::vector<double>(n * n, 0.0)) {}

SmallMatrix::SmallMatrix(std::size_t n, std::vector<double> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (n == 0 || n > kMaxDim) {
    throw Error(ErrorCode::DomainError, "SmallMatrix: dimension must be in [1, 32]");
  }
  if (data_.size() != n * n) {
    throw Error(ErrorCode::LengthMismatch, "SmallMatrix: expected n*n entries");
  }
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::NonFinite, "SmallMatrix: entries must be finite");
  }
}

SmallMatrix SmallMatrix::identity(std::size_t n) {
  SmallMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SmallMatrix SmallMatrix::transposed() const {
  SmallMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

SmallMatrix SmallMatrix::scaled(double alpha) const {
  SmallMatrix s = *this;
  for (auto& v : s.data_) v *= alpha;
  return s;
}

SmallMatrix SmallMatrix::plus_identity(double shift) const {
  SmallMatrix s = *this;
  for (std::size_t i = 0; i < n_; ++i) s(i, i) += shift;
  return s;
}

std::vector<double> SmallMatrix::left_multiply(std::span<const double> x) const {
  if (x.size() != n_) throw Error(ErrorCode::LengthMismatch, "left_multiply: size");
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    if (x[i] == 0.0) continue;
    for (std::size_t j = 0; j < n_; ++j) out[j] += x[i] * (*this)(i, j);
  }
  return out;
}

std::vector<double> SmallMatrix::right_multiply(std::span<const double> x) const {
  if (x.size() != n_) throw Error(ErrorCode::LengthMismatch, "right_multiply: size");
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i] += (*this)(i, j) * x[j];
  return out;
}

namespace {

struct PowerOutcome {
  double rho = 0.0;
  std::vector<double> x;
  double residual = 0.0;
  bool converged = false;
};

// Power iteration for the left Perron pair; x is kept normalized to sum 1,
// so sum(x'M) is the eigenvalue estimate.
PowerOutcome power_iterate(const SmallMatrix& m, int max_iter) {
  const std::size_t n = m.dim();
  PowerOutcome out;
  out.x.assign(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> y = m.left_multiply(out.x);
    const double s = std::accumulate(y.begin(), y.end(), 0.0);
    if (s == 0.0) {
      // Nilpotent direction: x'M = 0 = 0 * x'.
      out.rho = 0.0;
      out.residual = 0.0;
      out.converged = true;
      return out;
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= s;
      diff += std::abs(y[i] - out.x[i]);
    }
    out.x = std::move(y);
    out.rho = s;
    if (diff <= 1e-14) break;
  }
  const std::vector<double> y = m.left_multiply(out.x);
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) res += std::abs(y[i] - out.rho * out.x[i]);
  out.residual = out.rho > 0.0 ? res / out.rho : res;
  out.converged = out.residual <= 1e-12;
  return out;
}

}  // namespace

SpectralResult spectral_radius(const SmallMatrix& m) {
  for (double v : m.entries()) {
    if (v < 0.0) throw Error(ErrorCode::NotNonnegative, "spectral_radius: negative entry");
  }
  constexpr int kMaxIter = 200000;
  PowerOutcome plain = power_iterate(m, kMaxIter / 10);
  if (plain.converged) {
    return {plain.rho, std::move(plain.x), plain.residual, false};
  }
  // The shift leaves eigenvectors unchanged and breaks the tie between
  // eigenvalues of equal modulus on the Perron circle.
  const double shift = 0.1 * (plain.rho > 0.0 ? plain.rho : 1.0);
  PowerOutcome shifted = power_iterate(m.plus_identity(shift), kMaxIter);
  const double rho = shifted.rho - shift;
  const std::vector<double> y = m.left_multiply(shifted.x);
  double res = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) res += std::abs(y[i] - rho * shifted.x[i]);
  const double rel = rho > 0.0 ? res / rho : res;
  if (rel > 1e-10) {
    throw Error(ErrorCode::NoConvergence,
                "spectral_radius: power iteration stalled, residual " + std::to_string(rel));
  }
  return {rho, std::move(shifted.x), rel, true};
}

SmallMatrix jacobian_fd(const VectorMap& map, std::span<const double> point, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::DomainError, "jacobian_fd: step must be positive");
  const std::size_t n = point.size();
  SmallMatrix jac(n);
  std::vector<double> probe(point.begin(), point.end());
  for (std::size_t j = 0; j < n; ++j) {
    probe[j] = point[j] + step;
    const std::vector<double> up = map(probe);
    probe[j] = point[j] - step;
    const std::vector<double> down = map(probe);
    probe[j] = point[j];
    if (up.size() != n || down.size() != n) {
      throw Error(ErrorCode::LengthMismatch, "jacobian_fd: map must be R^n -> R^n");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double d = (up[i] - down[i]) / (2.0 * step);
      if (!std::isfinite(d)) throw Error(ErrorCode::NonFinite, "jacobian_fd: probe failed");
      jac(i, j) = d;
    }
  }
  return jac;
}

std::pair<double, double> eigenvalues_2x2(const SmallMatrix& m) {
  if (m.dim() != 2) throw Error(ErrorCode::DomainError, "eigenvalues_2x2: need a 2x2 matrix");
  const double tr = m(0, 0) + m(1, 1);
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double disc = tr * tr / 4.0 - det;
  if (disc < 0.0) return {std::nan(""), std::nan("")};
  const double r = std::sqrt(disc);
  // Avoid cancellation: take the larger-modulus root first, then det / l1.
  const double l1 = tr / 2.0 + (tr >= 0.0 ? r : -r);
  const double l2 = l1 != 0.0 ? det / l1 : tr / 2.0 - r;
  return std::abs(l1) >= std::abs(l2) ? std::pair{l1, l2} : std::pair{l2, l1};
}

}  // namespace bubblelab::numerics
