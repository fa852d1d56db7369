#include "bubblelab/bewley.hpp"

#include <algorithm>
#include <cmath>

#include "bubblelab/format.hpp"

namespace bubblelab::bewley {

using numerics::SmallMatrix;

bool irreducible(const SmallMatrix& m) {
  const std::size_t n = m.dim();
  if (n == 1) return m(0, 0) > 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        if (m(i, j) > 0.0 && !seen[j]) {
          seen[j] = true;
          ++count;
          stack.push_back(j);
        }
      }
    }
    if (count != n) return false;
  }
  return true;
}

void MarkovSpec::validate() const {
  const std::size_t n = z.size();
  if (n < 2) throw Error(ErrorCode::InvalidSpec, "markov: need at least two states");
  if (Pi.dim() != n) throw Error(ErrorCode::LengthMismatch, "markov: Pi must be (N+1)x(N+1)");
  if (z[0] != 0.0) throw Error(ErrorCode::InvalidSpec, "markov: z_0 must be 0");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(z[i] > z[i - 1]) || !std::isfinite(z[i])) {
      throw Error(ErrorCode::InvalidSpec, "markov: z must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (Pi(i, j) < 0.0) throw Error(ErrorCode::InvalidSpec, "markov: negative transition probability");
      s += Pi(i, j);
    }
    if (std::abs(s - 1.0) > 1e-12) {
      throw Error(ErrorCode::InvalidSpec, "markov: row " + std::to_string(i) + " sums to " + format_double(s));
    }
  }
  if (!irreducible(Pi)) throw Error(ErrorCode::InvalidSpec, "markov: Pi is reducible");
  SmallMatrix pi1(n - 1);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) pi1(i - 1, j - 1) = Pi(i, j);
  if (!irreducible(pi1)) throw Error(ErrorCode::InvalidSpec, "markov: productive block Pi_1 is reducible");
}

SmallMatrix growth_matrix(const MarkovSpec& spec, double beta) {
  spec.validate();
  if (!(beta > 0.0)) throw Error(ErrorCode::DomainError, "growth_matrix: beta must be > 0");
  const std::size_t n = spec.z.size();
  SmallMatrix A(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A(i, j) = beta * spec.z[i] * spec.Pi(i, j);
  return A;
}

NecessityReport check_necessity_invest(const MarkovSpec& spec, double beta, double G_d) {
  if (!(G_d > 0.0)) throw Error(ErrorCode::DomainError, "check_necessity_invest: G_d must be > 0");
  const double rho = numerics::spectral_radius(growth_matrix(spec, beta)).rho;
  return classify_necessity(0.0, G_d, rho);
}

SmallMatrix persistence_transform(const SmallMatrix& Pi, double tau) {
  if (!(tau >= 0.0 && tau < 1.0)) throw Error(ErrorCode::DomainError, "persistence_transform: tau in [0, 1)");
  SmallMatrix out = Pi.scaled(1.0 - tau).plus_identity(tau);
  for (std::size_t i = 0; i < out.dim(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < out.dim(); ++j) s += Pi(i, j);
    if (std::abs(s - 1.0) > 1e-12) throw Error(ErrorCode::InvalidSpec, "persistence_transform: Pi not stochastic");
  }
  return out;
}

LowerBound wealth_lower_bound(std::span<const double> v0, const SmallMatrix& A, std::size_t T) {
  if (v0.size() != A.dim()) throw Error(ErrorCode::LengthMismatch, "wealth_lower_bound: v0 size");
  for (double v : v0) {
    if (!(v > 0.0)) throw Error(ErrorCode::DomainError, "wealth_lower_bound: v0 must be > 0");
  }
  const numerics::SpectralResult sr = numerics::spectral_radius(A);
  if (!(sr.rho > 0.0)) throw Error(ErrorCode::DomainError, "wealth_lower_bound: rho(A) = 0");
  LowerBound lb;
  lb.rho = sr.rho;
  lb.perron = sr.left_vector;
  lb.scaled.emplace_back(v0.begin(), v0.end());
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<double> next = A.left_multiply(lb.scaled.back());
    for (auto& x : next) x /= lb.rho;
    lb.scaled.push_back(std::move(next));
  }
  lb.epsilon = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v0.size(); ++i) {
    if (!(lb.perron[i] > 0.0)) throw Error(ErrorCode::DomainError, "wealth_lower_bound: Perron vector not positive");
    lb.epsilon = std::min(lb.epsilon, v0[i] / lb.perron[i]);
  }
  lb.w0 = lb.epsilon * lb.perron[0];
  return lb;
}

InvestPath simulate_invest_equilibrium(const MarkovSpec& spec, double beta, std::span<const double> v0,
                                       const paths::PathSpec& D, std::size_t T) {
  const SmallMatrix A = growth_matrix(spec, beta);
  const std::size_t n = spec.z.size();
  if (v0.size() != n) throw Error(ErrorCode::LengthMismatch, "simulate_invest: v0 size");
  if (!(v0[0] > 0.0)) throw Error(ErrorCode::ZeroPrice, "simulate_invest: type-0 wealth must be > 0");
  for (double v : v0) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::DomainError, "simulate_invest: v0 must be >= 0");
  }

  InvestPath out;
  out.rho = numerics::spectral_radius(A).rho;
  const double log_rho = std::log(out.rho);
  const double pi00 = spec.Pi(0, 0);
  const auto detrended_dividend = [&](std::size_t t) {
    const double ld = D.log_at(t);
    return std::isinf(ld) ? 0.0 : std::exp(ld - static_cast<double>(t) * log_rho);
  };

  out.W.emplace_back(v0.begin(), v0.end());
  out.P.push_back(beta * v0[0]);
  out.D.push_back(detrended_dividend(0));
  out.log_q.push_back(0.0);
  if (beta * pi00 >= 1.0) {
    out.diagnostics.push_back({"RegimeViolation", "beta pi_00 >= 1"});
    return out;
  }

  for (std::size_t t = 0; t < T; ++t) {
    const std::vector<double>& W = out.W.back();
    if (!(W[0] > 0.0)) throw Error(ErrorCode::ZeroPrice, "simulate_invest: W_0 vanished at t=" + std::to_string(t));
    const double d_next = detrended_dividend(t + 1);
    double inflow = 0.0;
    for (std::size_t k = 1; k < n; ++k) inflow += spec.Pi(k, 0) * beta * spec.z[k] * W[k];
    const double R = (beta * inflow + out.rho * d_next) / (beta * W[0] * (1.0 - beta * pi00));
    if (!(R < spec.z[1])) {
      out.diagnostics.push_back({"RegimeViolation", "R_" + std::to_string(t) + " = " + format_double(R) +
                                                        " >= z_1 = " + format_double(spec.z[1])});
      break;
    }
    std::vector<double> next(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      // Ties go to the technology.
      const double ret = beta * std::max(spec.z[k], R) * W[k] / out.rho;
      for (std::size_t j = 0; j < n; ++j) next[j] += spec.Pi(k, j) * ret;
    }
    out.R.push_back(R);
    out.log_q.push_back(out.log_q.back() - std::log(R));
    out.P.push_back(beta * next[0]);
    out.D.push_back(d_next);
    out.W.push_back(std::move(next));
  }

  const std::size_t reached = out.reached();
  std::vector<double> yields;
  for (std::size_t t = 1; t <= reached; ++t) yields.push_back(out.D[t] / out.P[t]);
  out.verdict = bubble::montrucchio_test(yields);
  const std::vector<double> ones(out.P.size(), 1.0);
  out.verdict.relevance_liminf = bubble::relevance_statistic(out.P, ones);
  return out;
}

}  // namespace bubblelab::bewley
