#pragma once

#include <vector>

#include "bubblelab/bubble.hpp"
#include "bubblelab/error.hpp"
#include "bubblelab/necessity.hpp"
#include "bubblelab/numerics.hpp"
#include "bubblelab/paths.hpp"

namespace bubblelab::bewley {

/// Productivity states z_0 = 0 < z_1 < ... < z_N and their transition matrix.
struct MarkovSpec {
  std::vector<double> z;
  numerics::SmallMatrix Pi;

  /// Row-stochastic, Pi and its lower-right block irreducible.
  void validate() const;
};

/// Strong connectivity of the positive-entry graph.
bool irreducible(const numerics::SmallMatrix& m);

/// A[n][n'] = beta z_n pi_{nn'}
numerics::SmallMatrix growth_matrix(const MarkovSpec& spec, double beta);

/// R = 0 (type 0 has no technology), G = rho(A).
NecessityReport check_necessity_invest(const MarkovSpec& spec, double beta, double G_d);

/// tau I + (1 - tau) Pi
numerics::SmallMatrix persistence_transform(const numerics::SmallMatrix& Pi, double tau);

struct LowerBound {
  double rho = 0.0;
  std::vector<std::vector<double>> scaled;  // v_0' A^t / rho^t, t = 0..T
  std::vector<double> perron;               // left Perron vector u, sums to 1
  double epsilon = 0.0;                     // min_n v0_n / u_n
  double w0 = 0.0;                          // epsilon u_0: W_0t >= w0 rho^t
};

LowerBound wealth_lower_bound(std::span<const double> v0, const numerics::SmallMatrix& A, std::size_t T);

struct InvestPath {
  double rho = 0.0;
  std::vector<std::vector<double>> W;  // W_t / rho^t
  std::vector<double> P;               // P_t / rho^t = beta W_0t / rho^t
  std::vector<double> D;               // D_t / rho^t
  std::vector<double> R;               // R_t, t < reached
  std::vector<double> log_q;
  bubble::BubbleVerdict verdict;
  Diagnostics diagnostics;

  [[nodiscard]] std::size_t reached() const { return P.size() - 1; }
};

/// Equilibrium in which only the unproductive type holds the asset
/// (R_t < z_1). Wealth is carried relative to rho(A)^t.
InvestPath simulate_invest_equilibrium(const MarkovSpec& spec, double beta, std::span<const double> v0,
                                       const paths::PathSpec& D, std::size_t T);

}  // namespace bubblelab::bewley
