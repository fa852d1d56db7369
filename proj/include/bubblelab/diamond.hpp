#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bubblelab/bubble.hpp"
#include "bubblelab/error.hpp"
#include "bubblelab/necessity.hpp"
#include "bubblelab/paths.hpp"

namespace bubblelab::diamond {

/// F(K, L) = A K^alpha L^{1-alpha} + (1 - delta) K
struct CobbDouglas {
  double A = 1.0;
  double alpha = 0.3;
  double delta = 1.0;
};

/// Marginal products at L = 1 for any other constant-returns technology.
struct CustomProduction {
  std::string name;
  std::function<double(double)> F_K;
  std::function<double(double)> F_L;
};

using Production = std::variant<CobbDouglas, CustomProduction>;

double F_K(const Production& f, double K);
double F_L(const Production& f, double K);

struct DiamondEconomy {
  Production production = CobbDouglas{};
  double beta = 0.5;
  paths::PathSpec D = paths::PathSpec::zero();
  double K0 = 0.0;  // <= 0 means "start at K*"

  void validate() const;
  [[nodiscard]] double initial_capital() const;
};

/// Closed form for Cobb-Douglas; bisection on beta F_L(K,1) - K otherwise.
double steady_capital(const DiamondEconomy& e);
/// Always bisects; used to cross-check the closed form.
double steady_capital_bisect(const DiamondEconomy& e);

/// F_K(K*, 1)
double autarky_rate(const DiamondEconomy& e);

struct BubblySteadyState {
  double K = 0.0;
  double P = 0.0;
};

/// F_K(K, 1) = 1 and P = beta F_L(K, 1) - K; needs D -> 0.
BubblySteadyState bubbly_steady_state(const DiamondEconomy& e);

enum class Halt { None, Collapse, CrowdingOut };

std::string to_string(Halt h);

struct SimPath {
  std::vector<double> K;  // K_0..K_n
  std::vector<double> P;  // P_0..P_n
  std::vector<double> R;  // R_t = F_K(K_{t+1}, 1), t < n
  std::vector<double> D;  // D_0..D_n
  Halt halt = Halt::None;
  std::size_t halt_t = 0;  // first date that violated a bound
};

/// Forward iteration from (K_start, P_start) at date t_start for `steps` periods.
SimPath simulate_from(const DiamondEconomy& e, std::size_t t_start, double K_start, double P_start,
                      std::size_t steps);

SimPath simulate(const DiamondEconomy& e, double P0, std::size_t T);

struct ShootOptions {
  std::size_t lookahead = 200;
  double split_tol = 1e-9;  // relative spread that ends a trusted segment
  double join_tol = 1e-8;
};

struct ShootResult {
  double P0 = 0.0;
  SimPath path;               // t = 0..T
  bubble::BubbleVerdict verdict;
  double max_join_gap = 0.0;  // largest relative price jump between segments
  std::size_t segments = 0;
  Diagnostics diagnostics;
};

/// Saddle-path search by bisection on the initial price: crowding out means
/// too high, collapse or survival means too low. Long horizons are handled in
/// segments, each restarting the bisection where the previous bracket split.
ShootResult shoot(const DiamondEconomy& e, std::size_t T, const ShootOptions& opts = {});

/// F_K(K*, 1) < G_d < 1
NecessityReport check_necessity(const DiamondEconomy& e);

}  // namespace bubblelab::diamond
