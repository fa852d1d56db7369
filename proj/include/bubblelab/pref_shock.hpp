#pragma once

#include <utility>
#include <vector>

#include "bubblelab/bubble.hpp"
#include "bubblelab/error.hpp"
#include "bubblelab/necessity.hpp"
#include "bubblelab/paths.hpp"

namespace bubblelab::pref_shock {

struct Atom {
  double theta = 1.0;
  double prob = 1.0;
};

/// Finite distribution of the taste shock, sorted by theta.
class Distribution {
 public:
  Distribution() = default;
  explicit Distribution(std::vector<Atom> atoms);

  [[nodiscard]] const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  [[nodiscard]] double theta_L() const { return atoms_.front().theta; }
  [[nodiscard]] double theta_H() const { return atoms_.back().theta; }
  [[nodiscard]] double mass_L() const { return atoms_.front().prob; }
  /// Distance from theta_L to the next atom.
  [[nodiscard]] double gap() const { return atoms_[1].theta - atoms_[0].theta; }

 private:
  std::vector<Atom> atoms_;
};

struct PrefShockEconomy {
  double beta = 0.96;
  double gamma = 1.0;
  Distribution F;
  paths::PathSpec A = paths::PathSpec::constant(1.0);
  paths::PathSpec D = paths::PathSpec::zero();
  double delta = 0.0;  // isolation gap used in the price bound; 0 means gap / 2

  void validate() const;
  [[nodiscard]] double isolation() const;
};

/// sum_i p_i max{1, theta_i / theta_bar}
double liquidity_premium(const Distribution& F, double theta_bar);

/// sum_i p_i max{0, theta_bar^{1/gamma} - theta_i^{1/gamma}}
double savings_wedge(const Distribution& F, double theta_bar, double gamma);

/// A_t^{1/gamma} LP^{1/gamma} SW
double price_given_cutoff(double A_t, double gamma, const Distribution& F, double theta_bar);

/// (A_next / (beta R) min{theta, theta_bar})^{1/gamma}
double consumption_rule(double theta, double A_next, double R, double theta_bar, double gamma, double beta);

/// ((theta_L + delta)^{1/gamma} - theta_L^{1/gamma}) F(theta_L)
double price_bound_constant(const PrefShockEconomy& e);

struct CutoffPath {
  std::vector<double> theta_bar;  // t = 0..T
  std::vector<double> log_scale;  // log A_t^{1/gamma}
  std::vector<double> price;      // P_t / A_t^{1/gamma}
  std::vector<double> wealth;     // w_t / A_t^{1/gamma}
  std::vector<double> dividend;   // D_t / A_t^{1/gamma}
  std::vector<double> R;          // t = 0..T-1
  std::vector<double> log_q;
  double max_pricing_residual = 0.0;
  std::size_t valid_from = 0;  // earlier dates are NaN after a failed step

  [[nodiscard]] std::size_t horizon() const { return price.size() - 1; }
  [[nodiscard]] double P(std::size_t t) const { return std::exp(log_scale[t] + std::log(price[t])); }
};

struct PrefOptions {
  std::size_t n_terminals = 3;
  double agree_tol = 1e-6;  // on detrended prices, relative
};

struct PrefResult {
  CutoffPath path;                // middle terminal
  std::vector<CutoffPath> sweep;  // every terminal, ascending
  double early_window_agreement = 0.0;
  bubble::BubbleVerdict verdict;
  Diagnostics diagnostics;
};

/// Backward recursion from a terminal cutoff.
CutoffPath solve_from_terminal(const PrefShockEconomy& e, std::size_t T, double terminal_theta_bar,
                               Diagnostics& diags);

/// Sweep over terminal cutoffs theta_L + (theta_H - theta_L) k / n, k = 1..n.
PrefResult solve_pref_equilibrium(const PrefShockEconomy& e, std::size_t T, const PrefOptions& opts = {});

/// max_t |w_t - sum_i p_i c_t(theta_i) - P_t| / P_t
double market_clearing_residual(const PrefShockEconomy& e, const CutoffPath& path);

/// R = 0, G = (growth of A)^{1/gamma}; holds iff 0 < G_d < G.
NecessityReport check_necessity_pref(const PrefShockEconomy& e);

}  // namespace bubblelab::pref_shock
