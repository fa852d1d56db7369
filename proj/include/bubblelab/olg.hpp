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

namespace bubblelab::olg {

struct CRRA {
  double beta = 0.5;
  double gamma = 1.0;
};

struct Linear {
  double beta = 1.0;
};

/// U = (1 - beta) log y + beta log z
struct CobbDouglasLog {
  double beta = 0.5;
};

/// Extension point. Both callables must be homogeneous of degree 0 in
/// (y, z) and accept y = 0 as a limit (the solver works in detrended units).
struct Custom {
  std::string name;
  std::function<double(double, double)> mrs;
  std::function<double(double, double)> forward_rate;
};

using UtilitySpec = std::variant<CRRA, Linear, CobbDouglasLog, Custom>;

void validate(const UtilitySpec& u);
std::string describe(const UtilitySpec& u);

/// Marginal rate of substitution M(y, z) = beta u'(z) / u'(y).
double mrs(const UtilitySpec& u, double y, double z);

/// f(y, z) = 1 / M(y, z); CRRA extended continuously to z = 0.
double forward_rate(const UtilitySpec& u, double y_frac, double z_frac);

struct EconomyOLG {
  UtilitySpec utility;
  paths::PathSpec a;  // young endowment
  paths::PathSpec b;  // old endowment
  paths::PathSpec D;  // dividends

  /// Long-run growth of a.
  [[nodiscard]] double G() const;
  /// Long-run b / a.
  [[nodiscard]] double w() const;
  void validate() const;
};

/// One period of backward induction in detrended form: given
/// p_{t+1} = P_{t+1} / a_{t+1}, returns p_t in [0, 1].
double step_back_detrended(const EconomyOLG& e, std::size_t t, double p_next);

/// Same in goods units: P_t from P_{t+1}.
double step_back(const EconomyOLG& e, std::size_t t, double P_next);

/// An equilibrium price path stored relative to a_t.
struct PricePath {
  std::vector<double> log_a;   // log a_t, t = 0..T
  std::vector<double> p;       // P_t / a_t
  std::vector<double> w;       // b_t / a_t
  std::vector<double> d;       // D_t / a_t
  std::vector<double> R;       // gross rate R_t, t = 0..T-1
  std::vector<double> log_q;   // log Arrow-Debreu price, t = 0..T
  double terminal = 0.0;       // P_T in goods

  [[nodiscard]] std::size_t horizon() const { return p.size() - 1; }
  [[nodiscard]] double a(std::size_t t) const;
  [[nodiscard]] double P(std::size_t t) const;
  [[nodiscard]] double D(std::size_t t) const;
  [[nodiscard]] double b(std::size_t t) const;
  /// D_t / P_t; +inf if P_t = 0 < D_t, 0 if both vanish.
  [[nodiscard]] double yield(std::size_t t) const;
  /// max_t |residual of the pricing equation| / a_t over t < T.
  [[nodiscard]] double max_foc_residual(const EconomyOLG& e) const;
};

/// Backward induction from P_T = terminal.
PricePath solve_truncated(const EconomyOLG& e, std::size_t T, double terminal);

struct SweepOptions {
  std::size_t n_terminals = 3;
  double agree_tol = 1e-6;                     // relative to a_t
  std::optional<double> analytic_yield_ratio;  // passed to the bubble test
};

struct EquilibriumResult {
  PricePath path;                   // middle terminal
  std::vector<PricePath> sweep;     // every terminal, ascending
  double early_window_agreement = 0.0;  // max_{t <= T/2} spread of p_t
  bubble::BubbleVerdict verdict;
  Diagnostics diagnostics;
};

/// Terminal sweep over P_T = k a_T / (n - 1), k = 0..n-1.
EquilibriumResult solve_equilibrium(const EconomyOLG& e, std::size_t T, const SweepOptions& opts = {});

/// R = f(1, G w) against G_d = limsup D_t^{1/t} and G.
NecessityReport check_necessity(const EconomyOLG& e);

}  // namespace bubblelab::olg
