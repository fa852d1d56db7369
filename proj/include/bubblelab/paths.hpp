#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bubblelab/error.hpp"

namespace bubblelab::paths {

/// level * ratio^t
struct Geometric {
  double level = 1.0;
  double ratio = 1.0;
};

/// Stored values, continued past the end by a fixed geometric tail ratio.
struct Explicit {
  std::vector<double> values;
  double tail_ratio = 1.0;
};

/// An exogenous sequence indexed by t = 0, 1, ... (endowments, dividends,
/// productivity). Values are produced on demand, so the horizon is unbounded.
class PathSpec {
 public:
  PathSpec() = default;
  PathSpec(Geometric g);  // NOLINT(google-explicit-constructor)
  PathSpec(Explicit e);   // NOLINT(google-explicit-constructor)

  static PathSpec geometric(double level, double ratio) { return Geometric{level, ratio}; }
  static PathSpec constant(double level) { return Geometric{level, 1.0}; }
  static PathSpec zero() { return Geometric{0.0, 1.0}; }

  [[nodiscard]] const std::variant<Geometric, Explicit>& kind() const noexcept { return kind_; }

  /// log of the value at t; -inf for zero.
  [[nodiscard]] double log_at(std::size_t t) const;

  /// Exact limit of x_{t+1}/x_t, i.e. limsup x_t^{1/t} for these families.
  /// Empty when the tail is identically zero.
  [[nodiscard]] std::optional<double> analytic_ratio() const;

  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool strictly_positive() const;

  /// Human-readable form, also the config syntax: "geometric L R" or
  /// "explicit v0,v1,... tail R".
  [[nodiscard]] std::string to_string() const;
  static PathSpec parse(const std::string& text);

 private:
  std::variant<Geometric, Explicit> kind_ = Geometric{};
};

/// Value at t. Throws Overflow if the level is not representable.
double eval_path(const PathSpec& spec, std::size_t t);

/// x_t / y_t computed in log space, safe when both sides overflow.
double path_ratio(const PathSpec& num, const PathSpec& den, std::size_t t);

struct GrowthEstimate {
  double rate = 0.0;
  bool analytic = false;
  bool indeterminate = false;  // window max and min of x_t^{1/t} differ by > 1e-2
  bool zeros_excluded = false;
};

inline constexpr double kGrowthSpreadTol = 1e-2;

/// max of x_t^{1/t} over the trailing `window` entries of `values`
/// (values[t] = x_t). Zero entries are skipped and flagged.
GrowthEstimate growth_rate_estimate(std::span<const double> values, std::size_t window);

/// Same estimator fed with log x_t, for sequences too large for a double.
GrowthEstimate growth_rate_estimate_log(std::span<const double> log_values, std::size_t window);

/// limsup x_t^{1/t} of a spec. Both families have it in closed form; a
/// vanishing tail gives 0.
GrowthEstimate growth_rate(const PathSpec& spec);

/// Arrow-Debreu prices q_0 = 1, q_{t+1} = q_t / R_t. Returned as log q.
std::vector<double> arrow_debreu_log(std::span<const double> gross_rates);
std::vector<double> arrow_debreu(std::span<const double> gross_rates);

struct ValuationReport {
  std::vector<double> q;           // q_0 .. q_T
  std::vector<double> v0_partial;  // V0_partial[T] = sum_{t=1..T} q_t D_t, [0] = 0
  std::vector<double> qp_tail;     // q_T P_T (empty when no prices were given)
};

ValuationReport fundamental_partial_sums(std::span<const double> q, std::span<const double> dividends,
                                         std::size_t horizon,
                                         std::span<const double> prices = {});

/// max over T of |P_0 - (V0_partial[T] + q_T P_T)| / P_0 with q built from the
/// given gross rates. Terms are formed in log space.
double decomposition_residual(std::span<const double> prices, std::span<const double> dividends,
                              std::span<const double> gross_rates);

}  // namespace bubblelab::paths
