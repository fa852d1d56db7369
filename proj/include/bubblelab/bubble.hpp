#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bubblelab/error.hpp"

namespace bubblelab::bubble {

enum class Label { Bubbly, Fundamental, Indeterminate };

std::string to_string(Label label);

/// Margin on the fitted geometric decay of yields.
inline constexpr double kDecayMargin = 1e-3;

/// Power-law exponent margin for the harmonic boundary rule.
inline constexpr double kHarmonicMargin = 5e-2;

struct BubbleVerdict {
  Label label = Label::Indeterminate;
  double tail_decay = 0.0;        // exp(slope of log yield) over the tail, or the analytic ratio
  double yield_partial_sum = 0.0;
  double relevance_liminf = 0.0;  // filled in by the model layer
  std::string notes;
};

/// Classifies a path from its dividend yields D_t / P_t, t = 1..N
/// (yields[i] belongs to t = i + 1).
///
/// With `analytic_ratio` (exact limit of yield_{t+1}/yield_t) the label is
/// decided by ratio < 1. Otherwise the log yield is fitted against t over the
/// trailing quarter of the sample. A decay within kDecayMargin of 1 falls back
/// to a log-log fit: exponent <= 1 (+margin) means the partial sums diverge.
BubbleVerdict montrucchio_test(std::span<const double> yields,
                               std::optional<double> analytic_ratio = std::nullopt);

/// max over T of |q_0 P_0 / (q_T P_T) / prod_{t<=T}(1 + D_t/P_t) - 1|,
/// all in log space. D[0] is ignored.
double telescoping_check(std::span<const double> log_q, std::span<const double> prices,
                         std::span<const double> dividends);

/// min of P_t / scale_t over the trailing `fraction` of the sample.
double relevance_statistic(std::span<const double> prices, std::span<const double> scale,
                           double fraction = 0.25);

}  // namespace bubblelab::bubble
