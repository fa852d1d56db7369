#include "bubblelab/bubble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "bubblelab/format.hpp"

namespace bubblelab::bubble {

std::string to_string(Label label) {
  switch (label) {
    case Label::Bubbly: return "Bubbly";
    case Label::Fundamental: return "Fundamental";
    case Label::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

namespace {

// Least-squares slope of ys against xs.
double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

BubbleVerdict montrucchio_test(std::span<const double> yields, std::optional<double> analytic_ratio) {
  BubbleVerdict v;
  for (std::size_t i = 0; i < yields.size(); ++i) {
    if (!std::isfinite(yields[i]) || yields[i] < 0.0) {
      throw Error(ErrorCode::NegativeYield,
                  "yield at t=" + std::to_string(i + 1) + " is " + format_double(yields[i]));
    }
    v.yield_partial_sum += yields[i];
  }

  if (analytic_ratio) {
    const double r = *analytic_ratio;
    if (!std::isfinite(r) || r < 0.0) throw Error(ErrorCode::DomainError, "analytic ratio must be >= 0");
    v.tail_decay = r;
    v.label = r < 1.0 ? Label::Bubbly : Label::Fundamental;
    v.notes = r < 1.0 ? "analytic: yields decay geometrically" : "analytic: yields do not vanish";
    return v;
  }

  if (yields.size() < 4) {
    v.notes = "too few yields to fit a tail";
    return v;
  }
  const std::size_t window = std::max<std::size_t>(4, yields.size() / 4);
  std::vector<double> ts;
  std::vector<double> logs;
  for (std::size_t i = yields.size() - window; i < yields.size(); ++i) {
    if (yields[i] > 0.0) {
      ts.push_back(static_cast<double>(i + 1));
      logs.push_back(std::log(yields[i]));
    }
  }
  if (ts.empty()) {
    v.label = Label::Bubbly;
    v.tail_decay = 0.0;
    v.notes = "yields vanish identically over the tail (pure bubble)";
    return v;
  }
  if (ts.size() < 2) {
    v.notes = "fewer than two positive yields in the tail";
    return v;
  }

  v.tail_decay = std::exp(ols_slope(ts, logs));
  if (v.tail_decay < 1.0 - kDecayMargin) {
    v.label = Label::Bubbly;
    v.notes = "yields decay geometrically";
    return v;
  }
  if (v.tail_decay > 1.0 + kDecayMargin) {
    v.label = Label::Fundamental;
    v.notes = "yields grow";
    return v;
  }

  std::vector<double> log_ts(ts.size());
  std::transform(ts.begin(), ts.end(), log_ts.begin(), [](double t) { return std::log(t); });
  const double exponent = -ols_slope(log_ts, logs);
  std::ostringstream os;
  os << "sub-geometric tail, power-law exponent " << format_double(exponent) << ", partial sum "
     << format_double(v.yield_partial_sum);
  if (exponent <= 1.0 + kHarmonicMargin) {
    v.label = Label::Fundamental;
    os << "; Fundamental by divergence";
  } else {
    os << "; summability undecided at this horizon";
  }
  v.notes = os.str();
  return v;
}

double telescoping_check(std::span<const double> log_q, std::span<const double> prices,
                         std::span<const double> dividends) {
  const std::size_t n = prices.size();
  if (log_q.size() < n || dividends.size() < n) {
    throw Error(ErrorCode::LengthMismatch, "telescoping_check: q and D must cover P");
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (!(prices[t] > 0.0)) throw Error(ErrorCode::ZeroPrice, "telescoping_check: P_" + std::to_string(t) + " <= 0");
  }
  double log_prod = 0.0;
  double worst = 0.0;
  const double lhs0 = log_q[0] + std::log(prices[0]);
  for (std::size_t t = 1; t < n; ++t) {
    log_prod += std::log1p(dividends[t] / prices[t]);
    const double lhs = lhs0 - (log_q[t] + std::log(prices[t]));
    worst = std::max(worst, std::abs(std::expm1(lhs - log_prod)));
  }
  return worst;
}

double relevance_statistic(std::span<const double> prices, std::span<const double> scale, double fraction) {
  if (prices.size() != scale.size()) throw Error(ErrorCode::LengthMismatch, "relevance_statistic: sizes differ");
  if (prices.empty()) throw Error(ErrorCode::EmptyWindow, "relevance_statistic: empty path");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw Error(ErrorCode::DomainError, "fraction must be in (0, 1]");
  const auto window = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(prices.size()))));
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t t = prices.size() - window; t < prices.size(); ++t) {
    if (!(scale[t] > 0.0)) throw Error(ErrorCode::NonPositive, "relevance_statistic: scale must be > 0");
    lo = std::min(lo, prices[t] / scale[t]);
  }
  return lo;
}

}  // namespace bubblelab::bubble
