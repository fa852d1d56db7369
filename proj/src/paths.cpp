#include "bubblelab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bubblelab/format.hpp"

namespace bubblelab::paths {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

void validate(const Geometric& g) {
  if (!(g.level >= 0.0) || !std::isfinite(g.level)) {
    throw Error(ErrorCode::InvalidSpec, "geometric path: level must be finite and >= 0");
  }
  if (!(g.ratio > 0.0) || !std::isfinite(g.ratio)) {
    throw Error(ErrorCode::InvalidSpec, "geometric path: ratio must be finite and > 0");
  }
}

void validate(const Explicit& e) {
  if (e.values.empty()) throw Error(ErrorCode::InvalidSpec, "explicit path: no values");
  for (double v : e.values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::InvalidSpec, "explicit path: values must be finite and >= 0");
    }
  }
  if (!(e.tail_ratio > 0.0) || !std::isfinite(e.tail_ratio)) {
    throw Error(ErrorCode::InvalidSpec, "explicit path: tail ratio must be finite and > 0");
  }
}

double parse_number(const std::string& tok) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::Config, "path: not a number: '" + tok + "'");
  }
  if (used != tok.size()) throw Error(ErrorCode::Config, "path: not a number: '" + tok + "'");
  return v;
}

}  // namespace

PathSpec::PathSpec(Geometric g) : kind_(g) { validate(g); }
PathSpec::PathSpec(Explicit e) : kind_(std::move(e)) { validate(std::get<Explicit>(kind_)); }

double PathSpec::log_at(std::size_t t) const {
  const double tt = static_cast<double>(t);
  if (const auto* g = std::get_if<Geometric>(&kind_)) {
    if (g->level == 0.0) return kNegInf;
    return std::log(g->level) + tt * std::log(g->ratio);
  }
  const auto& e = std::get<Explicit>(kind_);
  if (t < e.values.size()) return safe_log(e.values[t]);
  const double last = e.values.back();
  if (last == 0.0) return kNegInf;
  const double extra = static_cast<double>(t - (e.values.size() - 1));
  return std::log(last) + extra * std::log(e.tail_ratio);
}

std::optional<double> PathSpec::analytic_ratio() const {
  if (const auto* g = std::get_if<Geometric>(&kind_)) {
    if (g->level == 0.0) return std::nullopt;
    return g->ratio;
  }
  const auto& e = std::get<Explicit>(kind_);
  if (e.values.back() == 0.0) return std::nullopt;
  return e.tail_ratio;
}

bool PathSpec::is_zero() const {
  if (const auto* g = std::get_if<Geometric>(&kind_)) return g->level == 0.0;
  const auto& e = std::get<Explicit>(kind_);
  return std::all_of(e.values.begin(), e.values.end(), [](double v) { return v == 0.0; });
}

bool PathSpec::strictly_positive() const {
  if (const auto* g = std::get_if<Geometric>(&kind_)) return g->level > 0.0;
  const auto& e = std::get<Explicit>(kind_);
  return std::all_of(e.values.begin(), e.values.end(), [](double v) { return v > 0.0; });
}

std::string PathSpec::to_string() const {
  std::ostringstream os;
  if (const auto* g = std::get_if<Geometric>(&kind_)) {
    os << "geometric " << format_double(g->level) << ' ' << format_double(g->ratio);
  } else {
    const auto& e = std::get<Explicit>(kind_);
    os << "explicit ";
    for (std::size_t i = 0; i < e.values.size(); ++i) {
      if (i) os << ',';
      os << format_double(e.values[i]);
    }
    os << " tail " << format_double(e.tail_ratio);
  }
  return os.str();
}

PathSpec PathSpec::parse(const std::string& text) {
  std::istringstream is(text);
  std::string head;
  is >> head;
  std::vector<std::string> rest;
  for (std::string tok; is >> tok;) rest.push_back(tok);
  if (head == "geometric" && rest.size() == 2) {
    return Geometric{parse_number(rest[0]), parse_number(rest[1])};
  }
  if (head == "constant" && rest.size() == 1) return Geometric{parse_number(rest[0]), 1.0};
  if (head == "zero" && rest.empty()) return zero();
  if (head == "explicit" && rest.size() == 3 && rest[1] == "tail") {
    Explicit e;
    std::istringstream vs(rest[0]);
    for (std::string tok; std::getline(vs, tok, ',');) e.values.push_back(parse_number(tok));
    e.tail_ratio = parse_number(rest[2]);
    return e;
  }
  throw Error(ErrorCode::Config,
              "path: expected 'geometric L R', 'constant L', 'zero' or "
              "'explicit v0,v1,... tail R', got '" + text + "'");
}

double eval_path(const PathSpec& spec, std::size_t t) {
  const double lv = spec.log_at(t);
  if (lv == kNegInf) return 0.0;
  const double v = std::exp(lv);
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::Overflow, "eval_path: value at t=" + std::to_string(t) +
                                         " overflows; work with detrended quantities");
  }
  // Exact stored values for explicit paths and for t = 0.
  if (const auto* e = std::get_if<Explicit>(&spec.kind()); e && t < e->values.size()) {
    return e->values[t];
  }
  if (const auto* g = std::get_if<Geometric>(&spec.kind())) {
    const double direct = g->level * std::pow(g->ratio, static_cast<double>(t));
    if (std::isfinite(direct)) return direct;
  }
  return v;
}

double path_ratio(const PathSpec& num, const PathSpec& den, std::size_t t) {
  const double ld = den.log_at(t);
  if (ld == kNegInf) throw Error(ErrorCode::DomainError, "path_ratio: zero denominator");
  const double ln = num.log_at(t);
  if (ln == kNegInf) return 0.0;
  return std::exp(ln - ld);
}

GrowthEstimate growth_rate_estimate_log(std::span<const double> log_values, std::size_t window) {
  if (window < 2 || window > log_values.size()) {
    throw Error(ErrorCode::EmptyWindow, "growth_rate_estimate: window must be in [2, size]");
  }
  GrowthEstimate out;
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t t = log_values.size() - window; t < log_values.size(); ++t) {
    if (t == 0) continue;
    const double lv = log_values[t];
    if (std::isnan(lv)) throw Error(ErrorCode::NonPositive, "growth_rate_estimate: NaN entry");
    if (lv == kNegInf) {
      out.zeros_excluded = true;
      continue;
    }
    const double root = std::exp(lv / static_cast<double>(t));
    hi = std::max(hi, root);
    lo = std::min(lo, root);
    any = true;
  }
  if (!any) throw Error(ErrorCode::NonPositive, "growth_rate_estimate: no positive entries in window");
  out.rate = hi;
  out.indeterminate = (hi - lo) > kGrowthSpreadTol;
  return out;
}

GrowthEstimate growth_rate_estimate(std::span<const double> values, std::size_t window) {
  std::vector<double> logs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0) throw Error(ErrorCode::NonPositive, "growth_rate_estimate: negative entry");
    logs[i] = safe_log(values[i]);
  }
  return growth_rate_estimate_log(logs, window);
}

GrowthEstimate growth_rate(const PathSpec& spec) {
  if (auto r = spec.analytic_ratio()) return {*r, true, false, false};
  // Tail identically zero.
  return {0.0, true, false, false};
}

std::vector<double> arrow_debreu_log(std::span<const double> gross_rates) {
  std::vector<double> log_q(gross_rates.size() + 1, 0.0);
  for (std::size_t t = 0; t < gross_rates.size(); ++t) {
    const double r = gross_rates[t];
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw Error(ErrorCode::NonPositiveRate,
                  "arrow_debreu: R_" + std::to_string(t) + " = " + format_double(r));
    }
    log_q[t + 1] = log_q[t] - std::log(r);
  }
  return log_q;
}

std::vector<double> arrow_debreu(std::span<const double> gross_rates) {
  std::vector<double> q = arrow_debreu_log(gross_rates);
  for (auto& v : q) v = std::exp(v);
  return q;
}

ValuationReport fundamental_partial_sums(std::span<const double> q, std::span<const double> dividends,
                                         std::size_t horizon, std::span<const double> prices) {
  if (q.size() <= horizon || dividends.size() <= horizon ||
      (!prices.empty() && prices.size() <= horizon)) {
    throw Error(ErrorCode::LengthMismatch, "fundamental_partial_sums: sequences shorter than horizon");
  }
  ValuationReport rep;
  rep.q.assign(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(horizon + 1));
  rep.v0_partial.assign(horizon + 1, 0.0);
  for (std::size_t t = 1; t <= horizon; ++t) {
    rep.v0_partial[t] = rep.v0_partial[t - 1] + q[t] * dividends[t];
  }
  if (!prices.empty()) {
    rep.qp_tail.resize(horizon + 1);
    for (std::size_t t = 0; t <= horizon; ++t) rep.qp_tail[t] = q[t] * prices[t];
  }
  return rep;
}

double decomposition_residual(std::span<const double> prices, std::span<const double> dividends,
                              std::span<const double> gross_rates) {
  const std::size_t n = prices.size();
  if (n < 2 || dividends.size() < n || gross_rates.size() + 1 < n) {
    throw Error(ErrorCode::LengthMismatch, "decomposition_residual: inconsistent lengths");
  }
  if (!(prices[0] > 0.0)) throw Error(ErrorCode::ZeroPrice, "decomposition_residual: P_0 = 0");
  const std::vector<double> log_q = arrow_debreu_log(gross_rates.first(n - 1));
  double fundamental = 0.0;
  double worst = 0.0;
  for (std::size_t t = 1; t < n; ++t) {
    if (dividends[t] > 0.0) fundamental += std::exp(log_q[t] + std::log(dividends[t]));
    const double tail = prices[t] > 0.0 ? std::exp(log_q[t] + std::log(prices[t])) : 0.0;
    worst = std::max(worst, std::abs(prices[0] - (fundamental + tail)) / prices[0]);
  }
  return worst;
}

}  // namespace bubblelab::paths
