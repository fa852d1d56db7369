#include "bubblelab/diamond.hpp"

#include <algorithm>
#include <cmath>

#include "bubblelab/format.hpp"
#include "bubblelab/numerics.hpp"

namespace bubblelab::diamond {

double F_K(const Production& f, double K) {
  if (const auto* cd = std::get_if<CobbDouglas>(&f)) {
    return cd->alpha * cd->A * std::pow(K, cd->alpha - 1.0) + 1.0 - cd->delta;
  }
  return std::get<CustomProduction>(f).F_K(K);
}

double F_L(const Production& f, double K) {
  if (const auto* cd = std::get_if<CobbDouglas>(&f)) {
    return (1.0 - cd->alpha) * cd->A * std::pow(K, cd->alpha);
  }
  return std::get<CustomProduction>(f).F_L(K);
}

void DiamondEconomy::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorCode::InvalidSpec, "diamond: beta must be in (0, 1)");
  if (const auto* cd = std::get_if<CobbDouglas>(&production)) {
    if (!(cd->A > 0.0) || !(cd->alpha > 0.0 && cd->alpha < 1.0) || !(cd->delta >= 0.0 && cd->delta <= 1.0)) {
      throw Error(ErrorCode::InvalidSpec, "diamond: need A > 0, alpha in (0,1), delta in [0,1]");
    }
  } else {
    const auto& c = std::get<CustomProduction>(production);
    if (!c.F_K || !c.F_L) throw Error(ErrorCode::InvalidSpec, "diamond: custom production needs F_K and F_L");
  }
  const double k_star = steady_capital_bisect(*this);
  double prev = F_L(production, k_star / 64.0);
  for (int i = 1; i <= 12; ++i) {
    const double v = F_L(production, k_star / 64.0 * std::pow(2.0, i));
    if (!(v > prev)) throw Error(ErrorCode::InvalidSpec, "diamond: F_L(K, 1) must increase in K");
    prev = v;
  }
  const auto savings = [&](double K) { return beta * F_L(production, K) - K; };
  if (!(savings(0.5 * k_star) > 0.0) || !(savings(2.0 * k_star) < 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "diamond: beta F_L(K,1) - K must be positive below K* and negative above");
  }
  if (K0 > 0.0 && !std::isfinite(K0)) throw Error(ErrorCode::InvalidSpec, "diamond: K0 must be finite");
}

double DiamondEconomy::initial_capital() const { return K0 > 0.0 ? K0 : steady_capital(*this); }

double steady_capital(const DiamondEconomy& e) {
  if (const auto* cd = std::get_if<CobbDouglas>(&e.production)) {
    return std::pow(e.beta * cd->A * (1.0 - cd->alpha), 1.0 / (1.0 - cd->alpha));
  }
  return steady_capital_bisect(e);
}

double steady_capital_bisect(const DiamondEconomy& e) {
  const auto s = [&](double K) { return e.beta * F_L(e.production, K) - K; };
  double hi = 1.0;
  while (s(hi) >= 0.0) {
    hi *= 2.0;
    if (hi > 1e12) throw Error(ErrorCode::NoFixedPoint, "steady_capital: no sign change up to K = 1e12");
  }
  double lo = hi;
  do {
    lo *= 0.5;
    if (lo < 1e-300) throw Error(ErrorCode::NoFixedPoint, "steady_capital: savings never positive");
  } while (s(lo) <= 0.0);
  return numerics::bisect_root(s, {lo, hi, 1e-300});
}

double autarky_rate(const DiamondEconomy& e) { return F_K(e.production, steady_capital(e)); }

BubblySteadyState bubbly_steady_state(const DiamondEconomy& e) {
  BubblySteadyState ss;
  if (const auto* cd = std::get_if<CobbDouglas>(&e.production)) {
    if (cd->delta <= 0.0) {
      throw Error(ErrorCode::NoBubblySteadyState, "diamond: F_K > 1 everywhere when delta = 0");
    }
    ss.K = std::pow(cd->alpha * cd->A / cd->delta, 1.0 / (1.0 - cd->alpha));
  } else {
    const auto g = [&](double K) { return F_K(e.production, K) - 1.0; };
    double hi = 1.0;
    while (g(hi) > 0.0) {
      hi *= 2.0;
      if (hi > 1e12) throw Error(ErrorCode::NoBubblySteadyState, "diamond: F_K(K,1) > 1 up to K = 1e12");
    }
    double lo = hi;
    do {
      lo *= 0.5;
      if (lo < 1e-300) throw Error(ErrorCode::NoBubblySteadyState, "diamond: F_K(K,1) < 1 everywhere");
    } while (g(lo) <= 0.0);
    ss.K = numerics::bisect_root(g, {lo, hi, 1e-300});
  }
  ss.P = e.beta * F_L(e.production, ss.K) - ss.K;
  if (!(ss.P > 0.0)) {
    throw Error(ErrorCode::NoBubblySteadyState, "diamond: golden-rule capital exceeds autarky savings");
  }
  return ss;
}

std::string to_string(Halt h) {
  switch (h) {
    case Halt::None: return "None";
    case Halt::Collapse: return "Collapse";
    case Halt::CrowdingOut: return "CrowdingOut";
  }
  return "None";
}

SimPath simulate_from(const DiamondEconomy& e, std::size_t t_start, double K_start, double P_start,
                      std::size_t steps) {
  SimPath s;
  s.K.push_back(K_start);
  s.P.push_back(P_start);
  s.D.push_back(paths::eval_path(e.D, t_start));
  for (std::size_t k = 0; k < steps; ++k) {
    const double K_next = e.beta * F_L(e.production, s.K.back()) - s.P.back();
    if (!(K_next > 0.0)) {
      s.halt = Halt::CrowdingOut;
      s.halt_t = t_start + k + 1;
      return s;
    }
    const double R = F_K(e.production, K_next);
    const double D_next = paths::eval_path(e.D, t_start + k + 1);
    const double P_next = s.P.back() * R - D_next;
    s.K.push_back(K_next);
    s.R.push_back(R);
    s.D.push_back(D_next);
    if (P_next < 0.0) {
      s.P.push_back(P_next);
      s.halt = Halt::Collapse;
      s.halt_t = t_start + k + 1;
      return s;
    }
    s.P.push_back(P_next);
  }
  return s;
}

SimPath simulate(const DiamondEconomy& e, double P0, std::size_t T) {
  e.validate();
  const double K0 = e.initial_capital();
  if (!(P0 >= 0.0) || !(P0 < e.beta * F_L(e.production, K0))) {
    throw Error(ErrorCode::DomainError, "simulate: P0 must lie in [0, beta F_L(K0, 1))");
  }
  return simulate_from(e, 0, K0, P0, T);
}

namespace {

// Index (relative to the segment start) of the first date at which the two
// bracketing paths can no longer be told apart from a wrong-branch path.
std::size_t split_index(const SimPath& lo, const SimPath& hi, double tol) {
  const std::size_t n = std::min(lo.P.size(), hi.P.size());
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = std::max(std::abs(lo.P[k]), std::abs(hi.P[k]));
    if (scale > 0.0 && std::abs(lo.P[k] - hi.P[k]) > tol * scale) return k;
  }
  return n - 1;
}

}  // namespace

ShootResult shoot(const DiamondEconomy& e, std::size_t T, const ShootOptions& opts) {
  e.validate();
  if (T < 2) throw Error(ErrorCode::DomainError, "shoot: T must be >= 2");
  ShootResult out;
  const double K0 = e.initial_capital();
  const std::size_t horizon = T + opts.lookahead;

  SimPath& path = out.path;
  path.K = {K0};
  path.D = {paths::eval_path(e.D, 0)};

  const SimPath zero = simulate_from(e, 0, K0, 0.0, horizon);
  if (zero.halt == Halt::None) {
    out.diagnostics.push_back({"Multiplicity", "the zero-price path is also bounded through t = " +
                                                   std::to_string(horizon)});
  }

  std::size_t t0 = 0;
  double K = K0;
  while (true) {
    ++out.segments;
    const std::size_t steps = horizon - t0;
    const double cap = e.beta * F_L(e.production, K);
    double lo = 0.0;
    double hi = cap;
    bool saw_crowding = false;
    for (int it = 0; it < 2000; ++it) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      if (simulate_from(e, t0, K, mid, steps).halt == Halt::CrowdingOut) {
        hi = mid;
        saw_crowding = true;
      } else {
        lo = mid;
      }
    }
    if (!saw_crowding) {
      out.diagnostics.push_back({"NoEquilibriumFound", "no initial price crowds out capital at t = " +
                                                           std::to_string(t0) + "; bracket is degenerate"});
      break;
    }
    const SimPath lo_path = simulate_from(e, t0, K, lo, steps);
    const SimPath hi_path = simulate_from(e, t0, K, hi, steps);
    const std::size_t split = split_index(lo_path, hi_path, opts.split_tol);

    if (t0 == 0) {
      out.P0 = lo;
      path.P = {lo};
    } else {
      const double old = path.P.back();
      const double gap = old > 0.0 ? std::abs(lo - old) / old : std::abs(lo - old);
      out.max_join_gap = std::max(out.max_join_gap, gap);
      path.P.back() = lo;
    }

    const bool reaches_end = t0 + split >= T;
    const std::size_t advance = reaches_end ? T - t0 : std::max<std::size_t>(1, split / 2);
    for (std::size_t k = 1; k <= advance; ++k) {
      if (k >= lo_path.P.size()) break;
      path.K.push_back(lo_path.K[k]);
      path.P.push_back(lo_path.P[k]);
      path.R.push_back(lo_path.R[k - 1]);
      path.D.push_back(lo_path.D[k]);
    }
    const std::size_t reached = path.P.size() - 1;
    if (reached >= T) break;
    if (reached < t0 + advance || path.P.back() < 0.0) {
      out.diagnostics.push_back({"NoEquilibriumFound", "bracketing paths halt at t = " + std::to_string(reached) +
                                                           " (lo: " + to_string(lo_path.halt) +
                                                           ", hi: " + to_string(hi_path.halt) + ")"});
      break;
    }
    t0 = reached;
    K = path.K.back();
  }

  if (out.max_join_gap > opts.join_tol) {
    out.diagnostics.push_back({"NoEquilibriumFound", "segment join gap " + format_double(out.max_join_gap) +
                                                         " exceeds " + format_double(opts.join_tol)});
  }

  const std::size_t n = path.P.size() - 1;
  std::vector<double> yields;
  bool vanishing = false;
  for (std::size_t t = 1; t <= n; ++t) {
    if (!(path.P[t] > 0.0)) {
      vanishing = true;
      break;
    }
    yields.push_back(path.D[t] / path.P[t]);
  }
  if (vanishing || n < 1) {
    out.verdict.label = bubble::Label::Fundamental;
    out.verdict.notes = "price vanishes along the path";
  } else {
    out.verdict = bubble::montrucchio_test(yields);
  }
  const std::vector<double> ones(path.P.size(), 1.0);
  out.verdict.relevance_liminf = bubble::relevance_statistic(path.P, ones);
  return out;
}

NecessityReport check_necessity(const DiamondEconomy& e) {
  e.validate();
  return classify_necessity(autarky_rate(e), paths::growth_rate(e.D).rate, 1.0);
}

}  // namespace bubblelab::diamond
