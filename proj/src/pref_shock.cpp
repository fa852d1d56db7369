#include "bubblelab/pref_shock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bubblelab/format.hpp"
#include "bubblelab/numerics.hpp"

namespace bubblelab::pref_shock {

namespace {

constexpr int kGridPoints = 64;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_cutoff(const Distribution& F, double theta_bar) {
  if (!(theta_bar >= F.theta_L() && theta_bar <= F.theta_H())) {
    throw Error(ErrorCode::DomainError, "cutoff " + format_double(theta_bar) + " outside [theta_L, theta_H]");
  }
}

// P_t / A_t^{1/gamma}
double detrended_price(const Distribution& F, double gamma, double theta_bar) {
  return std::pow(liquidity_premium(F, theta_bar), 1.0 / gamma) * savings_wedge(F, theta_bar, gamma);
}

}  // namespace

Distribution::Distribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.size() < 2) throw Error(ErrorCode::InvalidSpec, "distribution: need at least two atoms");
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) { return x.theta < y.theta; });
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!(a.theta > 0.0) || !std::isfinite(a.theta)) throw Error(ErrorCode::InvalidSpec, "distribution: theta must be > 0");
    if (!(a.prob > 0.0)) throw Error(ErrorCode::InvalidSpec, "distribution: probabilities must be > 0");
    if (i > 0 && !(a.theta > atoms_[i - 1].theta)) throw Error(ErrorCode::InvalidSpec, "distribution: duplicate theta");
    total += a.prob;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::InvalidSpec, "distribution: probabilities sum to " + format_double(total));
}

double PrefShockEconomy::isolation() const { return delta > 0.0 ? delta : 0.5 * F.gap(); }

void PrefShockEconomy::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorCode::InvalidSpec, "pref_shock: beta must be in (0, 1)");
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidSpec, "pref_shock: gamma must be > 0");
  if (F.atoms().size() < 2) throw Error(ErrorCode::InvalidSpec, "pref_shock: distribution not set");
  if (!A.strictly_positive()) throw Error(ErrorCode::InvalidSpec, "pref_shock: productivity must be > 0");
  if (delta < 0.0 || delta > F.gap()) {
    throw Error(ErrorCode::InvalidSpec, "pref_shock: delta must lie in (0, gap above theta_L]");
  }
}

double liquidity_premium(const Distribution& F, double theta_bar) {
  check_cutoff(F, theta_bar);
  double s = 0.0;
  for (const Atom& a : F.atoms()) s += a.prob * std::max(1.0, a.theta / theta_bar);
  return s;
}

double savings_wedge(const Distribution& F, double theta_bar, double gamma) {
  check_cutoff(F, theta_bar);
  const double top = std::pow(theta_bar, 1.0 / gamma);
  double s = 0.0;
  for (const Atom& a : F.atoms()) s += a.prob * std::max(0.0, top - std::pow(a.theta, 1.0 / gamma));
  return s;
}

double price_given_cutoff(double A_t, double gamma, const Distribution& F, double theta_bar) {
  if (!(A_t > 0.0) || !(gamma > 0.0)) throw Error(ErrorCode::DomainError, "price_given_cutoff: need A_t, gamma > 0");
  const double p = detrended_price(F, gamma, theta_bar);
  if (!(p > 0.0)) throw Error(ErrorCode::ZeroPrice, "price_given_cutoff: cutoff at theta_L prices the asset at 0");
  return std::pow(A_t, 1.0 / gamma) * p;
}

double consumption_rule(double theta, double A_next, double R, double theta_bar, double gamma, double beta) {
  if (!(theta > 0.0) || !(A_next > 0.0) || !(R > 0.0) || !(theta_bar > 0.0) || !(gamma > 0.0) || !(beta > 0.0)) {
    throw Error(ErrorCode::DomainError, "consumption_rule: inputs must be positive");
  }
  return std::pow(A_next / (beta * R) * std::min(theta, theta_bar), 1.0 / gamma);
}

double price_bound_constant(const PrefShockEconomy& e) {
  const double g = 1.0 / e.gamma;
  return (std::pow(e.F.theta_L() + e.isolation(), g) - std::pow(e.F.theta_L(), g)) * e.F.mass_L();
}

CutoffPath solve_from_terminal(const PrefShockEconomy& e, std::size_t T, double terminal, Diagnostics& diags) {
  e.validate();
  if (T < 1) throw Error(ErrorCode::DomainError, "solve_pref_equilibrium: T must be >= 1");
  const Distribution& F = e.F;
  if (!(terminal > F.theta_L() && terminal <= F.theta_H())) {
    throw Error(ErrorCode::DomainError, "terminal cutoff must lie in (theta_L, theta_H]");
  }
  const double inv_g = 1.0 / e.gamma;
  CutoffPath path;
  path.theta_bar.assign(T + 1, kNaN);
  path.price.assign(T + 1, kNaN);
  path.wealth.assign(T + 1, kNaN);
  path.log_scale.resize(T + 1);
  path.dividend.resize(T + 1);
  path.R.assign(T, kNaN);
  for (std::size_t t = 0; t <= T; ++t) {
    path.log_scale[t] = inv_g * e.A.log_at(t);
    const double ld = e.D.log_at(t);
    path.dividend[t] = std::isinf(ld) ? 0.0 : std::exp(ld - path.log_scale[t]);
  }
  const auto fill = [&](std::size_t t, double tb) {
    const double lp = liquidity_premium(F, tb);
    path.theta_bar[t] = tb;
    path.price[t] = detrended_price(F, e.gamma, tb);
    path.wealth[t] = std::pow(lp * tb, inv_g);
  };
  fill(T, terminal);
  path.valid_from = T;

  const double lo = F.theta_L();
  const double width = F.theta_H() - lo;
  for (std::size_t t = T; t-- > 0;) {
    const double gA = std::exp(e.A.log_at(t + 1) - e.A.log_at(t));
    const double carry = std::pow(gA, 1.0 - inv_g) / e.beta;
    const double rhs = path.price[t + 1] + path.dividend[t + 1];
    const auto g = [&](double tb) {
      return detrended_price(F, e.gamma, tb) * carry / liquidity_premium(F, tb) - rhs;
    };
    std::vector<double> grid(kGridPoints + 1);
    std::vector<double> vals(kGridPoints + 1);
    for (int k = 0; k <= kGridPoints; ++k) {
      grid[k] = k == kGridPoints ? F.theta_H() : lo + width * k / kGridPoints;
      vals[k] = g(grid[k]);
    }
    std::vector<double> roots;
    for (int k = 1; k <= kGridPoints; ++k) {
      if (vals[k] == 0.0) {
        roots.push_back(grid[k]);
      } else if (vals[k - 1] != 0.0 && (vals[k - 1] > 0.0) != (vals[k] > 0.0)) {
        roots.push_back(numerics::bisect_root(g, {grid[k - 1], grid[k], 1e-15}));
      }
    }
    if (roots.empty()) {
      std::ostringstream os;
      os << "no cutoff solves the pricing equation at t=" << t << "; g on grid:";
      for (int k = 0; k <= kGridPoints; k += 16) os << ' ' << format_double(grid[k]) << ':' << format_double(vals[k]);
      diags.push_back({"NoRoot", os.str()});
      return path;
    }
    if (roots.size() > 1) {
      std::ostringstream os;
      os << "t=" << t << " has " << roots.size() << " cutoffs:";
      for (double r : roots) os << ' ' << format_double(r);
      os << "; largest kept";
      diags.push_back({"MultipleRoots", os.str()});
    }
    const double tb = roots.back();
    fill(t, tb);
    path.R[t] = gA / (e.beta * liquidity_premium(F, tb));
    path.max_pricing_residual = std::max(path.max_pricing_residual, std::abs(g(tb)) / rhs);
    path.valid_from = t;
  }
  path.log_q.assign(T + 1, 0.0);
  for (std::size_t t = 0; t < T; ++t) path.log_q[t + 1] = path.log_q[t] - std::log(path.R[t]);
  return path;
}

PrefResult solve_pref_equilibrium(const PrefShockEconomy& e, std::size_t T, const PrefOptions& opts) {
  if (opts.n_terminals < 1) throw Error(ErrorCode::DomainError, "solve_pref_equilibrium: need a terminal");
  if (T < 2) throw Error(ErrorCode::DomainError, "solve_pref_equilibrium: T must be >= 2");
  PrefResult out;
  const double lo = e.F.theta_L();
  const double width = e.F.theta_H() - lo;
  for (std::size_t k = 1; k <= opts.n_terminals; ++k) {
    const double terminal = k == opts.n_terminals
                                ? e.F.theta_H()
                                : lo + width * static_cast<double>(k) / static_cast<double>(opts.n_terminals);
    out.sweep.push_back(solve_from_terminal(e, T, terminal, out.diagnostics));
  }
  out.path = out.sweep[(opts.n_terminals - 1) / 2];
  const CutoffPath& p = out.path;
  if (p.valid_from > 0) return out;
  for (const auto& s : out.sweep) {
    if (s.valid_from > 0) return out;
  }

  const std::size_t half = T / 2;
  for (std::size_t t = 0; t <= half; ++t) {
    double mn = p.price[t];
    double mx = mn;
    for (const auto& s : out.sweep) {
      mn = std::min(mn, s.price[t]);
      mx = std::max(mx, s.price[t]);
    }
    out.early_window_agreement = std::max(out.early_window_agreement, (mx - mn) / p.price[t]);
  }
  if (out.early_window_agreement > opts.agree_tol) {
    out.diagnostics.push_back({"NoAgreement", "terminal sweep spread " + format_double(out.early_window_agreement) +
                                                  " over t <= " + std::to_string(half)});
  }
  std::vector<double> yields;
  for (std::size_t t = 1; t <= half; ++t) yields.push_back(p.dividend[t] / p.price[t]);
  out.verdict = bubble::montrucchio_test(yields);
  const std::vector<double> ones(half + 1, 1.0);
  out.verdict.relevance_liminf = bubble::relevance_statistic(std::span<const double>(p.price).first(half + 1), ones);
  return out;
}

double market_clearing_residual(const PrefShockEconomy& e, const CutoffPath& path) {
  double worst = 0.0;
  for (std::size_t t = path.valid_from; t < path.horizon(); ++t) {
    const double gA = std::exp(e.A.log_at(t + 1) - e.A.log_at(t));
    double spent = 0.0;
    for (const Atom& a : e.F.atoms()) {
      spent += a.prob * consumption_rule(a.theta, gA, path.R[t], path.theta_bar[t], e.gamma, e.beta);
    }
    worst = std::max(worst, std::abs(path.wealth[t] - spent - path.price[t]) / path.price[t]);
  }
  return worst;
}

NecessityReport check_necessity_pref(const PrefShockEconomy& e) {
  e.validate();
  const double G = std::pow(paths::growth_rate(e.A).rate, 1.0 / e.gamma);
  return classify_necessity(0.0, paths::growth_rate(e.D).rate, G);
}

}  // namespace bubblelab::pref_shock
