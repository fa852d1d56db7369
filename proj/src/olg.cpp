#include "bubblelab/olg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bubblelab/format.hpp"
#include "bubblelab/numerics.hpp"

namespace bubblelab::olg {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// MRS allowing y = 0 as a limit; z > 0.
double mrs_ext(const UtilitySpec& u, double y, double z) {
  return std::visit(Overloaded{
                        [&](const CRRA& c) { return c.beta * std::pow(y / z, c.gamma); },
                        [&](const Linear& l) { return l.beta; },
                        [&](const CobbDouglasLog& c) { return c.beta / (1.0 - c.beta) * (y / z); },
                        [&](const Custom& c) { return c.mrs(y, z); },
                    },
                    u);
}

struct NextPeriod {
  double G = 1.0;  // a_{t+1} / a_t
  double w = 0.0;  // b_{t+1} / a_{t+1}
  double d = 0.0;  // D_{t+1} / a_{t+1}
};

NextPeriod next_period(const EconomyOLG& e, std::size_t t) {
  NextPeriod n;
  n.G = std::exp(e.a.log_at(t + 1) - e.a.log_at(t));
  n.w = paths::path_ratio(e.b, e.a, t + 1);
  n.d = paths::path_ratio(e.D, e.a, t + 1);
  return n;
}

double solve_step(const UtilitySpec& u, const NextPeriod& n, double p_next) {
  const double s = n.G * (p_next + n.d);
  if (s == 0.0) return 0.0;
  const double z = n.G * (n.w + p_next + n.d);
  auto g = [&](double x) { return mrs_ext(u, 1.0 - x, z) * s - x; };
  if (g(1.0) >= 0.0) return 1.0;
  return numerics::bisect_root(g, {0.0, 1.0, 1e-17});
}

std::size_t longest_explicit(const paths::PathSpec& s) {
  if (const auto* e = std::get_if<paths::Explicit>(&s.kind())) return e->values.size();
  return 1;
}

}  // namespace

void validate(const UtilitySpec& u) {
  std::visit(Overloaded{
                 [](const CRRA& c) {
                   if (!(c.beta > 0.0) || !(c.gamma > 0.0))
                     throw Error(ErrorCode::InvalidSpec, "CRRA: need beta > 0 and gamma > 0");
                 },
                 [](const Linear& l) {
                   if (!(l.beta > 0.0)) throw Error(ErrorCode::InvalidSpec, "Linear: need beta > 0");
                 },
                 [](const CobbDouglasLog& c) {
                   if (!(c.beta > 0.0 && c.beta < 1.0))
                     throw Error(ErrorCode::InvalidSpec, "CobbDouglasLog: need beta in (0, 1)");
                 },
                 [](const Custom& c) {
                   if (!c.mrs || !c.forward_rate)
                     throw Error(ErrorCode::InvalidSpec, "Custom utility: both callables required");
                 },
             },
             u);
}

std::string describe(const UtilitySpec& u) {
  return std::visit(Overloaded{
                        [](const CRRA& c) {
                          return "crra " + format_double(c.beta) + " " + format_double(c.gamma);
                        },
                        [](const Linear& l) { return "linear " + format_double(l.beta); },
                        [](const CobbDouglasLog& c) { return "cobb_douglas_log " + format_double(c.beta); },
                        [](const Custom& c) { return "custom " + c.name; },
                    },
                    u);
}

double mrs(const UtilitySpec& u, double y, double z) {
  if (!(y > 0.0) || !(z > 0.0)) throw Error(ErrorCode::DomainError, "mrs: need y > 0 and z > 0");
  return mrs_ext(u, y, z);
}

double forward_rate(const UtilitySpec& u, double y_frac, double z_frac) {
  if (!(y_frac > 0.0)) throw Error(ErrorCode::DomainError, "forward_rate: need y > 0");
  if (z_frac < 0.0) throw Error(ErrorCode::DomainError, "forward_rate: need z >= 0");
  return std::visit(Overloaded{
                        [&](const CRRA& c) { return std::pow(z_frac / y_frac, c.gamma) / c.beta; },
                        [&](const Linear& l) { return 1.0 / l.beta; },
                        [&](const CobbDouglasLog& c) { return (1.0 - c.beta) / c.beta * (z_frac / y_frac); },
                        [&](const Custom& c) { return c.forward_rate(y_frac, z_frac); },
                    },
                    u);
}

double EconomyOLG::G() const {
  const auto r = a.analytic_ratio();
  if (!r) throw Error(ErrorCode::InvalidSpec, "young endowment must be positive");
  return *r;
}

double EconomyOLG::w() const {
  if (b.is_zero()) return 0.0;
  const auto rb = b.analytic_ratio();
  if (!rb) return 0.0;
  const double ra = G();
  if (*rb < ra) return 0.0;
  if (*rb > ra) throw Error(ErrorCode::InvalidSpec, "old endowment outgrows the young endowment; w is infinite");
  return paths::path_ratio(b, a, std::max(longest_explicit(a), longest_explicit(b)));
}

void EconomyOLG::validate() const {
  olg::validate(utility);
  if (!a.strictly_positive()) throw Error(ErrorCode::InvalidSpec, "young endowment a_t must be > 0");
  (void)w();
}

double step_back_detrended(const EconomyOLG& e, std::size_t t, double p_next) {
  if (!std::isfinite(p_next) || p_next < 0.0) {
    throw Error(ErrorCode::DomainError, "step_back: next price must be finite and >= 0");
  }
  return solve_step(e.utility, next_period(e, t), p_next);
}

double step_back(const EconomyOLG& e, std::size_t t, double P_next) {
  const double p_next = P_next == 0.0 ? 0.0 : std::exp(std::log(P_next) - e.a.log_at(t + 1));
  const double p = step_back_detrended(e, t, p_next);
  return p == 0.0 ? 0.0 : std::exp(std::log(p) + e.a.log_at(t));
}

double PricePath::a(std::size_t t) const { return std::exp(log_a[t]); }
double PricePath::P(std::size_t t) const { return p[t] > 0.0 ? std::exp(log_a[t] + std::log(p[t])) : 0.0; }
double PricePath::D(std::size_t t) const { return d[t] > 0.0 ? std::exp(log_a[t] + std::log(d[t])) : 0.0; }
double PricePath::b(std::size_t t) const { return w[t] > 0.0 ? std::exp(log_a[t] + std::log(w[t])) : 0.0; }

double PricePath::yield(std::size_t t) const {
  if (p[t] > 0.0) return d[t] / p[t];
  return d[t] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

double PricePath::max_foc_residual(const EconomyOLG& e) const {
  double worst = 0.0;
  for (std::size_t t = 0; t + 1 < p.size(); ++t) {
    const NextPeriod n = next_period(e, t);
    const double s = n.G * (p[t + 1] + n.d);
    double rhs = 0.0;
    if (s > 0.0) rhs = std::min(mrs_ext(e.utility, 1.0 - p[t], n.G * (n.w + p[t + 1] + n.d)) * s, 1.0);
    worst = std::max(worst, std::abs(p[t] - rhs));
  }
  return worst;
}

PricePath solve_truncated(const EconomyOLG& e, std::size_t T, double terminal) {
  if (T < 1) throw Error(ErrorCode::DomainError, "solve_truncated: T must be >= 1");
  e.validate();
  PricePath path;
  path.log_a.resize(T + 1);
  path.p.assign(T + 1, 0.0);
  path.w.resize(T + 1);
  path.d.resize(T + 1);
  for (std::size_t t = 0; t <= T; ++t) {
    path.log_a[t] = e.a.log_at(t);
    path.w[t] = paths::path_ratio(e.b, e.a, t);
    path.d[t] = paths::path_ratio(e.D, e.a, t);
  }
  const double a_T = std::exp(path.log_a[T]);
  if (!std::isfinite(terminal) || terminal < 0.0 || (std::isfinite(a_T) && terminal > a_T * (1.0 + 1e-12))) {
    throw Error(ErrorCode::DomainError, "solve_truncated: terminal must lie in [0, a_T]");
  }
  path.terminal = terminal;
  path.p[T] = terminal == 0.0 ? 0.0 : std::min(1.0, std::exp(std::log(terminal) - path.log_a[T]));

  std::vector<NextPeriod> next(T);
  for (std::size_t t = T; t-- > 0;) {
    next[t] = next_period(e, t);
    path.p[t] = solve_step(e.utility, next[t], path.p[t + 1]);
  }

  path.R.resize(T);
  path.log_q.assign(T + 1, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    const NextPeriod& n = next[t];
    if (path.p[t] > 0.0) {
      path.R[t] = n.G * (path.p[t + 1] + n.d) / path.p[t];
    } else {
      path.R[t] = forward_rate(e.utility, 1.0, n.G * (n.w + path.p[t + 1] + n.d));
    }
    path.log_q[t + 1] = path.log_q[t] - std::log(path.R[t]);
  }
  return path;
}

EquilibriumResult solve_equilibrium(const EconomyOLG& e, std::size_t T, const SweepOptions& opts) {
  if (opts.n_terminals < 2) throw Error(ErrorCode::DomainError, "solve_equilibrium: need at least 2 terminals");
  if (T < 2) throw Error(ErrorCode::DomainError, "solve_equilibrium: T must be >= 2");
  EquilibriumResult out;
  const double a_T = std::exp(e.a.log_at(T));
  for (std::size_t k = 0; k < opts.n_terminals; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(opts.n_terminals - 1);
    if (std::isfinite(a_T)) {
      out.sweep.push_back(solve_truncated(e, T, frac * a_T));
    } else {
      // a_T itself overflows; impose the terminal directly in detrended form.
      PricePath pp = solve_truncated(e, T, 0.0);
      pp.p[T] = frac;
      for (std::size_t t = T; t-- > 0;) pp.p[t] = step_back_detrended(e, t, pp.p[t + 1]);
      for (std::size_t t = 0; t < T; ++t) {
        const NextPeriod n = next_period(e, t);
        pp.R[t] = pp.p[t] > 0.0 ? n.G * (pp.p[t + 1] + n.d) / pp.p[t]
                                : forward_rate(e.utility, 1.0, n.G * (n.w + pp.p[t + 1] + n.d));
        pp.log_q[t + 1] = pp.log_q[t] - std::log(pp.R[t]);
      }
      pp.terminal = std::numeric_limits<double>::infinity();
      out.sweep.push_back(std::move(pp));
    }
  }

  const std::size_t half = T / 2;
  for (std::size_t t = 0; t <= half; ++t) {
    double lo = out.sweep.front().p[t];
    double hi = lo;
    for (const auto& s : out.sweep) {
      lo = std::min(lo, s.p[t]);
      hi = std::max(hi, s.p[t]);
    }
    out.early_window_agreement = std::max(out.early_window_agreement, hi - lo);
  }
  if (out.early_window_agreement > opts.agree_tol) {
    out.diagnostics.push_back({"NoAgreement", "terminal sweep spread " + format_double(out.early_window_agreement) +
                                                  " over t <= " + std::to_string(half) + " exceeds " +
                                                  format_double(opts.agree_tol)});
  }

  out.path = out.sweep[(opts.n_terminals - 1) / 2];
  const PricePath& pp = out.path;
  bool vanishing = false;
  std::vector<double> yields;
  for (std::size_t t = 1; t <= half; ++t) {
    if (pp.p[t] == 0.0) vanishing = true;
    yields.push_back(pp.yield(t));
  }
  if (vanishing) {
    out.verdict.label = bubble::Label::Fundamental;
    out.verdict.notes = "price vanishes inside the window";
  } else {
    out.verdict = bubble::montrucchio_test(yields, opts.analytic_yield_ratio);
  }
  const std::vector<double> ones(half + 1, 1.0);
  out.verdict.relevance_liminf =
      bubble::relevance_statistic(std::span<const double>(pp.p).first(half + 1), ones);
  return out;
}

NecessityReport check_necessity(const EconomyOLG& e) {
  e.validate();
  const double G = e.G();
  const double R = forward_rate(e.utility, 1.0, G * e.w());
  double G_d = 0.0;
  if (!e.D.is_zero()) {
    const paths::GrowthEstimate est = paths::growth_rate(e.D);
    if (est.indeterminate) throw Error(ErrorCode::IndeterminateGrowth, "dividend growth rate is not identified");
    G_d = est.rate;
  }
  return classify_necessity(R, G_d, G);
}

}  // namespace bubblelab::olg
