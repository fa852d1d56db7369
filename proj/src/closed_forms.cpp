#include "bubblelab/closed_forms.hpp"

#include <cmath>
#include <limits>

#include "bubblelab/numerics.hpp"

namespace bubblelab::closed_forms {

double textbook_price(double beta, double a_t) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorCode::DomainError, "textbook_price: beta in (0, 1)");
  if (!(a_t > 0.0)) throw Error(ErrorCode::DomainError, "textbook_price: a_t > 0");
  return beta * a_t;
}

namespace {

void check(const TwoSectorParams& p) {
  if (!(p.alpha > 0.0 && p.alpha < 1.0) || !(p.beta > 0.0 && p.beta < 1.0) || !(p.G1 > 0.0) || !(p.G2 > 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "two_sector: need alpha, beta in (0, 1) and G1, G2 > 0");
  }
  if (!(p.G1 > p.G2)) {
    throw Error(ErrorCode::WrongRegime, "two_sector: the interior labor allocation needs G1 > G2");
  }
}

double rent_level(const TwoSectorParams& p) {
  return (1.0 - p.alpha) * std::pow(p.alpha, p.alpha / (1.0 - p.alpha));
}

double rent_ratio(const TwoSectorParams& p) {
  return p.G2 * std::pow(p.G2 / p.G1, p.alpha / (1.0 - p.alpha));
}

}  // namespace

TwoSectorPoint two_sector_equilibrium(const TwoSectorParams& p, std::size_t t) {
  check(p);
  const double tt = static_cast<double>(t);
  TwoSectorPoint s;
  s.w = std::pow(p.G1, tt);
  s.P = p.beta * s.w;
  s.H2 = std::pow(p.alpha, 1.0 / (1.0 - p.alpha)) * std::pow(p.G2 / p.G1, tt / (1.0 - p.alpha));
  s.r = (1.0 - p.alpha) * std::pow(p.G2, tt) * std::pow(s.H2, p.alpha);
  s.yield = rent_level(p) / p.beta * std::pow(p.G2 / p.G1, tt / (1.0 - p.alpha));
  s.interior = s.H2 < 1.0;
  return s;
}

double two_sector_yield_ratio(const TwoSectorParams& p) {
  check(p);
  return std::pow(p.G2 / p.G1, 1.0 / (1.0 - p.alpha));
}

olg::EconomyOLG two_sector_economy(const TwoSectorParams& p) {
  check(p);
  return {olg::CobbDouglasLog{p.beta}, paths::PathSpec::geometric(1.0, p.G1), paths::PathSpec::zero(),
          paths::PathSpec::geometric(rent_level(p), rent_ratio(p))};
}

std::string to_string(CesLabel label) {
  switch (label) {
    case CesLabel::Bubbly: return "Bubbly";
    case CesLabel::KnifeEdge: return "Knife-edge";
    case CesLabel::Counterfactual: return "Counterfactual-divergence";
  }
  return "Knife-edge";
}

CesVerdict ces_verdict(const CesParams& p) {
  if (!(p.sigma > 0.0) || !(p.alpha > 0.0 && p.alpha < 1.0) || !(p.beta > 0.0) || !(p.G_K > 0.0) ||
      !(p.G_L > 0.0) || !(p.K0 > 0.0) || !(p.L0 > 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "ces: parameters out of range");
  }
  CesVerdict v;
  v.yield0 = ces_yield(p, 0);
  v.yield_ratio = std::pow(p.G_K / p.G_L, 1.0 - 1.0 / p.sigma);
  const double sign = (p.sigma - 1.0) * (p.G_K - p.G_L);
  if (std::abs(p.sigma - 1.0) <= 1e-12 || std::abs(p.G_K - p.G_L) <= 1e-12) {
    v.label = CesLabel::KnifeEdge;
  } else {
    v.label = sign < 0.0 ? CesLabel::Bubbly : CesLabel::Counterfactual;
  }
  return v;
}

double ces_yield(const CesParams& p, std::size_t t) {
  const double k = std::pow(p.G_K / p.G_L, static_cast<double>(t)) * (p.K0 / p.L0);
  return p.alpha / (p.beta * (1.0 - p.alpha)) * std::pow(k, 1.0 - 1.0 / p.sigma);
}

double wilson_price(double a, double G, std::size_t t) { return a * std::pow(G, static_cast<double>(t)); }

double wilson_rate(double a, double G, double D, double G_d, std::size_t t) {
  const double tt = static_cast<double>(t);
  return G + D * G_d * std::pow(G_d / G, tt) / a;
}

SteadyStateReport crra_steady_state(double beta, double gamma, double G, double w) {
  if (!(beta > 0.0) || !(gamma > 0.0) || !(G > 0.0) || !(w >= 0.0)) {
    throw Error(ErrorCode::DomainError, "crra_steady_state: parameters out of range");
  }
  SteadyStateReport r;
  r.kappa = std::pow(beta * std::pow(G, 1.0 - gamma), 1.0 / gamma);
  if (!(r.kappa > w)) {
    throw Error(ErrorCode::NoBubblySteadyState, "kappa = (beta G^{1-gamma})^{1/gamma} must exceed w");
  }
  const double xi = (r.kappa - w) / (1.0 + r.kappa);
  r.xi1_star = xi;
  const double den = 1.0 - gamma * xi / (w + xi);
  r.singular = std::abs(den) < 1e-12;
  r.lambda1 = r.singular ? std::numeric_limits<double>::infinity() : (1.0 + gamma * xi / (1.0 - xi)) / den;
  r.lambda2 = 1.0 / G;
  r.determinate = 1.0 / gamma > 0.5 * ((r.kappa - w) / r.kappa) * ((1.0 - r.kappa) / (1.0 + w));
  return r;
}

std::pair<double, double> crra_implicit_residual(const CrraParams& c, std::pair<double, double> xi,
                                                 std::pair<double, double> eta) {
  const auto [xi1, xi2] = xi;
  const auto [eta1, eta2] = eta;
  const double total = c.w + eta1 + eta2;
  if (!(xi1 < 1.0) || !(total > 0.0)) {
    throw Error(ErrorCode::DomainError, "crra_implicit_residual: need xi1 < 1 and w + eta1 + eta2 > 0");
  }
  const double h1 =
      c.beta * std::pow(c.G, 1.0 - c.gamma) * std::pow(total / (1.0 - xi1), -c.gamma) * (eta1 + eta2) - xi1;
  const double h2 = c.G * eta2 - xi2;
  return {h1, h2};
}

std::pair<double, double> crra_explicit_map(const CrraParams& c, std::pair<double, double> xi) {
  const SteadyStateReport ss = crra_steady_state(c.beta, c.gamma, c.G, c.w);
  const double eta2 = xi.second / c.G;
  auto h1 = [&](double eta1) { return crra_implicit_residual(c, xi, {eta1, eta2}).first; };
  const double star = ss.xi1_star;
  const double half_width = 0.5 * std::min(star, 1.0 - star);
  const double eta1 = numerics::bisect_root(h1, {star - half_width, star + half_width, 1e-16});
  return {eta1, eta2};
}

std::pair<double, double> crra_numeric_eigenvalues(const CrraParams& c) {
  const SteadyStateReport ss = crra_steady_state(c.beta, c.gamma, c.G, c.w);
  const std::vector<double> point{ss.xi1_star, 0.0};
  const numerics::VectorMap h = [&](std::span<const double> x) {
    const auto [e1, e2] = crra_explicit_map(c, {x[0], x[1]});
    return std::vector<double>{e1, e2};
  };
  return numerics::eigenvalues_2x2(numerics::jacobian_fd(h, point));
}

}  // namespace bubblelab::closed_forms
