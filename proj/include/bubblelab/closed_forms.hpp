#pragma once

#include <string>
#include <utility>

#include "bubblelab/error.hpp"
#include "bubblelab/olg.hpp"

namespace bubblelab::closed_forms {

/// P_t = beta a_t under log utility with no old-age endowment.
double textbook_price(double beta, double a_t);

struct TwoSectorParams {
  double alpha = 0.5;
  double beta = 0.5;
  double G1 = 1.05;
  double G2 = 1.0;
};

struct TwoSectorPoint {
  double P = 0.0;      // land price
  double r = 0.0;      // land rent
  double w = 0.0;      // wage
  double H2 = 0.0;     // labor in the land sector
  double yield = 0.0;  // r_t / P_t
  bool interior = true;  // H2 < 1
};

TwoSectorPoint two_sector_equilibrium(const TwoSectorParams& p, std::size_t t);

/// (G2/G1)^{1/(1-alpha)}
double two_sector_yield_ratio(const TwoSectorParams& p);

/// Endowment economy with a_t = G1^t, b = 0 and D_t equal to the land rent.
olg::EconomyOLG two_sector_economy(const TwoSectorParams& p);

struct CesParams {
  double sigma = 0.5;
  double alpha = 0.3;
  double beta = 0.5;
  double G_K = 1.05;
  double G_L = 1.0;
  double K0 = 1.0;
  double L0 = 1.0;
};

enum class CesLabel { Bubbly, KnifeEdge, Counterfactual };

std::string to_string(CesLabel label);

struct CesVerdict {
  CesLabel label = CesLabel::KnifeEdge;
  double yield0 = 0.0;       // price-dividend inverse at t = 0
  double yield_ratio = 1.0;  // (G_K/G_L)^{1 - 1/sigma}
};

CesVerdict ces_verdict(const CesParams& p);
double ces_yield(const CesParams& p, std::size_t t);

double wilson_price(double a, double G, std::size_t t);
/// R_t = (a G^{t+1} + D G_d^{t+1}) / (a G^t)
double wilson_rate(double a, double G, double D, double G_d, std::size_t t);

struct SteadyStateReport {
  double xi1_star = 0.0;
  double kappa = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  bool determinate = false;
  bool singular = false;
};

SteadyStateReport crra_steady_state(double beta, double gamma, double G, double w);

struct CrraParams {
  double beta = 0.5;
  double gamma = 1.0;
  double G = 1.05;
  double w = 0.2;
};

/// Implicit system H(xi, eta) = 0 linking the detrended state xi_t = (p_t, d_t)
/// to eta = xi_{t+1}, for constant dividends.
std::pair<double, double> crra_implicit_residual(const CrraParams& c, std::pair<double, double> xi,
                                                 std::pair<double, double> eta);

/// eta = h(xi), solved numerically near the steady state.
std::pair<double, double> crra_explicit_map(const CrraParams& c, std::pair<double, double> xi);

/// Eigenvalues of the finite-difference Jacobian of h at (xi1*, 0).
std::pair<double, double> crra_numeric_eigenvalues(const CrraParams& c);

}  // namespace bubblelab::closed_forms
