#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bubblelab/bewley.hpp"
#include "bubblelab/bubble.hpp"
#include "bubblelab/closed_forms.hpp"
#include "bubblelab/diamond.hpp"
#include "bubblelab/olg.hpp"
#include "bubblelab/pref_shock.hpp"
#include "bubblelab/scenario.hpp"

namespace py = pybind11;
using namespace bubblelab;

namespace {

py::dict necessity_dict(const NecessityReport& n) {
  py::dict d;
  d["R"] = n.R;
  d["G_d"] = n.G_d;
  d["G"] = n.G;
  d["holds"] = n.holds;
  d["borderline"] = n.borderline;
  return d;
}

py::dict verdict_dict(const bubble::BubbleVerdict& v) {
  py::dict d;
  d["label"] = bubble::to_string(v.label);
  d["tail_decay"] = v.tail_decay;
  d["yield_partial_sum"] = v.yield_partial_sum;
  d["relevance"] = v.relevance_liminf;
  d["notes"] = v.notes;
  return d;
}

py::list diagnostics_list(const Diagnostics& diags) {
  py::list out;
  for (const auto& d : diags) out.append(py::make_tuple(d.code, d.message));
  return out;
}

olg::UtilitySpec make_utility(const std::string& kind, double beta, double gamma) {
  if (kind == "crra") return olg::CRRA{beta, gamma};
  if (kind == "linear") return olg::Linear{beta};
  if (kind == "cobb_douglas_log") return olg::CobbDouglasLog{beta};
  throw Error(ErrorCode::InvalidSpec, "unknown utility '" + kind + "'");
}

olg::EconomyOLG make_economy(const std::string& utility, double beta, double gamma, const std::string& a,
                             const std::string& b, const std::string& D) {
  olg::EconomyOLG e{make_utility(utility, beta, gamma), paths::PathSpec::parse(a), paths::PathSpec::parse(b),
                    paths::PathSpec::parse(D)};
  e.validate();
  return e;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rational bubble toolkit";

  static py::exception<Error> error(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("montrucchio_test", [](const std::vector<double>& yields, std::optional<double> ratio) {
    return verdict_dict(bubble::montrucchio_test(yields, ratio));
  }, py::arg("yields"), py::arg("analytic_ratio") = py::none());

  m.def("olg_necessity", [](const std::string& utility, double beta, double gamma, const std::string& a,
                            const std::string& b, const std::string& D) {
    return necessity_dict(olg::check_necessity(make_economy(utility, beta, gamma, a, b, D)));
  }, py::arg("utility"), py::arg("beta"), py::arg("gamma") = 1.0, py::arg("a") = "constant 1",
     py::arg("b") = "zero", py::arg("D") = "zero");

  m.def("solve_olg", [](const std::string& utility, double beta, double gamma, const std::string& a,
                        const std::string& b, const std::string& D, std::size_t T, std::size_t terminals) {
    const olg::EconomyOLG e = make_economy(utility, beta, gamma, a, b, D);
    olg::SweepOptions o;
    o.n_terminals = terminals;
    const olg::EquilibriumResult r = olg::solve_equilibrium(e, T, o);
    std::vector<double> P, yields;
    for (std::size_t t = 0; t <= r.path.horizon(); ++t) P.push_back(r.path.P(t));
    for (std::size_t t = 1; t <= r.path.horizon(); ++t) yields.push_back(r.path.yield(t));
    py::dict d;
    d["P"] = P;
    d["p"] = r.path.p;
    d["R"] = r.path.R;
    d["yield"] = yields;
    d["early_window_agreement"] = r.early_window_agreement;
    d["verdict"] = verdict_dict(r.verdict);
    d["diagnostics"] = diagnostics_list(r.diagnostics);
    return d;
  }, py::arg("utility"), py::arg("beta"), py::arg("gamma") = 1.0, py::arg("a") = "constant 1",
     py::arg("b") = "zero", py::arg("D") = "zero", py::arg("T") = 200, py::arg("terminals") = 3);

  m.def("textbook_price", &closed_forms::textbook_price, py::arg("beta"), py::arg("a_t"));
  m.def("ces_verdict", [](double sigma, double G_K, double G_L) {
    closed_forms::CesParams p;
    p.sigma = sigma;
    p.G_K = G_K;
    p.G_L = G_L;
    return closed_forms::to_string(closed_forms::ces_verdict(p).label);
  }, py::arg("sigma"), py::arg("G_K"), py::arg("G_L"));
  m.def("crra_steady_state", [](double beta, double gamma, double G, double w) {
    const auto s = closed_forms::crra_steady_state(beta, gamma, G, w);
    py::dict d;
    d["xi1_star"] = s.xi1_star;
    d["kappa"] = s.kappa;
    d["lambda1"] = s.lambda1;
    d["lambda2"] = s.lambda2;
    d["determinate"] = s.determinate;
    d["singular"] = s.singular;
    return d;
  }, py::arg("beta"), py::arg("gamma"), py::arg("G"), py::arg("w"));

  m.def("diamond_shoot", [](double A, double alpha, double delta, double beta, const std::string& D, std::size_t T) {
    diamond::DiamondEconomy e;
    e.production = diamond::CobbDouglas{A, alpha, delta};
    e.beta = beta;
    e.D = paths::PathSpec::parse(D);
    const diamond::ShootResult r = diamond::shoot(e, T);
    py::dict d;
    d["P0"] = r.P0;
    d["K"] = r.path.K;
    d["P"] = r.path.P;
    d["necessity"] = necessity_dict(diamond::check_necessity(e));
    d["verdict"] = verdict_dict(r.verdict);
    d["diagnostics"] = diagnostics_list(r.diagnostics);
    return d;
  }, py::arg("A") = 1.0, py::arg("alpha") = 0.3, py::arg("delta") = 1.0, py::arg("beta") = 0.5,
     py::arg("D") = "zero", py::arg("T") = 200);

  m.def("spectral_radius", [](const std::vector<std::vector<double>>& rows) {
    std::vector<double> flat;
    for (const auto& r : rows) {
      if (r.size() != rows.size()) throw Error(ErrorCode::LengthMismatch, "matrix must be square");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    const auto s = numerics::spectral_radius(numerics::SmallMatrix(rows.size(), flat));
    return py::make_tuple(s.rho, s.left_vector);
  }, py::arg("matrix"));

  m.def("bewley_invest", [](const std::vector<double>& z, const std::vector<std::vector<double>>& Pi, double beta,
                            const std::vector<double>& v0, const std::string& D, std::size_t T) {
    std::vector<double> flat;
    for (const auto& r : Pi) flat.insert(flat.end(), r.begin(), r.end());
    const bewley::MarkovSpec spec{z, numerics::SmallMatrix(Pi.size(), flat)};
    spec.validate();
    const bewley::InvestPath p = bewley::simulate_invest_equilibrium(spec, beta, v0, paths::PathSpec::parse(D), T);
    py::dict d;
    d["rho"] = p.rho;
    d["P"] = p.P;
    d["R"] = p.R;
    d["verdict"] = verdict_dict(p.verdict);
    d["diagnostics"] = diagnostics_list(p.diagnostics);
    return d;
  }, py::arg("z"), py::arg("Pi"), py::arg("beta"), py::arg("v0"), py::arg("D") = "zero", py::arg("T") = 300);

  m.def("liquidity_premium", [](const std::vector<std::pair<double, double>>& atoms, double theta_bar) {
    std::vector<pref_shock::Atom> a;
    for (const auto& [th, p] : atoms) a.push_back({th, p});
    return pref_shock::liquidity_premium(pref_shock::Distribution(a), theta_bar);
  }, py::arg("atoms"), py::arg("theta_bar"));
  m.def("savings_wedge", [](const std::vector<std::pair<double, double>>& atoms, double theta_bar, double gamma) {
    std::vector<pref_shock::Atom> a;
    for (const auto& [th, p] : atoms) a.push_back({th, p});
    return pref_shock::savings_wedge(pref_shock::Distribution(a), theta_bar, gamma);
  }, py::arg("atoms"), py::arg("theta_bar"), py::arg("gamma") = 1.0);

  m.def("run_scenario", [](const std::string& text) {
    const scenario::Report r = scenario::run(scenario::Config::parse(text));
    return py::make_tuple(r.csv, r.json.dump(2), r.exit_code);
  }, py::arg("config_text"), "Returns (csv, json, exit_code) for a scenario given as text.");
}
