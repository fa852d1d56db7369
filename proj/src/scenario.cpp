#include "bubblelab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "bubblelab/bewley.hpp"
#include "bubblelab/bubble.hpp"
#include "bubblelab/closed_forms.hpp"
#include "bubblelab/diamond.hpp"
#include "bubblelab/format.hpp"
#include "bubblelab/olg.hpp"
#include "bubblelab/pref_shock.hpp"

namespace bubblelab::scenario {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::Config, key + ": not a number: '" + text + "'");
  }
  if (trim(text.substr(used)) != "") throw Error(ErrorCode::Config, key + ": not a number: '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string tok; std::getline(is, tok, sep);) out.push_back(trim(tok));
  return out;
}

// Non-finite numbers become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json necessity_json(const NecessityReport& n) {
  return {{"R", num(n.R)}, {"G_d", num(n.G_d)}, {"G", num(n.G)}, {"holds", n.holds}, {"borderline", n.borderline}};
}

json verdict_json(const bubble::BubbleVerdict& v) {
  return {{"label", bubble::to_string(v.label)},
          {"tail_decay", num(v.tail_decay)},
          {"relevance", num(v.relevance_liminf)},
          {"yield_partial_sum", num(v.yield_partial_sum)},
          {"notes", v.notes}};
}

json diagnostics_json(const Diagnostics& diags) {
  json arr = json::array();
  for (const auto& d : diags) arr.push_back({{"code", d.code}, {"message", d.message}});
  return arr;
}

void note_necessity(const NecessityReport& n, Diagnostics& diags) {
  if (n.borderline) {
    diags.push_back({"Borderline", "an inequality of R < G_d < G holds within 1e-9"});
  } else if (!n.holds) {
    diags.push_back({"NecessityFails", "R = " + format_double(n.R) + ", G_d = " + format_double(n.G_d) +
                                           ", G = " + format_double(n.G)});
  }
}

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { row_strings(header); }
  void row(const std::vector<double>& values) {
    std::vector<std::string> s;
    s.reserve(values.size());
    for (double v : values) s.push_back(format_double(v));
    row_strings(s);
  }
  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  [[nodiscard]] std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double value_at(const paths::PathSpec& spec, std::size_t t) {
  try {
    return paths::eval_path(spec, t);
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

std::string olg_csv(const olg::EconomyOLG& e, const olg::PricePath& p) {
  Csv csv({"t", "a", "b", "D", "P", "p", "R", "q", "yield"});
  for (std::size_t t = 0; t <= p.horizon(); ++t) {
    csv.row({static_cast<double>(t), value_at(e.a, t), value_at(e.b, t), value_at(e.D, t), p.P(t), p.p[t],
             t < p.R.size() ? p.R[t] : kNaN, std::exp(p.log_q[t]), p.yield(t)});
  }
  return csv.str();
}

olg::UtilitySpec parse_utility(const std::string& text) {
  std::istringstream is(text);
  std::string family;
  is >> family;
  std::vector<double> args;
  for (std::string tok; is >> tok;) args.push_back(to_number("utility", tok));
  if (family == "crra" && args.size() == 2) return olg::CRRA{args[0], args[1]};
  if (family == "linear" && args.size() == 1) return olg::Linear{args[0]};
  if (family == "cobb_douglas_log" && args.size() == 1) return olg::CobbDouglasLog{args[0]};
  throw Error(ErrorCode::Config,
              "utility: expected 'crra BETA GAMMA', 'linear BETA' or 'cobb_douglas_log BETA', got '" + text + "'");
}

struct OlgRun {
  olg::EconomyOLG economy;
  std::optional<double> analytic_ratio;
  std::size_t T = 200;
  olg::SweepOptions opts;
};

std::optional<double> ratio_of(const paths::PathSpec& D, const paths::PathSpec& a) {
  const auto rd = D.analytic_ratio();
  const auto ra = a.analytic_ratio();
  if (!rd || !ra) return std::nullopt;
  return *rd / *ra;
}

// Shared OLG pipeline: sweep, verdict, necessity, identities.
void finish_olg(const OlgRun& run, Report& rep, json& solver, Diagnostics& diags,
                const std::function<double(std::size_t)>& oracle_p = {}) {
  olg::SweepOptions opts = run.opts;
  opts.analytic_yield_ratio = run.analytic_ratio;
  const olg::EquilibriumResult res = olg::solve_equilibrium(run.economy, run.T, opts);
  diags.insert(diags.end(), res.diagnostics.begin(), res.diagnostics.end());
  const NecessityReport nec = olg::check_necessity(run.economy);
  note_necessity(nec, diags);

  const olg::PricePath& p = res.path;
  solver["horizon"] = run.T;
  solver["terminals"] = opts.n_terminals;
  solver["early_window_agreement"] = num(res.early_window_agreement);
  solver["max_foc_residual"] = num(p.max_foc_residual(run.economy));
  solver["utility"] = olg::describe(run.economy.utility);
  if (oracle_p) {
    double worst = 0.0;
    for (std::size_t t = 0; t <= run.T / 2; ++t) {
      const double o = oracle_p(t);
      worst = std::max(worst, std::abs(p.p[t] - o) / o);
    }
    solver["oracle_max_rel_error"] = num(worst);
  }
  rep.json["necessity"] = necessity_json(nec);
  rep.json["verdict"] = verdict_json(res.verdict);
  rep.csv = olg_csv(run.economy, p);
}

olg::SweepOptions sweep_options(const Config& c, std::size_t default_terminals) {
  olg::SweepOptions o;
  o.n_terminals = c.integer("terminals", default_terminals);
  o.agree_tol = c.number("agree_tol", 1e-6);
  return o;
}

void run_textbook(const Config& c, Report& rep, json& solver, Diagnostics& diags) {
  OlgRun r;
  const double beta = c.number("beta");
  r.economy = {olg::CobbDouglasLog{beta}, c.path("a", "constant 1"), paths::PathSpec::zero(),
               c.path("D", "geometric 0.01 0.5")};
  r.T = c.integer("T", 200);
  r.opts = sweep_options(c, 3);
  r.analytic_ratio = ratio_of(r.economy.D, r.economy.a);
  finish_olg(r, rep, solver, diags, [&](std::size_t) { return closed_forms::textbook_price(beta, 1.0); });
}

void run_two_sector(const Config& c, Report& rep, json& solver, Diagnostics& diags) {
  closed_forms::TwoSectorParams tp{c.number("alpha"), c.number("beta"), c.number("G1"), c.number("G2")};
  const std::size_t T = c.integer("T", 200);
  const std::size_t terminals = c.integer("terminals", 3);
  if (!(tp.G1 > tp.G2)) {
    diags.push_back({"WrongRegime", "two_sector needs G1 > G2 (G1 = " + format_double(tp.G1) +
                                        ", G2 = " + format_double(tp.G2) + ")"});
    rep.json["verdict"] = {{"label", "WrongRegime"}, {"tail_decay", nullptr}, {"relevance", nullptr},
                           {"yield_partial_sum", nullptr}, {"notes", "premise G1 > G2 fails"}};
    rep.csv = Csv({"t", "a", "b", "D", "P", "p", "R", "q", "yield"}).str();
    return;
  }
  OlgRun r;
  r.economy = closed_forms::two_sector_economy(tp);
  r.T = T;
  r.opts.n_terminals = terminals;
  r.opts.agree_tol = c.number("agree_tol", 1e-6);
  r.analytic_ratio = closed_forms::two_sector_yield_ratio(tp);
  std::size_t first_interior = 0;
  while (first_interior <= T && !closed_forms::two_sector_equilibrium(tp, first_interior).interior) ++first_interior;
  solver["first_interior_t"] = first_interior;
  finish_olg(r, rep, solver, diags, [&](std::size_t) { return tp.beta; });
}

void run_ces(const Config& c, Report& rep, json& solver, Diagnostics&) {
  closed_forms::CesParams p;
  p.sigma = c.number("sigma");
  p.alpha = c.number("alpha");
  p.beta = c.number("beta");
  p.G_K = c.number("GK");
  p.G_L = c.number("GL");
  p.K0 = c.number("K0", 1.0);
  p.L0 = c.number("L0", 1.0);
  const std::size_t T = c.integer("T", 100);
  const closed_forms::CesVerdict v = closed_forms::ces_verdict(p);
  Csv csv({"t", "yield"});
  double sum = 0.0;
  for (std::size_t t = 0; t <= T; ++t) {
    const double y = closed_forms::ces_yield(p, t);
    if (t > 0) sum += y;
    csv.row({static_cast<double>(t), y});
  }
  rep.csv = csv.str();
  solver["yield_ratio"] = num(v.yield_ratio);
  solver["yield0"] = num(v.yield0);
  rep.json["necessity"] = nullptr;
  rep.json["verdict"] = {{"label", closed_forms::to_string(v.label)}, {"tail_decay", num(v.yield_ratio)},
                         {"relevance", nullptr}, {"yield_partial_sum", num(sum)},
                         {"notes", "sign of (sigma - 1)(G_K - G_L)"}};
}

void run_wilson(const Config& c, Report& rep, json& solver, Diagnostics& diags) {
  const double a = c.number("a", 1.0);
  const double G = c.number("G");
  const double D = c.number("D");
  const double Gd = c.number("Gd");
  OlgRun r;
  r.economy = {olg::Linear{c.number("beta")}, paths::PathSpec::geometric(a, G), paths::PathSpec::zero(),
               paths::PathSpec::geometric(D, Gd)};
  r.T = c.integer("T", 200);
  r.opts = sweep_options(c, 5);
  r.analytic_ratio = Gd / G;
  finish_olg(r, rep, solver, diags, [](std::size_t) { return 1.0; });
}

void run_crra(const Config& c, Report& rep, json& solver, Diagnostics& diags) {
  const double beta = c.number("beta");
  const double gamma = c.number("gamma");
  const double G = c.number("G");
  const double w = c.number("w");
  const double D = c.number("D");
  const double Gd = c.number("Gd", 1.0);
  OlgRun r;
  r.economy = {olg::CRRA{beta, gamma}, paths::PathSpec::geometric(1.0, G), paths::PathSpec::geometric(w, G),
               paths::PathSpec::geometric(D, Gd)};
  r.T = c.integer("T", 400);
  r.opts = sweep_options(c, 3);
  r.analytic_ratio = Gd / G;
  try {
    const closed_forms::SteadyStateReport ss = closed_forms::crra_steady_state(beta, gamma, G, w);
    json s = {{"xi1_star", num(ss.xi1_star)}, {"kappa", num(ss.kappa)}, {"lambda1", num(ss.lambda1)},
              {"lambda2", num(ss.lambda2)}, {"determinate", ss.determinate}, {"singular", ss.singular}};
    if (!ss.singular && Gd == 1.0) {
      const auto ev = closed_forms::crra_numeric_eigenvalues({beta, gamma, G, w});
      s["numeric_lambda1"] = num(ev.first);
      s["numeric_lambda2"] = num(ev.second);
    }
    solver["steady_state"] = s;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoBubblySteadyState) throw;
    diags.push_back({"NoBubblySteadyState", e.what()});
  }
  finish_olg(r, rep, solver, diags);
}

void run_olg_generic(const Config& c, Report& rep, json& solver, Diagnostics& diags) {
  OlgRun r;
  r.economy = {parse_utility(c.str("utility")), c.path("a", "constant 1"), c.path("b", "zero"),
               c.path("D", "zero")};
  r.T = c.integer("T", 200);
  r.opts = sweep_options(c, 3);
  finish_olg(r, rep, solver, diags);
}

void run_diamond(const Config& c, Report& rep, json& solver, Diagnostics& diags) {
  diamond::DiamondEconomy e;
  e.production = diamond::CobbDouglas{c.number("A", 1.0), c.number("alpha"), c.number("delta", 1.0)};
  e.beta = c.number("beta");
  e.D = c.path("D", "zero");
  e.K0 = c.number("K0", 0.0);
  const std::size_t T = c.integer("T", 200);
  diamond::ShootOptions opts;
  opts.lookahead = c.integer("lookahead", opts.lookahead);
  const NecessityReport nec = diamond::check_necessity(e);
  const diamond::ShootResult res = diamond::shoot(e, T, opts);
  diags.insert(diags.end(), res.diagnostics.begin(), res.diagnostics.end());
  note_necessity(nec, diags);
  solver["horizon"] = T;
  solver["P0"] = num(res.P0);
  solver["K_star"] = num(diamond::steady_capital(e));
  solver["segments"] = res.segments;
  solver["max_join_gap"] = num(res.max_join_gap);
  try {
    const diamond::BubblySteadyState ss = diamond::bubbly_steady_state(e);
    solver["bubbly_steady_state"] = {{"K", num(ss.K)}, {"P", num(ss.P)}};
  } catch (const Error& err) {
    if (err.code() != ErrorCode::NoBubblySteadyState) throw;
    solver["bubbly_steady_state"] = nullptr;
  }
  rep.json["necessity"] = necessity_json(nec);
  rep.json["verdict"] = verdict_json(res.verdict);
  Csv csv({"t", "K", "P", "R", "D", "yield"});
  const auto& p = res.path;
  for (std::size_t t = 0; t < p.P.size(); ++t) {
    csv.row({static_cast<double>(t), p.K[t], p.P[t], t < p.R.size() ? p.R[t] : kNaN, p.D[t],
             p.P[t] > 0.0 ? p.D[t] / p.P[t] : kNaN});
  }
  rep.csv = csv.str();
}

numerics::SmallMatrix parse_matrix(const Config& c, const std::string& key) {
  std::vector<double> entries;
  std::size_t rows = 0;
  for (const std::string& row : split(c.str(key), ';')) {
    for (const std::string& cell : split(row, ',')) entries.push_back(to_number(key, cell));
    ++rows;
  }
  if (rows == 0 || entries.size() != rows * rows) throw Error(ErrorCode::Config, key + ": expected a square matrix");
  return numerics::SmallMatrix(rows, std::move(entries));
}

void run_bewley_invest(const Config& c, Report& rep, json& solver, Diagnostics& diags) {
  bewley::MarkovSpec spec{c.list("z"), parse_matrix(c, "Pi")};
  const double tau = c.number("tau", 0.0);
  spec.Pi = bewley::persistence_transform(spec.Pi, tau);
  const double beta = c.number("beta");
  const paths::PathSpec D = c.path("D", "zero");
  std::vector<double> v0 = c.has("v0") ? c.list("v0") : std::vector<double>(spec.z.size(), 1.0);
  const std::size_t T = c.integer("T", 300);
  const double Gd = paths::growth_rate(D).rate;
  const NecessityReport nec = Gd > 0.0 ? bewley::check_necessity_invest(spec, beta, Gd)
                                       : classify_necessity(0.0, 0.0,
                                                            numerics::spectral_radius(bewley::growth_matrix(spec, beta)).rho);
  const bewley::InvestPath res = bewley::simulate_invest_equilibrium(spec, beta, v0, D, T);
  diags.insert(diags.end(), res.diagnostics.begin(), res.diagnostics.end());
  note_necessity(nec, diags);
  solver["horizon"] = T;
  solver["reached"] = res.reached();
  solver["rho"] = num(res.rho);
  solver["tau"] = num(tau);
  rep.json["necessity"] = necessity_json(nec);
  rep.json["verdict"] = verdict_json(res.verdict);
  std::vector<std::string> header{"t"};
  for (std::size_t n = 0; n < spec.z.size(); ++n) header.push_back("W" + std::to_string(n));
  for (const char* h : {"P", "R", "D", "yield"}) header.emplace_back(h);
  Csv csv(header);
  for (std::size_t t = 0; t < res.P.size(); ++t) {
    std::vector<double> row{static_cast<double>(t)};
    row.insert(row.end(), res.W[t].begin(), res.W[t].end());
    row.push_back(res.P[t]);
    row.push_back(t < res.R.size() ? res.R[t] : kNaN);
    row.push_back(res.D[t]);
    row.push_back(res.D[t] / res.P[t]);
    csv.row(row);
  }
  rep.csv = csv.str();
}

pref_shock::Distribution parse_distribution(const Config& c) {
  std::vector<pref_shock::Atom> atoms;
  for (const std::string& cell : split(c.str("F"), ',')) {
    const auto parts = split(cell, ':');
    if (parts.size() != 2) throw Error(ErrorCode::Config, "F: expected 'theta:prob,...'");
    atoms.push_back({to_number("F", parts[0]), to_number("F", parts[1])});
  }
  return pref_shock::Distribution(std::move(atoms));
}

void run_bewley_pref(const Config& c, Report& rep, json& solver, Diagnostics& diags) {
  pref_shock::PrefShockEconomy e;
  e.beta = c.number("beta");
  e.gamma = c.number("gamma");
  e.F = parse_distribution(c);
  e.A = c.path("A", "constant 1");
  e.D = c.path("D", "zero");
  e.delta = c.number("delta", 0.0);
  const std::size_t T = c.integer("T", 200);
  pref_shock::PrefOptions opts;
  opts.n_terminals = c.integer("terminals", 3);
  opts.agree_tol = c.number("agree_tol", 1e-6);
  const NecessityReport nec = pref_shock::check_necessity_pref(e);
  const pref_shock::PrefResult res = pref_shock::solve_pref_equilibrium(e, T, opts);
  diags.insert(diags.end(), res.diagnostics.begin(), res.diagnostics.end());
  note_necessity(nec, diags);
  const auto& p = res.path;
  solver["horizon"] = T;
  solver["terminals"] = opts.n_terminals;
  solver["early_window_agreement"] = num(res.early_window_agreement);
  solver["valid_from"] = p.valid_from;
  solver["price_bound_constant"] = num(pref_shock::price_bound_constant(e));
  solver["max_pricing_residual"] = num(p.max_pricing_residual);
  if (p.valid_from == 0) {
    double gap = std::numeric_limits<double>::infinity();
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t <= T; ++t) {
      gap = std::min(gap, p.theta_bar[t] - e.F.theta_L());
      ratio = std::min(ratio, p.price[t]);
    }
    solver["min_cutoff_gap"] = num(gap);
    solver["min_detrended_price"] = num(ratio);
    solver["market_clearing_residual"] = num(pref_shock::market_clearing_residual(e, p));
    rep.json["verdict"] = verdict_json(res.verdict);
  } else {
    rep.json["verdict"] = {{"label", "Indeterminate"}, {"tail_decay", nullptr}, {"relevance", nullptr},
                           {"yield_partial_sum", nullptr}, {"notes", "backward recursion failed"}};
  }
  rep.json["necessity"] = necessity_json(nec);
  Csv csv({"t", "A", "D", "theta_bar", "R", "P", "w", "yield"});
  for (std::size_t t = 0; t <= T; ++t) {
    const double scale = std::exp(p.log_scale[t]);
    csv.row({static_cast<double>(t), paths::eval_path(e.A, t), paths::eval_path(e.D, t), p.theta_bar[t],
             t < p.R.size() ? p.R[t] : kNaN, p.price[t] * scale, p.wealth[t] * scale,
             p.dividend[t] / p.price[t]});
  }
  rep.csv = csv.str();
}

using Runner = void (*)(const Config&, Report&, json&, Diagnostics&);

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table{
      {"textbook", run_textbook},       {"two_sector", run_two_sector},       {"ces", run_ces},
      {"wilson", run_wilson},           {"crra", run_crra},                   {"olg_generic", run_olg_generic},
      {"diamond", run_diamond},         {"bewley_invest", run_bewley_invest}, {"bewley_pref", run_bewley_pref},
  };
  return table;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream is(text);
  std::size_t line_no = 0;
  for (std::string line; std::getline(is, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": empty key");
    if (!c.entries_.emplace(key, value).second) {
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return c;
}

Config Config::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::Config, "cannot read " + file.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string Config::str(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(ErrorCode::Config, "missing key '" + key + "'");
  used_.insert(key);
  return it->second;
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  return has(key) ? str(key) : fallback;
}

double Config::number(const std::string& key) const { return to_number(key, str(key)); }

double Config::number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

std::size_t Config::integer(const std::string& key, std::size_t fallback) const {
  if (!has(key)) return fallback;
  const double v = number(key);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) throw Error(ErrorCode::Config, key + ": expected a count");
  return static_cast<std::size_t>(v);
}

std::vector<double> Config::list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& cell : split(str(key), ',')) out.push_back(to_number(key, cell));
  return out;
}

paths::PathSpec Config::path(const std::string& key, const std::string& fallback) const {
  try {
    return paths::PathSpec::parse(str(key, fallback));
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, key + ": " + e.what());
  }
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = value; }

void Config::reject_unused() const {
  for (const auto& [key, value] : entries_) {
    if (!used_.count(key)) throw Error(ErrorCode::Config, "unknown key '" + key + "'");
  }
}

int exit_code_for(const Diagnostics& diags) {
  static const std::set<std::string> failing{"NoAgreement",      "NoRoot",         "RegimeViolation",
                                             "NoEquilibriumFound", "NecessityFails", "WrongRegime",
                                             "NoBubblySteadyState"};
  for (const auto& d : diags) {
    if (failing.count(d.code)) return 2;
  }
  return 0;
}

Report run(const Config& config) {
  Report rep;
  rep.model = config.str("model");
  rep.name = config.str("name", rep.model);
  const auto it = runners().find(rep.model);
  if (it == runners().end()) throw Error(ErrorCode::Config, "unknown model '" + rep.model + "'");

  json solver = json::object();
  Diagnostics diags;
  rep.json = {{"schema", 1}, {"name", rep.name}, {"model", rep.model}, {"necessity", nullptr}, {"verdict", nullptr}};
  it->second(config, rep, solver, diags);
  config.reject_unused();

  json params = json::object();
  for (const auto& [k, v] : config.entries()) params[k] = v;
  rep.json["parameters"] = params;
  rep.json["solver"] = solver;
  rep.json["diagnostics"] = diagnostics_json(diags);
  rep.exit_code = exit_code_for(diags);
  return rep;
}

void apply_parameter(Config& config, const std::string& param, double value) {
  const auto dot = param.find('.');
  if (dot == std::string::npos) {
    config.set(param, format_double(value));
    return;
  }
  const std::string key = param.substr(0, dot);
  const std::string field = param.substr(dot + 1);
  const paths::PathSpec spec = config.path(key, "zero");
  paths::PathSpec edited;
  if (const auto* g = std::get_if<paths::Geometric>(&spec.kind())) {
    paths::Geometric copy = *g;
    if (field == "level") copy.level = value;
    else if (field == "ratio") copy.ratio = value;
    else throw Error(ErrorCode::Config, param + ": geometric paths have fields level and ratio");
    edited = copy;
  } else {
    paths::Explicit copy = std::get<paths::Explicit>(spec.kind());
    if (field == "tail") copy.tail_ratio = value;
    else throw Error(ErrorCode::Config, param + ": explicit paths have field tail");
    edited = copy;
  }
  config.set(key, edited.to_string());
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  for (const std::string& cell : split(text, ',')) grid.push_back(to_number("grid", cell));
  if (grid.empty()) throw Error(ErrorCode::Config, "grid: no values");
  return grid;
}

std::string sweep(const Config& config, const std::string& param, const std::vector<double>& grid) {
  Csv csv({"param", "value", "status", "exit", "R", "G_d", "G", "holds", "borderline", "label", "tail_decay",
           "relevance", "diagnostics"});
  for (double v : grid) {
    Config c = config;
    std::vector<std::string> row{param, format_double(v)};
    try {
      apply_parameter(c, param, v);
      const Report rep = run(c);
      const json& nec = rep.json.at("necessity");
      const json& ver = rep.json.at("verdict");
      const auto cell = [](const json& j, const char* k) {
        if (j.is_null() || !j.contains(k) || j[k].is_null()) return std::string("nan");
        if (j[k].is_boolean()) return std::string(j[k].get<bool>() ? "true" : "false");
        if (j[k].is_number()) return format_double(j[k].get<double>());
        return j[k].get<std::string>();
      };
      std::string codes;
      for (const auto& d : rep.json["diagnostics"]) codes += (codes.empty() ? "" : ";") + d["code"].get<std::string>();
      row.insert(row.end(), {"ok", std::to_string(rep.exit_code), cell(nec, "R"), cell(nec, "G_d"), cell(nec, "G"),
                             cell(nec, "holds"), cell(nec, "borderline"), cell(ver, "label"),
                             cell(ver, "tail_decay"), cell(ver, "relevance"), codes});
    } catch (const Error& e) {
      row.insert(row.end(), {"failed", "1", "nan", "nan", "nan", "nan", "nan", "nan", "nan", "nan",
                             std::string(to_string(e.code()))});
    }
    csv.row_strings(row);
  }
  return csv.str();
}

}  // namespace bubblelab::scenario
