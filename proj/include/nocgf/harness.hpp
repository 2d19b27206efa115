#pragma once

// Experiment configuration and orchestration. Tables are returned as CSV
// text; a single '#' comment line carries the version and timestamp.

#include <nlohmann/json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "noise.hpp"
#include "sensitivity.hpp"
#include "spectral.hpp"

namespace nocgf {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;

struct NoiseConfig {
  double power = 0.001;
  double sigma = 0.1;
  double tau_f_1q = 0.3;
  double tau_f_2q = 0.1;
  int realizations = 10;
  std::uint64_t seed = 20240101;
  double f_clock_hz = 1e9;
  bool operator==(const NoiseConfig&) const = default;
};

struct ExperimentConfig {
  std::vector<Gate> gates{std::begin(kAllGates), std::end(kAllGates)};
  int strategy = 0;  // 0: 1 for one qubit, 2 for two
  long steps_1q = kDefaultSteps1Q;
  long steps_2q = kDefaultSteps2Q;
  std::map<Gate, SweepParams1Q> params_1q{
      {Gate::Not, {6.965, 2.189e-4, 160}},
      {Gate::Hadamard, {7.820, 1.792e-4, 160}},
      {Gate::Pi8, {8.465, 1.675e-4, 160}},
      {Gate::Phase, {8.073, 1.666e-4, 160}},
  };
  SweepParams2Q params_2q{5.1, 2.4e-4, 120, 11.702, -2.6, -0.41, 6.6650, 5.0003};
  NoiseConfig noise;
  double t_phys_1q = 1e-6;
  double t_phys_2q = 5e-6;
  int padding = kDefaultPadding;
  int component = 0;
  double omega_max = 100;
  double ansatz_decay = kAnsatzDecay;
  std::string out;

  bool operator==(const ExperimentConfig& o) const {
    auto eq1 = [](const SweepParams1Q& a, const SweepParams1Q& b) {
      return a.lambda == b.lambda && a.eta4 == b.eta4 && a.tau0 == b.tau0;
    };
    const auto& a = params_2q;
    const auto& b = o.params_2q;
    bool same1 = params_1q.size() == o.params_1q.size();
    for (const auto& [g, p] : params_1q) same1 = same1 && o.params_1q.count(g) && eq1(p, o.params_1q.at(g));
    return gates == o.gates && strategy == o.strategy && steps_1q == o.steps_1q &&
           steps_2q == o.steps_2q && same1 && a.lambda == b.lambda && a.eta4 == b.eta4 &&
           a.tau0 == b.tau0 && a.d1 == b.d1 && a.d2 == b.d2 && a.d3 == b.d3 && a.d4 == b.d4 &&
           a.c4 == b.c4 && noise == o.noise && t_phys_1q == o.t_phys_1q &&
           t_phys_2q == o.t_phys_2q && padding == o.padding && component == o.component &&
           omega_max == o.omega_max && ansatz_decay == o.ansatz_decay && out == o.out;
  }

  TimeGrid grid(Gate g) const {
    return gate_qubits(g) == 1 ? TimeGrid{params_1q.at(g).tau0, steps_1q}
                               : TimeGrid{params_2q.tau0, steps_2q};
  }
  double t_phys(Gate g) const { return gate_qubits(g) == 1 ? t_phys_1q : t_phys_2q; }
  NoiseParams noise_params(Gate g, double power) const {
    return {power, noise.sigma, gate_qubits(g) == 1 ? noise.tau_f_1q : noise.tau_f_2q, noise.seed};
  }
};

inline const char* component_name(int c) { return c == 0 ? "x" : (c == 1 ? "y" : "z"); }

inline json to_json(const ExperimentConfig& c) {
  json j;
  j["gates"] = json::array();
  for (Gate g : c.gates) j["gates"].push_back(gate_name(g));
  j["strategy"] = c.strategy == 0 ? json("auto") : json(c.strategy);
  j["steps"] = {{"1q", c.steps_1q}, {"2q", c.steps_2q}};
  for (const auto& [g, p] : c.params_1q)
    j["params"][gate_name(g)] = {{"lambda", p.lambda}, {"eta4", p.eta4}, {"tau0", p.tau0}};
  const auto& q = c.params_2q;
  j["params"]["cphase"] = {{"lambda", q.lambda}, {"eta4", q.eta4}, {"tau0", q.tau0},
                           {"d1", q.d1},         {"d2", q.d2},     {"d3", q.d3},
                           {"d4", q.d4},         {"c4", q.c4}};
  j["noise"] = {{"power", c.noise.power},
                {"sigma", c.noise.sigma},
                {"tau_f", {{"1q", c.noise.tau_f_1q}, {"2q", c.noise.tau_f_2q}}},
                {"realizations", c.noise.realizations},
                {"seed", c.noise.seed},
                {"f_clock_hz", c.noise.f_clock_hz}};
  j["t_phys"] = {{"1q", c.t_phys_1q}, {"2q", c.t_phys_2q}};
  j["spectrum"] = {{"padding", c.padding},
                   {"component", component_name(c.component)},
                   {"omega_max", c.omega_max}};
  j["ansatz_decay"] = c.ansatz_decay;
  j["out"] = c.out;
  return j;
}

namespace detail {

inline void check_keys(const json& j, const std::string& path, std::set<std::string> allowed) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(path + (path.empty() ? "" : ".") + k + ": unknown key");
}

template <class T>
T get(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + ": wrong type");
  }
}

inline void read_num(const json& j, const char* key, const std::string& path, double& dst,
                     bool positive = true, bool nonneg = false) {
  if (!j.contains(key)) return;
  const std::string p = path + "." + key;
  if (!j[key].is_number()) throw ConfigError(p + ": expected a number");
  const double v = j[key].get<double>();
  if (!std::isfinite(v)) throw ConfigError(p + ": must be finite");
  if (positive && !(v > 0)) throw ConfigError(p + ": must be > 0");
  if (nonneg && !(v >= 0)) throw ConfigError(p + ": must be >= 0");
  dst = v;
}

inline void read_pair(const json& j, const char* key, const std::string& path, double& a,
                      double& b, bool positive = true) {
  if (!j.contains(key)) return;
  const std::string p = path.empty() ? key : path + "." + key;
  if (j[key].is_number()) {
    read_num(j, key, path, a, positive);
    b = a;
    return;
  }
  check_keys(j[key], p, {"1q", "2q"});
  read_num(j[key], "1q", p, a, positive);
  read_num(j[key], "2q", p, b, positive);
}

}  // namespace detail

inline ExperimentConfig config_from_json(const json& j) {
  using namespace detail;
  ExperimentConfig c;
  if (j.is_null()) return c;
  check_keys(j, "", {"gates", "strategy", "steps", "params", "noise", "t_phys", "spectrum",
                     "ansatz_decay", "out"});
  if (j.contains("gates")) {
    const auto& gs = j["gates"];
    if (!gs.is_array() || gs.empty()) throw ConfigError("gates: expected a non-empty array");
    c.gates.clear();
    for (const auto& g : gs) c.gates.push_back(parse_gate(get<std::string>(g, "gates")));
  }
  if (j.contains("strategy")) {
    const auto& s = j["strategy"];
    if (s.is_string() && s.get<std::string>() == "auto") c.strategy = 0;
    else if (s.is_number_integer() && (s.get<int>() == 1 || s.get<int>() == 2)) c.strategy = s.get<int>();
    else throw ConfigError("strategy: expected \"auto\", 1 or 2");
  }
  if (j.contains("steps")) {
    double a = static_cast<double>(c.steps_1q), b = static_cast<double>(c.steps_2q);
    read_pair(j, "steps", "", a, b);
    if (a != std::floor(a) || b != std::floor(b)) throw ConfigError("steps: must be integers");
    c.steps_1q = static_cast<long>(a);
    c.steps_2q = static_cast<long>(b);
  }
  if (j.contains("params")) {
    const auto& ps = j["params"];
    check_keys(ps, "params", {"not", "hadamard", "pi8", "phase", "cphase"});
    for (auto& [g, p] : c.params_1q) {
      const auto name = gate_name(g);
      if (!ps.contains(name)) continue;
      const std::string path = "params." + name;
      check_keys(ps[name], path, {"lambda", "eta4", "tau0"});
      read_num(ps[name], "lambda", path, p.lambda);
      read_num(ps[name], "eta4", path, p.eta4);
      read_num(ps[name], "tau0", path, p.tau0);
    }
    if (ps.contains("cphase")) {
      const auto& q = ps["cphase"];
      auto& p = c.params_2q;
      check_keys(q, "params.cphase", {"lambda", "eta4", "tau0", "d1", "d2", "d3", "d4", "c4"});
      read_num(q, "lambda", "params.cphase", p.lambda);
      read_num(q, "eta4", "params.cphase", p.eta4);
      read_num(q, "tau0", "params.cphase", p.tau0);
      for (auto [k, dst] : {std::pair{"d1", &p.d1}, {"d2", &p.d2}, {"d3", &p.d3}, {"d4", &p.d4},
                            {"c4", &p.c4}})
        read_num(q, k, "params.cphase", *dst, false);
    }
  }
  if (j.contains("noise")) {
    const auto& n = j["noise"];
    check_keys(n, "noise", {"power", "sigma", "tau_f", "realizations", "seed", "f_clock_hz"});
    read_num(n, "power", "noise", c.noise.power, false, true);
    read_num(n, "sigma", "noise", c.noise.sigma);
    read_pair(n, "tau_f", "noise", c.noise.tau_f_1q, c.noise.tau_f_2q);
    read_num(n, "f_clock_hz", "noise", c.noise.f_clock_hz);
    if (n.contains("realizations")) {
      if (!n["realizations"].is_number_integer() || n["realizations"].get<long>() < 1)
        throw ConfigError("noise.realizations: must be an integer >= 1");
      c.noise.realizations = n["realizations"].get<int>();
    }
    if (n.contains("seed")) {
      if (!n["seed"].is_number_unsigned() && !(n["seed"].is_number_integer() && n["seed"].get<long long>() >= 0))
        throw ConfigError("noise.seed: must be a non-negative integer");
      c.noise.seed = n["seed"].get<std::uint64_t>();
    }
  }
  read_pair(j, "t_phys", "", c.t_phys_1q, c.t_phys_2q);
  if (j.contains("spectrum")) {
    const auto& s = j["spectrum"];
    check_keys(s, "spectrum", {"padding", "component", "omega_max"});
    if (s.contains("padding")) {
      if (!s["padding"].is_number_integer() || s["padding"].get<int>() < 1)
        throw ConfigError("spectrum.padding: must be an integer >= 1");
      c.padding = s["padding"].get<int>();
    }
    if (s.contains("component")) {
      const auto v = get<std::string>(s["component"], "spectrum.component");
      if (v == "x") c.component = 0;
      else if (v == "y") c.component = 1;
      else if (v == "z") c.component = 2;
      else throw ConfigError("spectrum.component: expected x, y or z");
    }
    read_num(s, "omega_max", "spectrum", c.omega_max);
  }
  read_num(j, "ansatz_decay", "", c.ansatz_decay);
  if (j.contains("out")) c.out = get<std::string>(j["out"], "out");
  return c;
}

inline ExperimentConfig parse_config(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  try {
    return config_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ConfigError("config parse error at line " + std::to_string(line) + ": " + e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---- CSV -------------------------------------------------------------------

inline std::string fmt_num(double x) {
  char buf[64];
  if (x != 0 && std::abs(x) < 1e-3) std::snprintf(buf, sizeof buf, "%.5e", x);
  else std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline std::string csv_header_line() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char ts[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string("# nocgf ") + kVersion + " " + ts + " eigen " +
         std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION) + " " + fftw_version;
}

inline void write_csv(std::ostream& os, const CsvTable& t, bool header = true) {
  if (header) os << csv_header_line() << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
}

// ---- experiments -----------------------------------------------------------

struct GateOutcome {
  Gate gate;
  ErrorReport nominal;
  ErrorReport improved;
  ControlModification control;
  TimeGrid grid;
};

inline int resolved_strategy(const ExperimentConfig& c, Gate g) {
  return c.strategy == 0 ? default_strategy(gate_qubits(g)) : c.strategy;
}

// Calls fn(Sys tag, params, result) with the typed improvement result.
template <class Fn>
void with_improved(const ExperimentConfig& c, Gate g, Fn&& fn) {
  const TimeGrid grid = c.grid(g);
  if (gate_qubits(g) == 1) {
    const auto& p = c.params_1q.at(g);
    auto r = improve_gate<OneQubit>(g, p, grid, resolved_strategy(c, g), c.ansatz_decay);
    fn(OneQubit{}, p, r);
  } else {
    auto r = improve_gate<TwoQubit>(g, c.params_2q, grid, resolved_strategy(c, g), c.ansatz_decay);
    fn(TwoQubit{}, c.params_2q, r);
  }
}

inline GateOutcome improve(const ExperimentConfig& c, Gate g) {
  GateOutcome o{g, {}, {}, {}, c.grid(g)};
  with_improved(c, g, [&](auto, const auto&, auto& r) {
    o.nominal = r.nominal_report;
    o.improved = r.improved_report;
    o.control = std::move(r.control);
  });
  return o;
}

inline std::vector<GateOutcome> improve_all(const ExperimentConfig& c) {
  std::vector<GateOutcome> out(c.gates.size());
  parallel_for(out.size(), [&](std::size_t i) { out[i] = improve(c, c.gates[i]); });
  return out;
}

inline std::vector<Gate> ordered(std::vector<Gate> gs) {
  std::sort(gs.begin(), gs.end());
  gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
  return gs;
}

inline CsvTable improve_table(const ExperimentConfig& c) {
  CsvTable t{{"gate", "trp_without_noc", "trp_with_noc", "d_star_without_noc", "d_star_with_noc",
              "fidelity_without_noc", "fidelity_with_noc", "strategy", "steps"},
             {}};
  ExperimentConfig cc = c;
  cc.gates = ordered(c.gates);
  for (const auto& o : improve_all(cc))
    t.rows.push_back({gate_name(o.gate), fmt_num(o.nominal.trace_p), fmt_num(o.improved.trace_p),
                      fmt_num(o.nominal.d_star), fmt_num(o.improved.d_star),
                      fmt_num(o.nominal.fidelity), fmt_num(o.improved.fidelity),
                      std::to_string(resolved_strategy(c, o.gate)), std::to_string(o.grid.steps)});
  return t;
}

inline CsvTable run_ideal_table(const ExperimentConfig& c) {
  CsvTable t{{"gate", "trp_with_noc", "trp_without_noc", "steps"}, {}};
  ExperimentConfig cc = c;
  cc.gates = ordered(c.gates);
  for (const auto& o : improve_all(cc))
    t.rows.push_back({gate_name(o.gate), fmt_num(o.improved.trace_p), fmt_num(o.nominal.trace_p),
                      std::to_string(o.grid.steps)});
  return t;
}

struct BandwidthRow {
  Gate gate;
  double omega01;
  double mhz;
};

inline std::vector<BandwidthRow> bandwidths(const ExperimentConfig& c) {
  ExperimentConfig cc = c;
  cc.gates = ordered(c.gates);
  std::vector<BandwidthRow> rows(cc.gates.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const Gate g = cc.gates[i];
    const auto o = improve(cc, g);
    const double w = bandwidth_w01(control_spectrum(o.control, cc.component, cc.padding));
    rows[i] = {g, w, to_dimensionful(w, o.grid.tau0, cc.t_phys(g))};
  });
  return rows;
}

inline CsvTable run_bandwidth_table(const ExperimentConfig& c) {
  CsvTable t{{"gate", "omega01", "omega01_mhz", "tau0", "t_phys_s", "component", "steps"}, {}};
  for (const auto& r : bandwidths(c))
    t.rows.push_back({gate_name(r.gate), fmt_num(r.omega01), fmt_num(r.mhz),
                      fmt_num(c.grid(r.gate).tau0), fmt_num(c.t_phys(r.gate)),
                      component_name(c.component), std::to_string(c.grid(r.gate).steps)});
  return t;
}

inline CsvTable run_jitter_sweep(const ExperimentConfig& c, std::vector<double> powers) {
  for (double p : powers)
    if (!(p >= 0)) throw ConfigError("powers: must be >= 0");
  std::sort(powers.begin(), powers.end());
  CsvTable t{{"gate", "power", "sigma_t_ps", "mean_trp", "std_trp", "realizations", "seed",
              "steps"},
             {}};
  for (Gate g : ordered(c.gates)) {
    with_improved(c, g, [&](auto sys, const auto& p, const auto& r) {
      using Sys = decltype(sys);
      for (double pw : powers) {
        const auto e = noise_ensemble<Sys>(p, c.grid(g), &r.control, r.frame, r.target,
                                           c.noise_params(g, pw), c.noise.realizations);
        const auto jr = jitter_report(pw, c.noise.f_clock_hz);
        t.rows.push_back({gate_name(g), fmt_num(pw), fmt_num(jr.sigma_t * 1e12), fmt_num(e.mean),
                          fmt_num(e.stddev), std::to_string(c.noise.realizations),
                          std::to_string(c.noise.seed), std::to_string(c.grid(g).steps)});
      }
    });
  }
  return t;
}

inline CsvTable run_sensitivity_table(const ExperimentConfig& c, const std::string& param) {
  printed_digits(param);
  CsvTable t{{"gate", "parameter", "value", "trp_with_noc", "trp_without_noc", "steps"}, {}};
  for (Gate g : ordered(c.gates)) {
    if (gate_qubits(g) == 1 && param != "lambda" && param != "eta4") continue;
    with_improved(c, g, [&](auto sys, const auto& p, const auto& r) {
      using Sys = decltype(sys);
      for (const auto& row : run_sensitivity<Sys>(r, p, param, c.grid(g))) {
        char v[32];
        std::snprintf(v, sizeof v, "%.10g", row.value);
        t.rows.push_back({gate_name(g), param, v, fmt_num(row.trace_p_with_noc),
                          fmt_num(row.trace_p_without_noc), std::to_string(c.grid(g).steps)});
      }
    });
  }
  return t;
}

inline CsvTable run_spectrum(const ExperimentConfig& c, Gate g) {
  const auto o = improve(c, g);
  const auto s = control_spectrum(o.control, c.component, c.padding);
  CsvTable t{{"omega", "magnitude"}, {}};
  for (std::size_t i = 0; i < s.omega.size() && s.omega[i] <= c.omega_max; ++i)
    t.rows.push_back({fmt_num(s.omega[i]), fmt_num(s.magnitude[i])});
  return t;
}

}  // namespace nocgf
