#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "nocgf/harness.hpp"

using namespace nocgf;

namespace {

struct Overrides {
  std::string config;
  std::string gate;
  long steps = 0;
  long long seed = -1;
  int realizations = 0;
  std::string out;
};

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (!o.gate.empty()) c.gates = {parse_gate(o.gate)};
  if (o.steps > 0) c.steps_1q = c.steps_2q = o.steps;
  if (o.seed >= 0) c.noise.seed = static_cast<std::uint64_t>(o.seed);
  if (o.realizations > 0) c.noise.realizations = o.realizations;
  if (!o.out.empty()) c.out = o.out;
  return c;
}

void emit(const ExperimentConfig& c, const CsvTable& t) {
  if (c.out.empty() || c.out == "-") {
    write_csv(std::cout, t);
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw ConfigError("cannot write '" + c.out + "'");
  write_csv(f, t);
}

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON config file");
  app->add_option("--gate", o.gate, "not, hadamard, pi8, phase or cphase");
  app->add_option("--steps", o.steps, "RK4 steps (both systems)")->check(CLI::PositiveNumber);
  app->add_option("--seed", o.seed, "noise seed")->check(CLI::NonNegativeNumber);
  app->add_option("--realizations", o.realizations, "noise realizations")->check(CLI::PositiveNumber);
  app->add_option("--out", o.out, "output CSV (stdout if omitted)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neighboring optimal control for quantum gates"};
  app.require_subcommand(1);

  Overrides o;
  std::string table_kind, param, powers_arg;

  auto* improve_cmd = app.add_subcommand("improve", "improve gates and print error reports");
  add_common(improve_cmd, o);

  auto* table_cmd = app.add_subcommand("table", "ideal or bandwidth table");
  table_cmd->add_option("kind", table_kind, "ideal | bandwidth")
      ->required()
      ->check(CLI::IsMember({"ideal", "bandwidth"}));
  add_common(table_cmd, o);

  auto* sweep_cmd = app.add_subcommand("sweep", "one-unit sensitivity of a parameter");
  sweep_cmd->add_option("--param", param, "lambda, eta4, d1, d2, d3, d4 or c4")->required();
  add_common(sweep_cmd, o);

  auto* jitter_cmd = app.add_subcommand("jitter", "noise-averaged Tr P versus jitter power");
  jitter_cmd->add_option("--powers", powers_arg, "comma-separated mean powers")->required();
  add_common(jitter_cmd, o);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "spectrum of the control modification");
  add_common(spectrum_cmd, o);

  auto* defaults_cmd = app.add_subcommand("defaults", "print the default config as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (defaults_cmd->parsed()) {
      std::cout << to_json(ExperimentConfig{}).dump(2) << "\n";
      return 0;
    }
    const ExperimentConfig c = resolve(o);
    if (improve_cmd->parsed()) {
      emit(c, improve_table(c));
    } else if (table_cmd->parsed()) {
      emit(c, table_kind == "ideal" ? run_ideal_table(c) : run_bandwidth_table(c));
    } else if (sweep_cmd->parsed()) {
      emit(c, run_sensitivity_table(c, param));
    } else if (jitter_cmd->parsed()) {
      std::vector<double> powers;
      std::stringstream ss(powers_arg);
      for (std::string tok; std::getline(ss, tok, ',');) {
        try {
          powers.push_back(std::stod(tok));
        } catch (const std::exception&) {
          throw ConfigError("--powers: cannot parse '" + tok + "'");
        }
      }
      emit(c, run_jitter_sweep(c, powers));
    } else if (spectrum_cmd->parsed()) {
      if (o.gate.empty()) throw ConfigError("spectrum: --gate is required");
      emit(c, run_spectrum(c, parse_gate(o.gate)));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
