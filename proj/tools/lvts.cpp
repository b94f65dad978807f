#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lvts/commands.hpp"
#include "lvts/error.hpp"

namespace {

lvts::RunConfig load_with_overrides(const std::string& path, std::optional<double> horizon, std::optional<double> dense_step) {
  lvts::RunConfig cfg = lvts::load_config(path);
  if (horizon) cfg.sim.horizon = *horizon;
  if (dense_step) cfg.sim.dense_step = *dense_step;
  cfg.sim.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delayed Lotka-Volterra mutualism on time scales: hypothesis audit, bounds and simulation"};
  app.require_subcommand(1);

  std::string format = "text";
  std::optional<double> horizon;
  std::optional<double> dense_step;
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--horizon", horizon, "Override the simulation horizon")->check(CLI::PositiveNumber);
  app.add_option("--dense-step", dense_step, "Override the RK4 step on dense stretches")->check(CLI::PositiveNumber);

  std::string config;
  std::optional<std::string> out_path;
  int which = 0;
  double threshold = lvts::kConvergeThreshold;

  auto* check = app.add_subcommand("check", "Audit hypotheses, print constants, permanence bounds and margins");
  check->add_option("config", config, "Configuration file")->required();

  auto* simulate = app.add_subcommand("simulate", "Integrate each history and write trajectory CSV");
  simulate->add_option("config", config, "Configuration file")->required();
  simulate->add_option("--out", out_path, "CSV output path");

  auto* converge = app.add_subcommand("converge", "Integrate two histories and report their divergence");
  converge->add_option("config", config, "Configuration file")->required();
  converge->add_option("--threshold", threshold, "Tail divergence threshold")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify-example", "Compare a built-in fixture against its reference values");
  verify->add_option("which", which, "Fixture number (1 or 2)")->required();

  auto* dump = app.add_subcommand("example-config", "Print a built-in fixture as a configuration file");
  dump->add_option("which", which, "Fixture number (1 or 2)")->required();

  // Global flags are accepted after the subcommand too.
  for (auto* sub : {check, simulate, converge, verify, dump}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : lvts::kExitError;
  }

  const lvts::Format fmt = format == "structured" ? lvts::Format::Structured : lvts::Format::Text;
  try {
    if (*check) return lvts::cmd_check(load_with_overrides(config, horizon, dense_step), fmt, std::cout);
    if (*simulate) return lvts::cmd_simulate(load_with_overrides(config, horizon, dense_step), fmt, std::cout, out_path);
    if (*converge) {
      return lvts::cmd_converge(load_with_overrides(config, horizon, dense_step), fmt, std::cout, threshold);
    }
    if (*verify) return lvts::cmd_verify_example(which, fmt, std::cout);
    if (*dump) {
      std::cout << lvts::serialize_config(lvts::example_config(which));
      return lvts::kExitPass;
    }
  } catch (const lvts::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lvts::kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lvts::kExitError;
  }
  return lvts::kExitError;
}
