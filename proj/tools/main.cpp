#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "nlfp/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nlfp: relaxation functions, entropy inequalities and solvers for "
               "non-local in time Fokker-Planck equations"};
  app.require_subcommand(1);

  nlfp::cli::RelaxArgs relax;
  auto* relax_cmd = app.add_subcommand("relax", "solve a relaxation function and export CSV");
  relax_cmd->add_option("--kernel", relax.kernel, "frac:A | tempered:A,G | multiterm:... | distributed");
  relax_cmd->add_option("--mu", relax.mu, "relaxation parameter mu >= 0");
  relax_cmd->add_option("--t-max", relax.t_max, "final time");
  relax_cmd->add_option("--steps", relax.steps, "number of steps (uniform grid)");
  relax_cmd->add_option("--grid", relax.grid, "geometric:FIRST,RATIO (omit for uniform)");
  relax_cmd->add_option("--output", relax.output, "CSV path");

  nlfp::cli::SimulateArgs simulate;
  auto* sim_cmd = app.add_subcommand("simulate", "run an experiment from a JSON config");
  sim_cmd->add_option("config", simulate.config_path, "JSON config path")->required();

  nlfp::cli::VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "run an inequality sweep and emit a JSON report");
  verify_cmd->add_option("suite", verify.suite, "pointwise|ckp|sobolev|identity|holder|bounds")
      ->required();
  verify_cmd->add_option("--samples", verify.samples, "sample count");
  verify_cmd->add_option("--seed", verify.seed, "RNG seed");
  verify_cmd->add_option("--kernel", verify.kernel, "kernel for the bounds suite");
  verify_cmd->add_option("--output", verify.output, "report path (default stdout)");

  nlfp::cli::SpectralArgs spectral;
  auto* spec_cmd = app.add_subcommand("spectral", "per-mode decay of the OU oracle");
  spec_cmd->add_option("--kernel", spectral.kernel, "kernel flag");
  spec_cmd->add_option("--mode", spectral.mode, "Hermite mode of the initial datum");
  spec_cmd->add_option("--amplitude", spectral.amplitude, "mode amplitude");
  spec_cmd->add_option("--t-max", spectral.t_max, "final time");
  spec_cmd->add_option("--steps", spectral.steps, "number of steps");
  spec_cmd->add_option("--grid", spectral.grid, "geometric:FIRST,RATIO (omit for uniform)");
  spec_cmd->add_option("--output", spectral.output, "CSV path");

  try {
    app.parse(argc, argv);
    if (relax_cmd->parsed()) return nlfp::cli::cmd_relax(relax);
    if (sim_cmd->parsed()) return nlfp::cli::cmd_simulate(simulate);
    if (verify_cmd->parsed()) return nlfp::cli::cmd_verify(verify);
    if (spec_cmd->parsed()) return nlfp::cli::cmd_spectral(spectral);
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
}
