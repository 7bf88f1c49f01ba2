#pragma once

#include <cstdint>
#include <string>

namespace nlfp::cli {

struct RelaxArgs {
  std::string kernel = "frac:0.5";
  double mu = 1.0;
  double t_max = 10.0;
  std::size_t steps = 2000;
  std::string grid;  // "" = uniform, or "geometric:FIRST,RATIO"
  std::string output = "relax.csv";
};
int cmd_relax(const RelaxArgs& args);

struct SimulateArgs {
  std::string config_path;
};
int cmd_simulate(const SimulateArgs& args);

struct VerifyArgs {
  std::string suite;
  std::size_t samples = 10000;
  std::uint64_t seed = 7;
  std::string kernel = "frac:0.5";
  std::string output;  // "" = stdout
};
int cmd_verify(const VerifyArgs& args);

struct SpectralArgs {
  std::string kernel = "frac:0.5";
  unsigned mode = 1;
  double amplitude = 0.5;
  double t_max = 50.0;
  std::size_t steps = 1000;
  std::string grid;
  std::string output = "spectral.csv";
};
int cmd_spectral(const SpectralArgs& args);

}  // namespace nlfp::cli
