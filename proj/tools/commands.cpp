#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <json.hpp>

#include "config.hpp"
#include "nlfp/convq.hpp"
#include "nlfp/entropy.hpp"
#include "nlfp/errors.hpp"
#include "nlfp/fpsolver.hpp"
#include "nlfp/spectral.hpp"

namespace nlfp::cli {

namespace {

using nlohmann::json;

convq::TimeGrid make_grid(const std::string& grid_flag, double t_max, std::size_t steps) {
  if (grid_flag.empty()) return convq::TimeGrid::uniform(t_max / (double)steps, steps);
  const std::string prefix = "geometric:";
  if (grid_flag.rfind(prefix, 0) != 0)
    throw std::invalid_argument("grid flag: use geometric:FIRST,RATIO or omit for uniform");
  std::size_t comma = grid_flag.find(',', prefix.size());
  if (comma == std::string::npos) throw std::invalid_argument("grid flag: geometric:FIRST,RATIO");
  const double first = std::stod(grid_flag.substr(prefix.size(), comma - prefix.size()));
  const double ratio = std::stod(grid_flag.substr(comma + 1));
  if (!(first > 0.0) || !(ratio > 1.0))
    throw std::invalid_argument("grid flag: need FIRST > 0 and RATIO > 1");
  // enough steps to reach t_max
  const std::size_t n =
      (std::size_t)std::ceil(std::log1p(t_max * (ratio - 1.0) / first) / std::log(ratio));
  return convq::TimeGrid::geometric(first, ratio, std::max<std::size_t>(n, 8));
}

const char* decay_name(kernels::DecayKind kind) {
  switch (kind) {
    case kernels::DecayKind::Algebraic: return "algebraic";
    case kernels::DecayKind::Exponential: return "exponential";
    case kernels::DecayKind::Logarithmic: return "logarithmic";
  }
  return "?";
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file " + path);
  out << body;
}

// random positive density: normalized Gaussian mixture sampled on the grid
Field1D random_density(std::mt19937_64& rng, const SpatialGrid& grid) {
  std::uniform_int_distribution<int> n_comp(1, 3);
  std::uniform_real_distribution<double> center(-2.0, 2.0), sigma(0.6, 1.6), weight(0.2, 1.0);
  const int m = n_comp(rng);
  std::vector<double> u(grid.n_cells, 0.0);
  for (int c = 0; c < m; ++c) {
    const double mu = center(rng), sg = sigma(rng), w = weight(rng);
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
      const double z = (grid.x(i) - mu) / sg;
      u[i] += w * std::exp(-0.5 * z * z) / (sg * std::sqrt(2.0 * M_PI));
    }
  }
  Field1D f(grid, std::move(u));
  const double mass = entropy::trapezoid_mass(f);
  for (double& v : f.values) v /= mass;
  return f;
}

entropy::SteadyState1D as_steady(const Field1D& f) {
  return entropy::SteadyState1D{f.grid, f.values, 1.0};
}

}  // namespace

int cmd_relax(const RelaxArgs& args) {
  const kernels::KernelSpec kernel = parse_kernel_flag(args.kernel);
  const convq::TimeGrid grid = make_grid(args.grid, args.t_max, args.steps);
  const convq::ConvolutionWeights weights(kernel, grid);
  const convq::RelaxationCurve curve = convq::solve_relaxation(weights, args.mu);

  std::ofstream out(args.output, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file " + args.output);
  curve.write_csv(out);

  const auto decay = kernel.decay_class();
  std::cout << "kernel=" << kernel.label() << " mu=" << args.mu
            << " decay_class=" << decay_name(decay.kind);
  if (args.mu > 0.0) {
    const double lo = std::max(grid.t_max() / 100.0, grid.node(1));
    try {
      const auto fit = fpsolver::fit_decay_rate(curve.times, curve.values, decay, lo,
                                                grid.t_max());
      std::cout << " fitted_rate=" << fit.rate << " r2=" << fit.r_squared;
    } catch (const std::invalid_argument&) {
      std::cout << " fitted_rate=n/a";
    }
  }
  std::cout << " csv=" << args.output << "\n";
  return 0;
}

int cmd_simulate(const SimulateArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  const fpsolver::ExperimentConfig cfg = load_config(args.config_path);
  const fpsolver::SimResult result = fpsolver::run_experiment(cfg);

  const std::filesystem::path dir = cfg.output_dir.empty() ? "." : cfg.output_dir;
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "simulation.csv", std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write simulation.csv");
    result.write_csv(out);
  }

  json summary;
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                (unsigned long long)config_hash(cfg));
  summary["config_hash"] = hash_buf;

  json fitted = json::array();
  const auto decay = cfg.kernel.decay_class();
  const bool discrete_classical =
      cfg.scheme == fpsolver::Scheme::BackwardDifference ||
      (cfg.scheme == fpsolver::Scheme::Spectral &&
       cfg.spectral_evolution != fpsolver::SpectralEvolution::Kernel);
  for (std::size_t g = 0; g < result.generator_labels.size(); ++g) {
    json item;
    item["generator"] = result.generator_labels[g];
    try {
      const auto fit = fpsolver::fit_decay_rate(
          result.times, result.entropy_series[g],
          discrete_classical ? kernels::DecayClass{kernels::DecayKind::Exponential, 0.0} : decay,
          result.times.back() / 20.0, result.times.back());
      item["rate"] = fit.rate;
      item["r_squared"] = fit.r_squared;
    } catch (const std::invalid_argument&) {
      item["rate"] = nullptr;
    }
    fitted.push_back(item);
  }
  summary["fitted_rates"] = fitted;

  json margins = json::array();
  for (std::size_t g = 0; g < result.generator_labels.size(); ++g) {
    double worst_a = -1.0;
    const double h0 = result.initial_entropy[g];
    for (std::size_t n = 0; n < result.times.size(); ++n) {
      if (h0 > 0.0)
        worst_a = std::max(worst_a, (result.entropy_series[g][n] - result.envelope_a[n] * h0) / h0);
    }
    json item;
    item["generator"] = result.generator_labels[g];
    item["envelopeA_excess"] = worst_a;
    margins.push_back(item);
  }
  for (std::size_t b = 0; b < result.envelope_b_generator.size(); ++b) {
    const std::size_t g = (std::size_t)result.envelope_b_generator[b];
    const double h0 = result.initial_entropy[g];
    double worst_b = -1.0;
    for (std::size_t n = 0; n < result.times.size(); ++n)
      if (h0 > 0.0)
        worst_b =
            std::max(worst_b, (result.entropy_series[g][n] - result.envelope_b[b][n] * h0) / h0);
    json item;
    item["generator"] = result.generator_labels[g];
    item["envelopeB_excess"] = worst_b;
    margins.push_back(item);
  }
  summary["envelope_margins"] = margins;

  json violations = json::array();
  for (const auto& v : result.violations)
    violations.push_back({{"generator", v.generator},
                          {"envelope", v.envelope},
                          {"node", v.node},
                          {"value", v.value},
                          {"bound", v.bound}});
  summary["violations"] = violations;
  summary["seed"] = cfg.seed;
  summary["runtime_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_file((dir / "summary.json").string(), summary.dump(2) + "\n");
  std::cout << "wrote " << (dir / "simulation.csv").string() << " and "
            << (dir / "summary.json").string() << "\n";
  return 0;
}

namespace {

json verify_pointwise(std::mt19937_64& rng, std::size_t samples) {
  std::uniform_real_distribution<double> coord(1e-9, 10.0), beta_dist(1.0 + 1e-9, 2.0);
  double min_margin = std::numeric_limits<double>::infinity();
  json worst;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = coord(rng), y = coord(rng), b = beta_dist(rng);
    const double f = entropy::pointwise_F(b, x, y);
    if (f < min_margin) {
      min_margin = f;
      worst = {{"x", x}, {"y", y}, {"beta", b}, {"F", f}};
    }
  }
  double worst_diag = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double x = 10.0 * i / 100.0;
    for (double b : {1.2, 1.5, 1.8, 2.0})
      worst_diag = std::max(worst_diag, std::fabs(entropy::pointwise_F(b, x, x)));
  }
  return {{"min_margin", min_margin},
          {"worst_case", worst},
          {"max_diagonal_abs", worst_diag},
          {"pass", min_margin >= -1e-12 && worst_diag <= 1e-12}};
}

json verify_ckp(std::mt19937_64& rng, std::size_t samples) {
  const SpatialGrid grid{8.0, 256};
  double min_margin = std::numeric_limits<double>::infinity();
  json worst;
  std::vector<entropy::EntropyGenerator> gens = {
      entropy::EntropyGenerator::power(1.25), entropy::EntropyGenerator::power(1.5),
      entropy::EntropyGenerator::power(2.0), entropy::EntropyGenerator::logarithmic()};
  for (std::size_t i = 0; i < samples; ++i) {
    const Field1D f = random_density(rng, grid);
    const Field1D g = random_density(rng, grid);
    const auto steady = as_steady(g);
    const double l1 = entropy::l1_distance(f, steady);
    for (const auto& gen : gens) {
      const double h = entropy::relative_entropy(gen, f, steady);
      const double margin = entropy::ckp_bound(gen, h) - l1;
      if (margin < min_margin) {
        min_margin = margin;
        worst = {{"sample", i}, {"generator", gen.label()}, {"margin", margin}};
      }
    }
  }
  return {{"min_margin", min_margin}, {"worst_case", worst}, {"pass", min_margin >= -1e-8}};
}

json verify_sobolev(std::mt19937_64& rng, std::size_t samples) {
  const SpatialGrid grid{8.0, 400};
  const auto steady = as_steady(fpsolver::discrete_gibbs(fpsolver::Potential1D::quadratic(1.0), grid));
  std::uniform_real_distribution<double> eps_dist(0.05, 0.5);
  std::vector<entropy::EntropyGenerator> gens = {
      entropy::EntropyGenerator::power(1.5), entropy::EntropyGenerator::power(2.0),
      entropy::EntropyGenerator::logarithmic()};
  double min_residual = std::numeric_limits<double>::infinity();
  json worst;
  for (std::size_t i = 0; i < samples; ++i) {
    const Field1D mix = random_density(rng, grid);
    const double eps = eps_dist(rng);
    std::vector<double> u(grid.n_cells);
    for (std::size_t j = 0; j < grid.n_cells; ++j)
      u[j] = (1.0 - eps) * steady.values[j] + eps * mix.values[j];
    const Field1D f(grid, std::move(u));
    for (const auto& gen : gens) {
      const double r = entropy::convex_sobolev_residual(gen, f, steady, 1.0);
      if (r < min_residual) {
        min_residual = r;
        worst = {{"sample", i}, {"generator", gen.label()}, {"residual", r}};
      }
    }
  }
  // Poincare saturation by the first Hermite mode
  std::vector<double> u(grid.n_cells);
  for (std::size_t j = 0; j < grid.n_cells; ++j)
    u[j] = (1.0 + 0.3 * grid.x(j)) * steady.values[j];
  const double saturation =
      entropy::convex_sobolev_residual(entropy::EntropyGenerator::power(2.0),
                                       Field1D(grid, std::move(u)), steady, 1.0);
  return {{"min_residual", min_residual},
          {"worst_case", worst},
          {"saturation_residual", saturation},
          {"pass", min_residual >= -1e-6 && std::fabs(saturation) <= 1e-4}};
}

json verify_identity(std::mt19937_64& rng, std::size_t samples) {
  std::uniform_real_distribution<double> val(0.1, 3.0);
  double worst = 0.0;
  const std::size_t sequences = std::max<std::size_t>(1, samples / 100);
  for (std::size_t s = 0; s < sequences; ++s) {
    std::vector<double> u(100);
    for (double& v : u) v = val(rng);
    for (double p : {2.0, 1.5})
      worst = std::max(worst,
                       convq::check_fundamental_identity_discrete(u, 0.1, convq::power_convex(p)));
  }
  return {{"max_residual", worst}, {"pass", worst <= 1e-12}};
}

json verify_holder(std::mt19937_64& rng, std::size_t samples) {
  const SpatialGrid grid{8.0, 256};
  std::uniform_real_distribution<double> beta_dist(1.0 + 1e-6, 2.0);
  double min_margin = std::numeric_limits<double>::infinity();
  double worst_equality = 0.0;
  json worst;
  for (std::size_t i = 0; i < samples; ++i) {
    const Field1D f1 = random_density(rng, grid);
    const Field1D f2 = random_density(rng, grid);
    const Field1D g = random_density(rng, grid);
    const double beta = beta_dist(rng);
    const auto bound = entropy::entropy_holder_bound(beta, f1, f2, as_steady(g));
    const double margin = bound.rhs - bound.lhs;
    if (margin < min_margin) {
      min_margin = margin;
      worst = {{"sample", i}, {"beta", beta}, {"lhs", bound.lhs}, {"rhs", bound.rhs}};
    }
    const auto eq = entropy::entropy_holder_bound(beta, f1, f1, as_steady(g));
    worst_equality = std::max(worst_equality, std::fabs(eq.lhs - eq.rhs));
  }
  return {{"min_margin", min_margin},
          {"worst_case", worst},
          {"max_equality_gap", worst_equality},
          {"pass", min_margin >= -1e-10 && worst_equality <= 1e-10}};
}

json verify_bounds(const std::string& kernel_flag) {
  const kernels::KernelSpec kernel = parse_kernel_flag(kernel_flag);
  json runs = json::array();
  bool pass = true;
  for (const bool geometric : {false, true}) {
    for (const double mu : {0.5, 1.0, 2.0}) {
      json item = {{"grid", geometric ? "geometric" : "uniform"}, {"mu", mu}};
      try {
        const convq::TimeGrid grid = geometric ? convq::TimeGrid::geometric(0.01, 1.03, 420)
                                               : convq::TimeGrid::uniform(0.005, 2000);
        const convq::ConvolutionWeights weights(kernel, grid);
        const auto curve = convq::solve_relaxation(weights, mu);
        double min_gap = std::numeric_limits<double>::infinity();
        for (std::size_t n = 1; n < curve.values.size(); ++n)
          min_gap = std::min(min_gap, std::min(curve.values[n] - curve.lower_env[n],
                                               curve.upper_env[n] - curve.values[n]));
        item["violations"] = 0;
        item["min_envelope_gap"] = min_gap;
      } catch (const envelope_violation& e) {
        item["violations"] = 1;
        item["first_offending_node"] = e.node();
        pass = false;
      }
      runs.push_back(item);
    }
  }
  return {{"kernel", kernel.label()}, {"runs", runs}, {"pass", pass}};
}

}  // namespace

int cmd_verify(const VerifyArgs& args) {
  std::mt19937_64 rng(args.seed);
  json report;
  if (args.suite == "pointwise")
    report = verify_pointwise(rng, args.samples);
  else if (args.suite == "ckp")
    report = verify_ckp(rng, std::min<std::size_t>(args.samples, 500));
  else if (args.suite == "sobolev")
    report = verify_sobolev(rng, std::min<std::size_t>(args.samples, 500));
  else if (args.suite == "identity")
    report = verify_identity(rng, args.samples);
  else if (args.suite == "holder")
    report = verify_holder(rng, std::min<std::size_t>(args.samples, 2000));
  else if (args.suite == "bounds")
    report = verify_bounds(args.kernel);
  else
    throw std::invalid_argument("unknown suite \"" + args.suite +
                                "\" (pointwise, ckp, sobolev, identity, holder, bounds)");
  report["suite"] = args.suite;
  report["samples"] = args.samples;
  report["seed"] = args.seed;
  const std::string body = report.dump(2) + "\n";
  if (args.output.empty())
    std::cout << body;
  else
    write_file(args.output, body);
  return 0;
}

int cmd_spectral(const SpectralArgs& args) {
  const kernels::KernelSpec kernel = parse_kernel_flag(args.kernel);
  if (args.mode == 0) throw std::invalid_argument("spectral: mode must be >= 1");
  const convq::TimeGrid grid = make_grid(args.grid, args.t_max, args.steps);
  const spectral::NonlocalModeEvolution evo(kernel, grid, args.mode);
  spectral::SpectralCoeffs c0;
  c0.c.assign(args.mode + 1, 0.0);
  c0.c[0] = 1.0;
  c0.c[args.mode] = args.amplitude;

  std::ofstream out(args.output, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file " + args.output);
  evo.write_csv(out, c0);

  const std::size_t last = grid.steps();
  const auto cT = evo.at(c0, last);
  std::cout << "kernel=" << kernel.label() << " mode=" << args.mode
            << " initial_norm_sq=" << spectral::weighted_norm_sq(c0)
            << " final_norm_sq=" << spectral::weighted_norm_sq(cT) << " csv=" << args.output
            << "\n";
  return 0;
}

}  // namespace nlfp::cli
