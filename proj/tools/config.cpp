#include "config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace nlfp::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) bad("unknown key \"" + key + "\" in " + where);
}

double require_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number()) bad(where + " needs numeric \"" + key + "\"");
  return j[key].get<double>();
}

std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad number: " + item);
    out.push_back(v);
  }
  return out;
}

}  // namespace

kernels::KernelSpec parse_kernel_flag(const std::string& flag) {
  const auto colon = flag.find(':');
  const std::string head = flag.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : flag.substr(colon + 1);
  try {
    if (head == "frac") {
      const auto v = split_numbers(args);
      if (v.size() != 1) bad("frac kernel takes one parameter, e.g. frac:0.5");
      return kernels::KernelSpec::fractional(v[0]);
    }
    if (head == "tempered") {
      const auto v = split_numbers(args);
      if (v.size() != 2) bad("tempered kernel takes alpha,gamma");
      return kernels::KernelSpec::tempered_fractional(v[0], v[1]);
    }
    if (head == "multiterm") {
      const auto v = split_numbers(args);
      if (v.empty() || v.size() % 2 != 0) bad("multiterm kernel takes delta1,alpha1,...");
      std::vector<kernels::MultiTermEntry> terms;
      for (std::size_t i = 0; i < v.size(); i += 2) terms.push_back({v[i], v[i + 1]});
      return kernels::KernelSpec::multi_term(std::move(terms));
    }
    if (head == "distributed") {
      if (!args.empty()) bad("distributed kernel takes no parameters");
      return kernels::KernelSpec::distributed_order();
    }
  } catch (const std::domain_error& e) {
    bad(e.what());
  } catch (const std::invalid_argument& e) {
    bad(std::string("kernel flag: ") + e.what());
  }
  bad("unknown kernel \"" + head + "\" (use frac:, tempered:, multiterm:, distributed)");
}

nlohmann::json kernel_to_json(const kernels::KernelSpec& spec) {
  json j;
  if (const auto* f = std::get_if<kernels::Fractional>(&spec.variant())) {
    j["type"] = "fractional";
    j["alpha"] = f->alpha;
  } else if (const auto* tf = std::get_if<kernels::TemperedFractional>(&spec.variant())) {
    j["type"] = "tempered";
    j["alpha"] = tf->alpha;
    j["gamma"] = tf->gamma_rate;
  } else if (const auto* mt = std::get_if<kernels::MultiTerm>(&spec.variant())) {
    j["type"] = "multiterm";
    json terms = json::array();
    for (const auto& e : mt->terms) terms.push_back({{"delta", e.delta}, {"alpha", e.alpha}});
    j["terms"] = terms;
  } else {
    j["type"] = "distributed";
  }
  return j;
}

kernels::KernelSpec kernel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    bad("kernel needs a \"type\" string");
  const std::string type = j["type"].get<std::string>();
  try {
    if (type == "fractional") {
      reject_unknown_keys(j, {"type", "alpha"}, "kernel");
      return kernels::KernelSpec::fractional(require_number(j, "alpha", "kernel"));
    }
    if (type == "tempered") {
      reject_unknown_keys(j, {"type", "alpha", "gamma"}, "kernel");
      return kernels::KernelSpec::tempered_fractional(require_number(j, "alpha", "kernel"),
                                                      require_number(j, "gamma", "kernel"));
    }
    if (type == "multiterm") {
      reject_unknown_keys(j, {"type", "terms"}, "kernel");
      if (!j.contains("terms") || !j["terms"].is_array()) bad("multiterm kernel needs terms[]");
      std::vector<kernels::MultiTermEntry> terms;
      for (const auto& e : j["terms"]) {
        reject_unknown_keys(e, {"delta", "alpha"}, "kernel term");
        terms.push_back({require_number(e, "delta", "kernel term"),
                         require_number(e, "alpha", "kernel term")});
      }
      return kernels::KernelSpec::multi_term(std::move(terms));
    }
    if (type == "distributed") {
      reject_unknown_keys(j, {"type"}, "kernel");
      return kernels::KernelSpec::distributed_order();
    }
  } catch (const std::domain_error& e) {
    bad(e.what());
  }
  bad("unknown kernel type \"" + type + "\"");
}

convq::TimeGrid time_grid_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    bad("time grid needs a \"kind\" string");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "uniform") {
    reject_unknown_keys(j, {"kind", "step", "steps"}, "time grid");
    const double step = require_number(j, "step", "time grid");
    const double steps = require_number(j, "steps", "time grid");
    if (steps < 1 || steps != std::floor(steps)) bad("time grid steps must be a positive integer");
    return convq::TimeGrid::uniform(step, (std::size_t)steps);
  }
  if (kind == "geometric") {
    reject_unknown_keys(j, {"kind", "first_step", "ratio", "steps"}, "time grid");
    const double first = require_number(j, "first_step", "time grid");
    const double ratio = require_number(j, "ratio", "time grid");
    const double steps = require_number(j, "steps", "time grid");
    if (steps < 1 || steps != std::floor(steps)) bad("time grid steps must be a positive integer");
    return convq::TimeGrid::geometric(first, ratio, (std::size_t)steps);
  }
  bad("unknown time grid kind \"" + kind + "\"");
}

fpsolver::ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) bad("top level must be an object");
  reject_unknown_keys(j,
                      {"kernel", "scheme", "spectral_evolution", "potential", "generators",
                       "grid", "u0", "seed", "output_dir", "envelope_slack"},
                      "config");
  fpsolver::ExperimentConfig cfg;
  if (!j.contains("kernel")) bad("missing \"kernel\"");
  cfg.kernel = kernel_from_json(j["kernel"]);

  if (!j.contains("scheme") || !j["scheme"].is_string()) bad("missing \"scheme\" string");
  const std::string scheme = j["scheme"].get<std::string>();
  if (scheme == "nonlocal")
    cfg.scheme = fpsolver::Scheme::Nonlocal;
  else if (scheme == "backward_difference")
    cfg.scheme = fpsolver::Scheme::BackwardDifference;
  else if (scheme == "spectral")
    cfg.scheme = fpsolver::Scheme::Spectral;
  else
    bad("unknown scheme \"" + scheme + "\"");

  if (j.contains("spectral_evolution")) {
    if (scheme != "spectral") bad("spectral_evolution is only valid for the spectral scheme");
    const std::string evo = j["spectral_evolution"].get<std::string>();
    if (evo == "kernel")
      cfg.spectral_evolution = fpsolver::SpectralEvolution::Kernel;
    else if (evo == "classical")
      cfg.spectral_evolution = fpsolver::SpectralEvolution::Classical;
    else if (evo == "backward_euler")
      cfg.spectral_evolution = fpsolver::SpectralEvolution::BackwardEuler;
    else
      bad("unknown spectral_evolution \"" + evo + "\"");
  }

  if (!j.contains("potential") || !j["potential"].is_object()) bad("missing \"potential\" object");
  reject_unknown_keys(j["potential"], {"quadratic"}, "potential");
  cfg.potential_m = require_number(j["potential"], "quadratic", "potential");
  if (!(cfg.potential_m > 0.0)) bad("potential.quadratic must be positive");

  if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty())
    bad("missing nonempty \"generators\" array");
  cfg.generators.clear();
  for (const auto& g : j["generators"]) {
    if (g.is_string() && g.get<std::string>() == "log") {
      cfg.generators.push_back(entropy::EntropyGenerator::logarithmic());
    } else if (g.is_object()) {
      reject_unknown_keys(g, {"power"}, "generator");
      try {
        cfg.generators.push_back(
            entropy::EntropyGenerator::power(require_number(g, "power", "generator")));
      } catch (const std::domain_error& e) {
        bad(e.what());
      }
    } else {
      bad("each generator is \"log\" or {\"power\": beta}");
    }
  }

  if (!j.contains("grid") || !j["grid"].is_object()) bad("missing \"grid\" object");
  reject_unknown_keys(j["grid"], {"L", "N", "time"}, "grid");
  cfg.space.L = require_number(j["grid"], "L", "grid");
  const double n_cells = require_number(j["grid"], "N", "grid");
  if (!(cfg.space.L > 0.0) || n_cells < 3 || n_cells != std::floor(n_cells))
    bad("grid needs L > 0 and integer N >= 3");
  cfg.space.n_cells = (std::size_t)n_cells;
  if (!j["grid"].contains("time")) bad("grid needs a \"time\" object");
  cfg.time = time_grid_from_json(j["grid"]["time"]);

  if (!j.contains("u0") || !j["u0"].is_object() || !j["u0"].contains("mode")) bad("missing u0.mode");
  const std::string mode = j["u0"]["mode"].get<std::string>();
  if (mode == "single_hermite") {
    reject_unknown_keys(j["u0"], {"mode", "k", "amplitude"}, "u0");
    const double k = require_number(j["u0"], "k", "u0");
    if (k < 0 || k != std::floor(k)) bad("u0.k must be a nonnegative integer");
    cfg.u0 = fpsolver::HermiteInit{(unsigned)k, require_number(j["u0"], "amplitude", "u0")};
  } else if (mode == "gaussian_mixture") {
    reject_unknown_keys(j["u0"], {"mode", "components"}, "u0");
    if (!j["u0"].contains("components") || !j["u0"]["components"].is_array() ||
        j["u0"]["components"].empty())
      bad("gaussian_mixture needs components[]");
    fpsolver::GaussianMixtureInit gm;
    for (const auto& c : j["u0"]["components"]) {
      reject_unknown_keys(c, {"weight", "center", "sigma"}, "mixture component");
      gm.components.push_back({require_number(c, "weight", "mixture"),
                               require_number(c, "center", "mixture"),
                               require_number(c, "sigma", "mixture")});
      if (!(gm.components.back().weight > 0.0) || !(gm.components.back().sigma > 0.0))
        bad("mixture weights and sigmas must be positive");
    }
    cfg.u0 = std::move(gm);
  } else if (mode == "file") {
    reject_unknown_keys(j["u0"], {"mode", "path"}, "u0");
    if (!j["u0"].contains("path") || !j["u0"]["path"].is_string()) bad("u0 file needs a path");
    const std::string path = j["u0"]["path"].get<std::string>();
    if (!std::filesystem::exists(path)) bad("u0 file does not exist: " + path);
    cfg.u0 = fpsolver::FileInit{path};
  } else {
    bad("unknown u0.mode \"" + mode + "\"");
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) bad("seed must be an integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("envelope_slack")) cfg.envelope_slack = j["envelope_slack"].get<double>();
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) bad("output_dir must be a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  return cfg;
}

fpsolver::ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    bad(std::string("JSON parse error: ") + e.what());
  }
  return config_from_json(j);
}

nlohmann::json config_to_json(const fpsolver::ExperimentConfig& cfg) {
  json j;
  j["kernel"] = kernel_to_json(cfg.kernel);
  switch (cfg.scheme) {
    case fpsolver::Scheme::Nonlocal: j["scheme"] = "nonlocal"; break;
    case fpsolver::Scheme::BackwardDifference: j["scheme"] = "backward_difference"; break;
    case fpsolver::Scheme::Spectral: j["scheme"] = "spectral"; break;
  }
  if (cfg.scheme == fpsolver::Scheme::Spectral) {
    switch (cfg.spectral_evolution) {
      case fpsolver::SpectralEvolution::Kernel: j["spectral_evolution"] = "kernel"; break;
      case fpsolver::SpectralEvolution::Classical: j["spectral_evolution"] = "classical"; break;
      case fpsolver::SpectralEvolution::BackwardEuler:
        j["spectral_evolution"] = "backward_euler";
        break;
    }
  }
  j["potential"] = {{"quadratic", cfg.potential_m}};
  json gens = json::array();
  for (const auto& g : cfg.generators) {
    if (g.is_power())
      gens.push_back({{"power", g.beta()}});
    else
      gens.push_back("log");
  }
  j["generators"] = gens;
  json time;
  if (cfg.time.is_uniform()) {
    time = {{"kind", "uniform"}, {"step", cfg.time.step(1)}, {"steps", cfg.time.steps()}};
  } else {
    time = {{"kind", "geometric"},
            {"first_step", cfg.time.step(1)},
            {"ratio", cfg.time.step(2) / cfg.time.step(1)},
            {"steps", cfg.time.steps()}};
  }
  j["grid"] = {{"L", cfg.space.L}, {"N", cfg.space.n_cells}, {"time", time}};
  if (const auto* hi = std::get_if<fpsolver::HermiteInit>(&cfg.u0)) {
    j["u0"] = {{"mode", "single_hermite"}, {"k", hi->mode}, {"amplitude", hi->amplitude}};
  } else if (const auto* gm = std::get_if<fpsolver::GaussianMixtureInit>(&cfg.u0)) {
    json comps = json::array();
    for (const auto& c : gm->components)
      comps.push_back({{"weight", c.weight}, {"center", c.center}, {"sigma", c.sigma}});
    j["u0"] = {{"mode", "gaussian_mixture"}, {"components", comps}};
  } else {
    j["u0"] = {{"mode", "file"}, {"path", std::get<fpsolver::FileInit>(cfg.u0).path}};
  }
  j["seed"] = cfg.seed;
  j["envelope_slack"] = cfg.envelope_slack;
  j["output_dir"] = cfg.output_dir;
  return j;
}

std::uint64_t config_hash(const fpsolver::ExperimentConfig& cfg) {
  const std::string dump = config_to_json(cfg).dump();  // nlohmann keeps keys sorted
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace nlfp::cli
