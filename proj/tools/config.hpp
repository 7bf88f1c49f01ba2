#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "nlfp/convq.hpp"
#include "nlfp/fpsolver.hpp"
#include "nlfp/kernels.hpp"

namespace nlfp::cli {

/// Kernel flag syntax shared by the CLI and the JSON config:
/// frac:A | tempered:A,G | multiterm:D1,A1,D2,A2,... | distributed
kernels::KernelSpec parse_kernel_flag(const std::string& flag);

nlohmann::json kernel_to_json(const kernels::KernelSpec& spec);
kernels::KernelSpec kernel_from_json(const nlohmann::json& j);

convq::TimeGrid time_grid_from_json(const nlohmann::json& j);

/// Strict parse: unknown keys anywhere reject the config, referenced files
/// must exist. Throws std::invalid_argument with a message naming the issue.
fpsolver::ExperimentConfig config_from_json(const nlohmann::json& j);
fpsolver::ExperimentConfig load_config(const std::string& path);

nlohmann::json config_to_json(const fpsolver::ExperimentConfig& cfg);

/// FNV-1a over the canonical (sorted-key) dump; stable across runs.
std::uint64_t config_hash(const fpsolver::ExperimentConfig& cfg);

}  // namespace nlfp::cli
