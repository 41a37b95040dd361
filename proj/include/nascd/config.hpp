#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nascd/contract.hpp"
#include "nascd/jitter.hpp"
#include "nascd/lti.hpp"
#include "nascd/margin.hpp"
#include "nascd/simulator.hpp"

namespace nascd {

/// Controller bank as declared: per-channel-state continuous-time transfer
/// functions; discretization happens later against the contract's h.
struct ControllerSpec {
  std::string id = "M";
  std::string initial_state;
  std::vector<std::pair<std::string, TransferFunction>> bank;
};

struct ScenarioSpec {
  double duration = 0.0;
  std::uint64_t seed = 0;
  ReferenceSpec reference;
  SamplingJitterDist sampling_jitter = SamplingJitterDist::Uniform;
};

struct SynthesisConfig {
  double h = 0.0;
  double tau = 0.0;
  SynthesisPolicy policy;
};

/// One declarative workspace file describes a whole experiment; which blocks
/// must be present depends on the subcommand. A workspace carries either a
/// contract (ready to simulate or verify) or a synthesis request, never both.
struct WorkspaceConfig {
  std::optional<TransferFunction> plant;
  std::optional<ControllerSpec> controller;
  std::optional<MarkovDelayModel> markov;
  std::optional<SoftwareJitter> software;
  std::optional<HardwareJitter> hardware;
  std::optional<TolcContract> contract;
  std::optional<SynthesisConfig> synthesis;
  SweepOptions margin;
  std::optional<ScenarioSpec> scenario;
  std::filesystem::path output_dir;
};

/// Parses and validates the JSON workspace file. Unknown keys anywhere are
/// rejected; all failures surface as ConfigError. The output directory
/// resolves as config value, then NASCD_OUTPUT_DIR, then "out".
[[nodiscard]] WorkspaceConfig load_workspace(const std::filesystem::path& path);

/// Assembles the simulation scenario; throws ConfigError naming the first
/// missing block.
[[nodiscard]] Scenario build_scenario(const WorkspaceConfig& cfg);

}  // namespace nascd
