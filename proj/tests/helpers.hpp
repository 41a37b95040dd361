#pragma once

// Shared fixtures for the unit and acceptance suites: the P = 1/s testbed
// scenario, scratch directories, file helpers, and a CLI subprocess runner.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nascd/jitter.hpp"
#include "nascd/lti.hpp"
#include "nascd/margin.hpp"
#include "nascd/simulator.hpp"

namespace testkit {

inline nascd::TransferFunction integrator_plant() {
  return {nascd::Polynomial({1.0}), nascd::Polynomial({0.0, 1.0})};
}

inline nascd::MarkovDelayModel testbed_network() {
  return {{"Low", "High"},
          {{0.9, 0.1}, {0.2, 0.8}},
          {{0.3, 0.057735026918962574, 0.2, 0.4, nascd::DelayFamily::Uniform},
           {0.4, 0.057735026918962574, 0.3, 0.5, nascd::DelayFamily::Uniform}}};
}

// The P = 1/s, C = 1 loop (jitter margin exactly 1.0) with two channel
// states and every latency component confined inside the contract windows:
// total latency in [0.35, 0.75] against tau +- J^tau = [0.1, 0.9], sampling
// perturbation in [0, 0.4] = [0, J^h].
inline nascd::Scenario testbed_scenario(std::uint64_t seed, double duration) {
  const nascd::ControllerBank bank = {{"Low", nascd::TransferFunction::gain(1.0)},
                                      {"High", nascd::TransferFunction::gain(1.0)}};
  return nascd::Scenario{
      .plant = integrator_plant(),
      .controller = nascd::make_switching_controller(bank, 1.5, "Low", "M1"),
      .hw = nascd::HardwareJitter{0.05},
      .sw = nascd::SoftwareJitter{0.15, 0.05},
      .net = testbed_network(),
      .contract = nascd::TolcContract{"M1", 1.5, 0.5, 0.4, 0.4},
      .reference = nascd::ReferenceSpec{nascd::ReferenceSpec::Kind::Step, 1.0, 0.0},
      .duration = duration,
      .seed = seed,
      .sampling_jitter = nascd::SamplingJitterDist::Uniform,
  };
}

// Fresh scratch directory under the system temp root; wiped on creation so
// reruns start clean.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / ("nascd_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void spit(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (const char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

// Runs the CLI with stdout+stderr captured to a file; returns the exit code.
inline int run_cli(const std::string& args, const std::filesystem::path& capture) {
  const std::string cmd = std::string(NASCD_CLI_BIN) + " " + args + " > " +
                          capture.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

}  // namespace testkit
