#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "nascd/config.hpp"
#include "nascd/contract.hpp"
#include "nascd/controller.hpp"
#include "nascd/errors.hpp"
#include "nascd/io.hpp"
#include "nascd/jitter.hpp"
#include "nascd/margin.hpp"
#include "nascd/simulator.hpp"

namespace {

namespace fs = std::filesystem;
using namespace nascd;

constexpr int kOk = 0;
constexpr int kVerificationFailure = 1;
constexpr int kInputError = 2;
constexpr int kUnstableLoop = 3;
constexpr int kInfeasibleSynthesis = 4;
constexpr int kRuntimeFault = 5;

std::string num6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.6g", v);
  return buf;
}

std::string describe_margin(const MarginResult& m) {
  std::ostringstream line;
  if (std::isinf(m.j_max)) {
    line << "j_max = inf (loop gain vanishes)";
  } else {
    line << "j_max = " << format_time(m.j_max);
  }
  line << ", omega* = ";
  if (std::isinf(m.omega_star)) {
    line << "inf";
  } else {
    line << num6(m.omega_star) << " rad/s";
  }
  return line.str();
}

const ControllerBank& require_bank(const WorkspaceConfig& cfg) {
  if (!cfg.plant) throw ConfigError("command requires a 'plant' block");
  if (!cfg.controller) throw ConfigError("command requires a 'controller' block");
  return cfg.controller->bank;
}

int cmd_margin(const WorkspaceConfig& cfg) {
  const ControllerBank& bank = require_bank(cfg);
  const auto results = margin_per_state(*cfg.plant, bank, cfg.margin);

  std::ostringstream report;
  report << "jitter margin report\n";
  report << "machine: " << cfg.controller->id << "\n";
  for (const StateMargin& s : results) {
    report << "state " << s.label << ": " << describe_margin(s.margin) << "\n";
    if (cfg.contract) {
      const double bound = effective_period_bound(s.margin.j_max, cfg.contract->h);
      report << "state " << s.label
             << ": effective period bound j_max + h = " << format_time(bound) << "\n";
    }
  }

  for (const StateMargin& s : results) {
    write_profile_csv(cfg.output_dir / ("profile_" + s.label + ".csv"), s.margin.profile);
  }
  write_text_file(cfg.output_dir / "margin_report.txt", report.str());
  std::cout << report.str();
  return kOk;
}

int cmd_synthesize(const WorkspaceConfig& cfg, std::optional<double> rho,
                   std::optional<double> gamma) {
  const ControllerBank& bank = require_bank(cfg);
  if (cfg.contract) {
    throw ConfigError("config already contains a contract block; remove it to synthesize");
  }
  if (!cfg.synthesis) throw ConfigError("synthesize requires a 'synthesis' block");
  if (!cfg.markov) throw ConfigError("synthesize requires a 'markov' block");
  if (!cfg.software) throw ConfigError("synthesize requires a 'software' block");
  if (!cfg.hardware) throw ConfigError("synthesize requires a 'hardware' block");

  SynthesisPolicy policy = cfg.synthesis->policy;
  if (rho) policy.rho = *rho;
  if (gamma) policy.gamma = *gamma;

  const CompositeJitterStats stats = composite_stats(*cfg.hardware, *cfg.software, *cfg.markov);
  const SynthesisResult result =
      synthesize_contract(*cfg.plant, bank, stats, cfg.synthesis->h, cfg.synthesis->tau, policy,
                          cfg.controller->id, cfg.margin);

  std::ostringstream report;
  report << "contract synthesis report\n";
  report << "machine: " << cfg.controller->id << "\n";
  report << "min margin: " << format_time(result.min_margin) << " (state "
         << result.min_margin_state << ")\n";
  report << "allocated jitter budget: gamma * min margin = " << format_time(result.j_total)
         << "\n";
  report << "composite jitter spread sigma_T = " << format_time(result.sigma_t) << "\n";
  report << "candidate contract: h = " << format_time(result.contract.h)
         << ", tau = " << format_time(result.contract.tau)
         << ", J^h = " << format_time(result.contract.j_h)
         << ", J^tau = " << format_time(result.contract.j_tau) << "\n";
  if (result.feasible) {
    report << "feasible: yes\n";
  } else {
    report << "feasible: no\n";
    for (const std::string& v : result.violated) {
      report << "violated: " << v << "\n";
    }
    report << "minimum feasible period: h must exceed " << format_time(result.min_feasible_h)
           << "\n";
  }
  write_text_file(cfg.output_dir / "synthesis_report.txt", report.str());
  std::cout << report.str();

  if (!result.feasible) return kInfeasibleSynthesis;

  nlohmann::ordered_json block;
  block["contract"] = {{"machine", result.contract.machine_id},
                       {"h", result.contract.h},
                       {"tau", result.contract.tau},
                       {"j_h", result.contract.j_h},
                       {"j_tau", result.contract.j_tau}};
  write_text_file(cfg.output_dir / "contract.json", block.dump(2) + "\n");
  return kOk;
}

std::string describe_metrics(const Metrics& m) {
  std::ostringstream out;
  out << "IAE = " << num6(m.iae) << "\n";
  out << "ISE = " << num6(m.ise) << "\n";
  out << "overshoot = " << (m.overshoot ? num6(*m.overshoot) : "n/a") << "\n";
  out << "settling time (2%) = "
      << (m.settling_time ? format_time(*m.settling_time) : "not settled within horizon") << "\n";
  return out.str();
}

int cmd_simulate(const WorkspaceConfig& cfg, std::size_t runs, std::optional<std::uint64_t> seed) {
  Scenario sc = build_scenario(cfg);
  if (seed) sc.seed = *seed;

  if (runs <= 1) {
    const SimResult result = run(sc);
    write_trace_csv(cfg.output_dir / "trace.csv", result.trace);
    write_signals_csv(cfg.output_dir / "signals.csv", result.signals);

    std::ostringstream summary;
    summary << "simulation summary\n";
    summary << "machine: " << sc.contract.machine_id << "\n";
    summary << "samples: " << result.trace.records.size() << "\n";
    summary << "seed: " << sc.seed << "\n";
    summary << describe_metrics(result.metrics);
    summary << "contract satisfied: " << (result.verdict.satisfied ? "yes" : "no") << " ("
            << result.verdict.violations.size() << " violations)\n";
    summary << "late actuations: " << result.late_actuations.size() << "\n";
    if (result.direct_feedthrough) {
      summary << "note: plant has direct feedthrough; sampled y includes the held input\n";
    }
    write_text_file(cfg.output_dir / "summary.txt", summary.str());
    std::cout << summary.str();
    return kOk;
  }

  const MonteCarloReport report = monte_carlo(sc, runs);

  std::ostringstream runs_csv;
  runs_csv << "run,iae,ise,overshoot,settling_time,satisfied\n";
  for (std::size_t i = 0; i < report.runs; ++i) {
    const Metrics& m = report.per_run[i];
    runs_csv << i << ',' << format_double(m.iae) << ',' << format_double(m.ise) << ',';
    if (m.overshoot) runs_csv << format_double(*m.overshoot);
    runs_csv << ',';
    if (m.settling_time) runs_csv << format_double(*m.settling_time);
    runs_csv << ',' << (report.satisfied[i] ? 1 : 0) << '\n';
  }
  write_text_file(cfg.output_dir / "runs.csv", runs_csv.str());

  std::ostringstream agg;
  agg << "monte carlo aggregate\n";
  agg << "runs: " << report.runs << "\n";
  agg << "samples: " << report.sample_count << "\n";
  agg << "base seed: " << sc.seed << "\n";
  agg << "contract pass fraction: " << num6(report.pass_fraction) << "\n";
  agg << "empirical latency mean: " << format_time(report.latency_mean) << "\n";
  agg << "empirical latency std: " << format_time(report.latency_std) << "\n";
  agg << "predicted mean mu_T: " << format_time(report.predicted_mu) << "\n";
  agg << "predicted spread sigma_T: " << format_time(report.predicted_sigma) << "\n";
  write_text_file(cfg.output_dir / "aggregate.txt", agg.str());
  std::cout << agg.str();
  return kOk;
}

int cmd_verify(const WorkspaceConfig& cfg, const fs::path& trace_path) {
  if (!cfg.contract) throw ConfigError("verify requires a 'contract' block");
  const TimingTrace trace = read_trace_csv(trace_path);
  const ContractVerdict verdict = check_trace(*cfg.contract, trace);

  if (verdict.satisfied) {
    std::cout << "contract satisfied: " << trace.records.size() << " records conform\n";
    return kOk;
  }
  write_violations_csv(cfg.output_dir / "violations.csv", verdict.violations);
  std::cout << "contract violated: " << verdict.violations.size() << " violations";
  if (!verdict.violations.empty()) {
    const TraceViolation& first = verdict.violations.front();
    std::cout << "; first at k=" << first.k << " (" << to_string(first.kind) << ")";
  }
  std::cout << "\n";
  return kVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"co-design toolkit for networked automation systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string trace_path;
  std::string out_override;
  std::size_t runs = 1;
  std::optional<double> rho_flag;
  std::optional<double> gamma_flag;
  std::optional<std::uint64_t> seed_flag;

  CLI::App* margin_cmd = app.add_subcommand("margin", "per-state jitter margins and profile CSVs");
  margin_cmd->add_option("config", config_path, "workspace config file")->required();
  margin_cmd->add_option("--out", out_override, "output directory override");

  CLI::App* synth_cmd = app.add_subcommand("synthesize", "derive contract parameters");
  synth_cmd->add_option("config", config_path, "workspace config file")->required();
  synth_cmd->add_option("--out", out_override, "output directory override");
  synth_cmd->add_option("--rho", rho_flag, "sampling/delay jitter split in [0,1]");
  synth_cmd->add_option("--gamma", gamma_flag, "safety factor in (0,1)");

  CLI::App* sim_cmd = app.add_subcommand("simulate", "run the closed loop");
  sim_cmd->add_option("config", config_path, "workspace config file")->required();
  sim_cmd->add_option("--out", out_override, "output directory override");
  sim_cmd->add_option("--runs", runs, "number of Monte Carlo runs")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", seed_flag, "seed override");

  CLI::App* verify_cmd = app.add_subcommand("verify", "check a trace against the contract");
  verify_cmd->add_option("config", config_path, "workspace config file")->required();
  verify_cmd->add_option("trace", trace_path, "timing trace CSV")->required();
  verify_cmd->add_option("--out", out_override, "output directory override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e);
    return kInputError;
  }

  try {
    WorkspaceConfig cfg = load_workspace(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;

    if (app.got_subcommand(margin_cmd)) return cmd_margin(cfg);
    if (app.got_subcommand(synth_cmd)) return cmd_synthesize(cfg, rho_flag, gamma_flag);
    if (app.got_subcommand(sim_cmd)) return cmd_simulate(cfg, runs, seed_flag);
    if (app.got_subcommand(verify_cmd)) return cmd_verify(cfg, trace_path);
    std::cerr << "error: no subcommand selected\n";
    return kInputError;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const MalformedTrace& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvalidContract& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvalidRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ImproperTransferFunction& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const UnknownChannelState& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ReducibleChain& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const UnstableClosedLoop& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnstableLoop;
  } catch (const DegenerateLoop& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnstableLoop;
  } catch (const PoleOnImaginaryAxis& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnstableLoop;
  } catch (const std::exception& e) {
    std::cerr << "fault: " << e.what() << "\n";
    return kRuntimeFault;
  }
}
