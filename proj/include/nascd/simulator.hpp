#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nascd/contract.hpp"
#include "nascd/controller.hpp"
#include "nascd/jitter.hpp"
#include "nascd/lti.hpp"
#include "nascd/parallel.hpp"

namespace nascd {

/// Reference signal: constant level, or a step from 0 to value at step_time.
struct ReferenceSpec {
  enum class Kind { Constant, Step };
  Kind kind = Kind::Constant;
  double value = 0.0;
  double step_time = 0.0;  // seconds, used by Step only

  [[nodiscard]] double value_at(double t) const {
    return kind == Kind::Constant ? value : (t >= step_time ? value : 0.0);
  }
  /// Target level the loop is expected to settle at.
  [[nodiscard]] double final_value() const { return value; }
};

/// Distribution of the sampling perturbation on [0, J^h].
enum class SamplingJitterDist { Uniform, None };

/// Full description of one closed-loop experiment.
struct Scenario {
  TransferFunction plant = TransferFunction::gain(0.0);
  MealySwitchingController controller;
  HardwareJitter hw;
  SoftwareJitter sw;
  MarkovDelayModel net;
  TolcContract contract;
  ReferenceSpec reference;
  double duration = 0.0;  // seconds
  std::uint64_t seed = 0;
  SamplingJitterDist sampling_jitter = SamplingJitterDist::Uniform;
};

/// Per-sample signal log: plant output at the sampling instant and the
/// command computed from it (applied later, at the trace's t_a).
struct SignalRecord {
  double t = 0.0;
  double y = 0.0;
  double u = 0.0;
};

struct Metrics {
  double iae = 0.0;
  double ise = 0.0;
  /// Absent when the reference settles at zero (relative overshoot undefined).
  std::optional<double> overshoot;
  /// Absent when the output never stays inside the 2% band to the horizon.
  std::optional<double> settling_time;
};

struct SimResult {
  TimingTrace trace;
  std::vector<SignalRecord> signals;
  std::vector<std::string> channel_states;  // state each delay was drawn from
  std::vector<double> latencies;            // tau_k = e_k + d_k + alpha_c
  Metrics metrics;
  ContractVerdict verdict;
  /// Samples whose actuation landed at or past the next sampling instant.
  /// Logged as fact; the command is still applied at its own instant.
  std::vector<std::size_t> late_actuations;
  bool direct_feedthrough = false;  // plant has a nonzero D term
};

/// Quality-of-control metrics over the sampled error sequence: IAE and ISE as
/// rectangle sums with width h, relative overshoot against the reference
/// final value, and the 2% settling time.
[[nodiscard]] Metrics compute_metrics(const std::vector<SignalRecord>& signals,
                                      const ReferenceSpec& reference, double h);

/// One seeded run of the loop: timing generated up front in sample order,
/// then events replayed chronologically with the plant advanced exactly
/// (matrix-exponential steps, piecewise-constant input). Bit-reproducible
/// from the scenario alone.
[[nodiscard]] SimResult run(const Scenario& sc);

/// Aggregate of `runs` independent simulations seeded seed, seed+1, ...
struct MonteCarloReport {
  std::size_t runs = 0;
  std::vector<Metrics> per_run;
  std::vector<bool> satisfied;
  double pass_fraction = 0.0;
  std::size_t sample_count = 0;
  double latency_mean = 0.0;  // empirical, across all samples of all runs
  double latency_std = 0.0;   // population form
  double predicted_mu = 0.0;     // composite mean mu_T
  double predicted_sigma = 0.0;  // composite spread sigma_T
};

/// Runs are independent and may execute in parallel; aggregation is in run
/// order, so both policies produce identical reports.
[[nodiscard]] MonteCarloReport monte_carlo(const Scenario& sc, std::size_t runs,
                                           ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace nascd
