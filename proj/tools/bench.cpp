#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "nascd/contract.hpp"
#include "nascd/controller.hpp"
#include "nascd/jitter.hpp"
#include "nascd/lti.hpp"
#include "nascd/margin.hpp"
#include "nascd/parallel.hpp"
#include "nascd/simulator.hpp"

namespace {

using namespace nascd;
using Clock = std::chrono::steady_clock;

double time_ms(const auto& fn) {
  const auto start = Clock::now();
  fn();
  const auto stop = Clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-24s %12.1f ms %12.1f ms %9.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

void require(bool ok, const char* what) {
  if (!ok) {
    std::fprintf(stderr, "mismatch between serial and parallel results: %s\n", what);
    std::exit(1);
  }
}

MarkovDelayModel bench_network() {
  return {{"Low", "High"},
          {{0.9, 0.1}, {0.2, 0.8}},
          {{0.3, 0.057735026918962574, 0.2, 0.4, DelayFamily::Uniform},
           {0.4, 0.057735026918962574, 0.3, 0.5, DelayFamily::Uniform}}};
}

Scenario bench_scenario() {
  const TransferFunction plant(Polynomial({1.0}), Polynomial({0.0, 1.0}));
  const ControllerBank bank = {{"Low", TransferFunction::gain(1.0)},
                               {"High", TransferFunction::gain(1.0)}};
  return Scenario{
      .plant = plant,
      .controller = make_switching_controller(bank, 1.5, "Low", "M1"),
      .hw = HardwareJitter{0.05},
      .sw = SoftwareJitter{0.15, 0.05},
      .net = bench_network(),
      .contract = TolcContract{"M1", 1.5, 0.5, 0.4, 0.4},
      .reference = ReferenceSpec{ReferenceSpec::Kind::Step, 1.0, 0.0},
      .duration = 3000.0,
      .seed = 20260814,
      .sampling_jitter = SamplingJitterDist::Uniform,
  };
}

void bench_margin() {
  const TransferFunction t_u(Polynomial({1.0}), Polynomial({1.0, 1.0, 1.0}));
  SweepOptions opts;
  opts.grid_points = 200000;

  MarginResult serial;
  MarginResult parallel;
  const double s_ms = time_ms([&] { serial = jitter_margin(t_u, opts, ExecPolicy::Serial); });
  const double p_ms = time_ms([&] { parallel = jitter_margin(t_u, opts, ExecPolicy::Parallel); });

  require(serial.j_max == parallel.j_max, "margin j_max");
  require(serial.omega_star == parallel.omega_star, "margin omega_star");
  require(serial.profile.size() == parallel.profile.size(), "margin profile length");
  for (std::size_t i = 0; i < serial.profile.size(); ++i) {
    require(serial.profile[i].omega == parallel.profile[i].omega, "margin profile omega");
    require(serial.profile[i].bound == parallel.profile[i].bound, "margin profile bound");
  }
  report("margin sweep 200k", s_ms, p_ms);
}

void bench_monte_carlo() {
  const Scenario sc = bench_scenario();
  constexpr std::size_t kRuns = 100;

  MonteCarloReport serial;
  MonteCarloReport parallel;
  const double s_ms = time_ms([&] { serial = monte_carlo(sc, kRuns, ExecPolicy::Serial); });
  const double p_ms = time_ms([&] { parallel = monte_carlo(sc, kRuns, ExecPolicy::Parallel); });

  require(serial.pass_fraction == parallel.pass_fraction, "monte carlo pass fraction");
  require(serial.latency_mean == parallel.latency_mean, "monte carlo latency mean");
  require(serial.latency_std == parallel.latency_std, "monte carlo latency std");
  for (std::size_t i = 0; i < kRuns; ++i) {
    require(serial.per_run[i].iae == parallel.per_run[i].iae, "monte carlo per-run IAE");
    require(serial.per_run[i].ise == parallel.per_run[i].ise, "monte carlo per-run ISE");
  }
  report("monte carlo 100x2000", s_ms, p_ms);
}

void bench_check_trace() {
  const TolcContract contract{"M1", 1.5, 0.5, 0.4, 0.4};
  constexpr std::size_t kRecords = 2000000;
  TimingTrace trace;
  trace.records.resize(kRecords);
  for (std::size_t k = 0; k < kRecords; ++k) {
    const double t_s = static_cast<double>(k) * contract.h + 0.2;
    trace.records[k] = {k, t_s, t_s + 0.5, t_s + 0.2};
  }

  ContractVerdict serial;
  ContractVerdict parallel;
  const double s_ms =
      time_ms([&] { serial = check_trace(contract, trace, ExecPolicy::Serial); });
  const double p_ms =
      time_ms([&] { parallel = check_trace(contract, trace, ExecPolicy::Parallel); });

  require(serial.satisfied == parallel.satisfied, "verdict flag");
  require(serial.violations.size() == parallel.violations.size(), "violation count");
  report("check_trace 2M", s_ms, p_ms);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", hardware_threads());
  std::printf("%-24s %15s %15s %10s\n", "kernel", "serial", "parallel", "speedup");
  bench_margin();
  bench_monte_carlo();
  bench_check_trace();
  std::printf("all parallel results identical to serial reference\n");
  return 0;
}
