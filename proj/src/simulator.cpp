#include "nascd/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "nascd/errors.hpp"

namespace nascd {

namespace {

// Absorbs representation error in duration/h so e.g. 1.0/0.1 still counts as
// ten samples.
constexpr double kCountSlack = 1e-9;

// Slack for the late-actuation fact log, matching the contract checker's.
constexpr double kLateSlack = 1e-12;

std::size_t sample_count_for(double duration, double h) {
  return static_cast<std::size_t>(std::floor(duration / h + kCountSlack));
}

void validate_scenario(const Scenario& sc) {
  const auto violations = validate_parameters(sc.contract);
  if (!violations.empty()) {
    throw InvalidContract("scenario contract is invalid: " + violations.front().detail);
  }
  if (!sc.plant.is_proper()) {
    throw ImproperTransferFunction("plant must be proper for simulation");
  }
  validate(sc.hw);
  validate(sc.sw);
  if (!(sc.duration > 0.0) || sample_count_for(sc.duration, sc.contract.h) == 0) {
    throw InvalidRange("duration must cover at least one sample period");
  }
  for (const std::string& label : sc.net.states()) {
    if (!sc.controller.covers(label)) {
      throw UnknownChannelState("controller bank does not cover channel state '" + label + "'");
    }
  }
  // The chain starts in the controller's declared initial channel state.
  (void)sc.net.index_of(sc.controller.initial_state());
}

struct SampleTiming {
  double t_s = 0.0;
  double delay = 0.0;    // network delay d_k
  double exec = 0.0;     // execution time e_k
  double t_a = 0.0;
  double t_u = 0.0;
  std::size_t state = 0;  // chain state the delay was drawn from
};

// Phase one: all stochastic timing, in sample order, with a pinned draw
// sequence per k (sampling perturbation, then network delay and transition,
// then execution time). Everything downstream is deterministic replay.
std::vector<SampleTiming> generate_timing(const Scenario& sc, std::size_t n,
                                          std::mt19937_64& rng) {
  std::vector<SampleTiming> timing(n);
  std::size_t chain_state = sc.net.index_of(sc.controller.initial_state());
  const double h = sc.contract.h;
  const double j_h = sc.contract.j_h;
  const bool draw_sampling = sc.sampling_jitter == SamplingJitterDist::Uniform && j_h > 0.0;
  const double bcet = sc.sw.bcet();
  const double wcet = sc.sw.wcet();

  for (std::size_t k = 0; k < n; ++k) {
    SampleTiming& s = timing[k];
    double delta = 0.0;
    if (draw_sampling) delta = std::uniform_real_distribution<double>(0.0, j_h)(rng);
    s.t_s = static_cast<double>(k) * h + delta;

    s.state = chain_state;
    const DelaySample d = sample_delay(sc.net, chain_state, rng);
    s.delay = d.delay;
    chain_state = d.next_state;

    s.exec = sc.sw.j_exec > 0.0
                 ? std::uniform_real_distribution<double>(bcet, wcet)(rng)
                 : sc.sw.tau_s;

    s.t_a = s.t_s + s.exec + s.delay + sc.hw.alpha_c;
    s.t_u = s.t_s + s.exec;
  }
  return timing;
}

// Exact zero-order-hold step: the top rows of exp([[A,B],[0,0]] dt) give the
// discrete pair (Ad, Bd) for this interval.
void advance_plant(const StateSpace& ss, Eigen::VectorXd& x, double u, double dt) {
  const auto n = ss.A.rows();
  if (n == 0 || dt <= 0.0) return;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  m.topLeftCorner(n, n) = ss.A * dt;
  m.topRightCorner(n, 1) = ss.B * dt;
  const Eigen::MatrixXd e = m.exp();
  x = e.topLeftCorner(n, n) * x + e.topRightCorner(n, 1) * u;
}

}  // namespace

Metrics compute_metrics(const std::vector<SignalRecord>& signals, const ReferenceSpec& reference,
                        double h) {
  if (signals.empty()) throw InvalidRange("metrics require a non-empty signal series");
  if (!(h > 0.0)) throw InvalidRange("metrics require a positive sample period");

  Metrics m;
  double peak = signals.front().y;
  for (const SignalRecord& s : signals) {
    const double e = reference.value_at(s.t) - s.y;
    m.iae += std::abs(e) * h;
    m.ise += e * e * h;
    peak = std::max(peak, s.y);
  }

  const double y_final = reference.final_value();
  if (y_final != 0.0) {
    m.overshoot = std::max(0.0, (peak - y_final) / std::abs(y_final));
  }

  // First instant after which the output stays inside the 2% band to the end
  // of the horizon.
  const double band = 0.02 * std::abs(y_final);
  std::size_t first_settled = signals.size();
  for (std::size_t i = signals.size(); i-- > 0;) {
    if (std::abs(signals[i].y - y_final) <= band) {
      first_settled = i;
    } else {
      break;
    }
  }
  if (first_settled < signals.size()) m.settling_time = signals[first_settled].t;
  return m;
}

SimResult run(const Scenario& sc) {
  validate_scenario(sc);

  const std::size_t n = sample_count_for(sc.duration, sc.contract.h);
  std::mt19937_64 rng(sc.seed);
  const std::vector<SampleTiming> timing = generate_timing(sc, n, rng);

  const StateSpace ss = to_state_space(sc.plant);
  const double d_term = ss.D(0, 0);

  // Chronological replay: samples and actuations merged on (t, kind, k) with
  // sampling first at ties. Sampling instants are strictly increasing
  // (J^h < h), so controller steps execute in k order.
  struct Event {
    double t;
    int kind;  // 0 sample, 1 actuation
    std::size_t k;
  };
  std::vector<Event> events;
  events.reserve(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    events.push_back({timing[k].t_s, 0, k});
    events.push_back({timing[k].t_a, 1, k});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.k < b.k;
  });

  SimResult result;
  result.direct_feedthrough = d_term != 0.0;
  result.trace.records.resize(n);
  result.signals.resize(n);
  result.channel_states.resize(n);
  result.latencies.resize(n);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(ss.A.rows());
  double u_held = 0.0;
  double t_cur = 0.0;
  MachineState machine = sc.controller.initialize();
  std::vector<double> pending(n, 0.0);

  for (const Event& ev : events) {
    advance_plant(ss, x, u_held, ev.t - t_cur);
    t_cur = std::max(t_cur, ev.t);
    const std::size_t k = ev.k;
    if (ev.kind == 0) {
      const double y = (x.size() > 0 ? (ss.C * x)(0) : 0.0) + d_term * u_held;
      const double r = sc.reference.value_at(ev.t);
      auto stepped = sc.controller.step(machine, y, sc.net.label(timing[k].state),
                                        timing[k].delay, r);
      machine = std::move(stepped.state);
      pending[k] = stepped.output;
      result.signals[k] = {ev.t, y, stepped.output};
    } else {
      u_held = pending[k];
    }
  }

  for (std::size_t k = 0; k < n; ++k) {
    result.trace.records[k] = {k, timing[k].t_s, timing[k].t_a, timing[k].t_u};
    result.channel_states[k] = sc.net.label(timing[k].state);
    result.latencies[k] = timing[k].exec + timing[k].delay + sc.hw.alpha_c;
    if (k + 1 < n && timing[k].t_a >= timing[k + 1].t_s - kLateSlack) {
      result.late_actuations.push_back(k);
    }
  }

  result.metrics = compute_metrics(result.signals, sc.reference, sc.contract.h);
  result.verdict = check_trace(sc.contract, result.trace, ExecPolicy::Serial);
  return result;
}

MonteCarloReport monte_carlo(const Scenario& sc, std::size_t runs, ExecPolicy policy) {
  if (runs == 0) throw InvalidRange("monte_carlo requires at least one run");

  struct RunAgg {
    Metrics metrics;
    bool satisfied = false;
    double lat_sum = 0.0;
    double lat_sumsq = 0.0;
    std::size_t count = 0;
  };
  std::vector<RunAgg> slots(runs);

  const auto run_one = [&](std::size_t i) {
    Scenario local = sc;
    local.seed = sc.seed + i;
    const SimResult r = run(local);
    RunAgg& agg = slots[i];
    agg.metrics = r.metrics;
    agg.satisfied = r.verdict.satisfied;
    for (const double lat : r.latencies) {
      agg.lat_sum += lat;
      agg.lat_sumsq += lat * lat;
    }
    agg.count = r.latencies.size();
  };

  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(runs); ++i) {
      run_one(static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < runs; ++i) run_one(i);
  }

  MonteCarloReport report;
  report.runs = runs;
  report.per_run.reserve(runs);
  report.satisfied.reserve(runs);
  double sum = 0.0;
  double sumsq = 0.0;
  std::size_t count = 0;
  std::size_t passed = 0;
  for (const RunAgg& agg : slots) {
    report.per_run.push_back(agg.metrics);
    report.satisfied.push_back(agg.satisfied);
    if (agg.satisfied) ++passed;
    sum += agg.lat_sum;
    sumsq += agg.lat_sumsq;
    count += agg.count;
  }
  report.pass_fraction = static_cast<double>(passed) / static_cast<double>(runs);
  report.sample_count = count;
  report.latency_mean = sum / static_cast<double>(count);
  const double var = sumsq / static_cast<double>(count) - report.latency_mean * report.latency_mean;
  report.latency_std = std::sqrt(std::max(0.0, var));

  const CompositeJitterStats stats = composite_stats(sc.hw, sc.sw, sc.net);
  report.predicted_mu = stats.mu_t;
  report.predicted_sigma = stats.sigma_t;
  return report;
}

}  // namespace nascd
