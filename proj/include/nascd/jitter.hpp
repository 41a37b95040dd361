#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace nascd {

/// Constant hardware-induced jitter (drift, conversion, clock effects folded
/// into one slowly-varying term).
struct HardwareJitter {
  double alpha_c = 0.0;  // seconds
};

/// Deterministic software jitter bounded by execution times.
/// BCET = tau_s - j_exec, WCET = tau_s + j_exec.
struct SoftwareJitter {
  double tau_s = 0.0;   // nominal execution time, seconds
  double j_exec = 0.0;  // execution jitter half-width, seconds

  [[nodiscard]] double bcet() const { return tau_s - j_exec; }
  [[nodiscard]] double wcet() const { return tau_s + j_exec; }
};

/// Throws Error on invariant violations (negative alpha_c; j_exec outside
/// [0, tau_s]).
void validate(const HardwareJitter& hw);
void validate(const SoftwareJitter& sw);

enum class DelayFamily { TruncatedNormal, Uniform };

/// Per-channel-state network delay distribution with hard support bounds.
struct StateDelay {
  double mean = 0.0;    // seconds
  double stddev = 0.0;  // seconds
  double min = 0.0;     // support lower bound, seconds
  double max = 0.0;     // support upper bound, seconds
  DelayFamily family = DelayFamily::TruncatedNormal;
};

/// Discrete-time Markov chain over channel-loading states, one delay
/// distribution per state. Construction validates row-stochasticity, the
/// per-state delay invariants, and irreducibility.
class MarkovDelayModel {
 public:
  MarkovDelayModel(std::vector<std::string> states,
                   std::vector<std::vector<double>> transition,
                   std::vector<StateDelay> delays);

  [[nodiscard]] std::size_t state_count() const { return states_.size(); }
  [[nodiscard]] const std::vector<std::string>& states() const { return states_; }
  [[nodiscard]] const std::string& label(std::size_t i) const { return states_.at(i); }
  /// Throws UnknownChannelState for labels outside the chain.
  [[nodiscard]] std::size_t index_of(std::string_view label) const;
  [[nodiscard]] double transition(std::size_t from, std::size_t to) const {
    return transition_[from * states_.size() + to];
  }
  [[nodiscard]] const StateDelay& delay(std::size_t state) const { return delays_.at(state); }
  [[nodiscard]] const std::vector<StateDelay>& delays() const { return delays_; }

 private:
  std::vector<std::string> states_;
  std::vector<double> transition_;  // row-major, row-stochastic
  std::vector<StateDelay> delays_;
};

/// Stationary distribution pi with pi = pi*P and sum(pi) = 1, solved as a
/// linear system (residual <= 1e-12). Throws ReducibleChain if a usable
/// strictly positive solution does not exist.
[[nodiscard]] std::vector<double> stationary_distribution(const MarkovDelayModel& m);

struct NetworkMoments {
  double mu_n = 0.0;     // stationary mixture mean, seconds
  double sigma_n = 0.0;  // stationary mixture standard deviation, seconds
};

/// Long-run delay moments under the stationary state distribution.
[[nodiscard]] NetworkMoments network_moments(const MarkovDelayModel& m);

/// Composite timing statistics: sigma_T = sigma_s + sigma_N + alpha_c with
/// sigma_s taken as the software jitter half-width, and mu_T = tau_s + mu_N.
struct CompositeJitterStats {
  double sigma_t = 0.0;  // total jitter spread, seconds
  double mu_t = 0.0;     // total mean delay, seconds
};

[[nodiscard]] CompositeJitterStats composite_stats(const HardwareJitter& hw,
                                                   const SoftwareJitter& sw,
                                                   const MarkovDelayModel& net);

struct DelaySample {
  double delay = 0.0;
  std::size_t next_state = 0;
};

/// Draws a delay from the current state's distribution (clamped to its
/// support) and the next state from the transition row, in that order.
/// Pure given the rng; identical seeds give identical sequences.
[[nodiscard]] DelaySample sample_delay(const MarkovDelayModel& m, std::size_t current_state,
                                       std::mt19937_64& rng);

}  // namespace nascd
