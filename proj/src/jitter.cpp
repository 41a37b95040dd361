#include "nascd/jitter.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "nascd/errors.hpp"

namespace nascd {

namespace {

constexpr double kRowSumTol = 1e-12;

/// Reachability over edges with positive transition probability.
std::vector<bool> reachable_from(const std::vector<double>& p, std::size_t n, std::size_t start,
                                 bool transpose) {
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      const double w = transpose ? p[j * n + i] : p[i * n + j];
      if (w > 0.0 && !seen[j]) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace

void validate(const HardwareJitter& hw) {
  if (!(hw.alpha_c >= 0.0)) {
    throw Error("hardware jitter: alpha_c must be non-negative");
  }
}

void validate(const SoftwareJitter& sw) {
  if (!(sw.j_exec >= 0.0) || !(sw.j_exec <= sw.tau_s)) {
    throw Error("software jitter: j_exec must satisfy 0 <= j_exec <= tau_s");
  }
}

MarkovDelayModel::MarkovDelayModel(std::vector<std::string> states,
                                   std::vector<std::vector<double>> transition,
                                   std::vector<StateDelay> delays)
    : states_(std::move(states)), delays_(std::move(delays)) {
  const std::size_t n = states_.size();
  if (n == 0) {
    throw Error("markov model: at least one state required");
  }
  if (transition.size() != n || delays_.size() != n) {
    throw Error("markov model: transition matrix and delay list must match the state count");
  }
  transition_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (transition[i].size() != n) {
      throw Error("markov model: transition row " + std::to_string(i) + " has wrong length");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double p = transition[i][j];
      if (!(p >= 0.0) || !(p <= 1.0)) {
        throw Error("markov model: transition entries must lie in [0, 1]");
      }
      transition_[i * n + j] = p;
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTol) {
      throw Error("markov model: transition row " + std::to_string(i) + " does not sum to 1");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const StateDelay& d = delays_[i];
    if (!(d.min >= 0.0) || !(d.min <= d.mean) || !(d.mean <= d.max) || !(d.stddev >= 0.0)) {
      throw Error("markov model: state " + states_[i] +
                  " delay must satisfy 0 <= min <= mean <= max and stddev >= 0");
    }
  }
  // Irreducibility: every state reachable from state 0 and vice versa.
  const auto fwd = reachable_from(transition_, n, 0, false);
  const auto bwd = reachable_from(transition_, n, 0, true);
  for (std::size_t i = 0; i < n; ++i) {
    if (!fwd[i] || !bwd[i]) {
      throw ReducibleChain("markov model: chain is not a single communicating class (state " +
                           states_[i] + ")");
    }
  }
}

std::size_t MarkovDelayModel::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i] == label) {
      return i;
    }
  }
  throw UnknownChannelState("unknown channel state: " + std::string(label));
}

std::vector<double> stationary_distribution(const MarkovDelayModel& m) {
  const std::size_t n = m.state_count();
  if (n == 1) {
    return {1.0};
  }
  // pi * P = pi  <=>  (P^T - I) pi = 0, with the last equation replaced by
  // the normalization sum(pi) = 1.
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m.transition(j, i) - (i == j ? 1.0 : 0.0);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(j)) = 1.0;
  }
  b(static_cast<Eigen::Index>(n - 1)) = 1.0;
  Eigen::VectorXd pi = a.fullPivLu().solve(b);

  std::vector<double> out(n);
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = pi(static_cast<Eigen::Index>(i));
    if (!(out[i] > 0.0)) {
      throw ReducibleChain("stationary distribution has a non-positive component");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double acc = -out[i];
    for (std::size_t j = 0; j < n; ++j) {
      acc += out[j] * m.transition(j, i);
    }
    residual = std::max(residual, std::abs(acc));
  }
  if (residual > 1e-12) {
    throw ReducibleChain("stationary distribution residual exceeds 1e-12");
  }
  return out;
}

NetworkMoments network_moments(const MarkovDelayModel& m) {
  const auto pi = stationary_distribution(m);
  double mu = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < m.state_count(); ++i) {
    const StateDelay& d = m.delay(i);
    mu += pi[i] * d.mean;
    second += pi[i] * (d.stddev * d.stddev + d.mean * d.mean);
  }
  const double var = std::max(0.0, second - mu * mu);
  return {mu, std::sqrt(var)};
}

CompositeJitterStats composite_stats(const HardwareJitter& hw, const SoftwareJitter& sw,
                                     const MarkovDelayModel& net) {
  validate(hw);
  validate(sw);
  const NetworkMoments nm = network_moments(net);
  return {sw.j_exec + nm.sigma_n + hw.alpha_c, sw.tau_s + nm.mu_n};
}

DelaySample sample_delay(const MarkovDelayModel& m, std::size_t current_state,
                         std::mt19937_64& rng) {
  if (current_state >= m.state_count()) {
    throw UnknownChannelState("sample_delay: state index out of range");
  }
  const StateDelay& d = m.delay(current_state);
  double delay = 0.0;
  switch (d.family) {
    case DelayFamily::Uniform:
      delay = d.min == d.max ? d.min : std::uniform_real_distribution<double>(d.min, d.max)(rng);
      break;
    case DelayFamily::TruncatedNormal:
      delay = d.stddev == 0.0 ? d.mean : std::normal_distribution<double>(d.mean, d.stddev)(rng);
      break;
  }
  delay = std::clamp(delay, d.min, d.max);

  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double cumulative = 0.0;
  std::size_t next = m.state_count() - 1;
  for (std::size_t j = 0; j < m.state_count(); ++j) {
    cumulative += m.transition(current_state, j);
    if (u < cumulative) {
      next = j;
      break;
    }
  }
  return {delay, next};
}

}  // namespace nascd
