#include "nascd/margin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nascd/errors.hpp"

namespace nascd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRefineRelTol = 1e-8;

/// |T_u(jw)| * w, the quantity whose supremum sets the margin.
double gain_times_omega(const TransferFunction& t_u, double omega) {
  return std::abs(evaluate(t_u, omega)) * omega;
}

/// Golden-section maximization of gain_times_omega over [lo, hi] in
/// log-frequency, to relative tolerance kRefineRelTol on omega.
std::pair<double, double> refine_peak(const TransferFunction& t_u, double lo, double hi) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = std::log(lo);
  double b = std::log(hi);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = gain_times_omega(t_u, std::exp(x1));
  double f2 = gain_times_omega(t_u, std::exp(x2));
  while (b - a > kRefineRelTol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = gain_times_omega(t_u, std::exp(x2));
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = gain_times_omega(t_u, std::exp(x1));
    }
  }
  const double omega = std::exp(0.5 * (a + b));
  return {omega, gain_times_omega(t_u, omega)};
}

}  // namespace

MarginResult jitter_margin(const TransferFunction& t_u, const SweepOptions& opts,
                           ExecPolicy policy) {
  if (!(opts.omega_lo > 0.0) || !(opts.omega_hi > opts.omega_lo) || opts.grid_points < 2) {
    throw InvalidRange("jitter_margin: need 0 < omega_lo < omega_hi and grid_points >= 2");
  }
  if (!is_hurwitz_stable(t_u)) {
    throw UnstableClosedLoop("jitter_margin: closed loop is not Hurwitz stable");
  }

  const int n = opts.grid_points;
  const double log_lo = std::log(opts.omega_lo);
  const double step = (std::log(opts.omega_hi) - log_lo) / static_cast<double>(n - 1);

  std::vector<double> f(static_cast<std::size_t>(n));
  MarginResult result;
  result.profile.resize(static_cast<std::size_t>(n));
  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      const double omega = std::exp(log_lo + step * i);
      const double fi = gain_times_omega(t_u, omega);
      f[static_cast<std::size_t>(i)] = fi;
      result.profile[static_cast<std::size_t>(i)] = {omega, fi > 0.0 ? 1.0 / fi : kInf};
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const double omega = std::exp(log_lo + step * i);
      const double fi = gain_times_omega(t_u, omega);
      f[static_cast<std::size_t>(i)] = fi;
      result.profile[static_cast<std::size_t>(i)] = {omega, fi > 0.0 ? 1.0 / fi : kInf};
    }
  }

  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (f[static_cast<std::size_t>(i)] > f[static_cast<std::size_t>(best)]) {
      best = i;
    }
  }

  const double bracket_lo = std::exp(log_lo + step * std::max(0, best - 1));
  const double bracket_hi = std::exp(log_lo + step * std::min(n - 1, best + 1));
  auto [omega_star, f_star] = refine_peak(t_u, bracket_lo, bracket_hi);
  if (f[static_cast<std::size_t>(best)] > f_star) {
    omega_star = result.profile[static_cast<std::size_t>(best)].omega;
    f_star = f[static_cast<std::size_t>(best)];
  }

  // High-frequency tail by relative degree: |T_u(jw)| ~ |b_lead| w^{-r} with
  // a monic denominator, so |T_u| * w diverges for r = 0, tends to |b_lead|
  // for r = 1, and vanishes for r >= 2.
  const int r = t_u.relative_degree();
  if (t_u.num().is_zero()) {
    result.j_max = kInf;
    result.omega_star = std::numeric_limits<double>::quiet_NaN();
    return result;
  }
  if (r <= 0) {
    result.j_max = 0.0;
    result.omega_star = kInf;
    return result;
  }
  if (r == 1) {
    const double tail = std::abs(t_u.num().leading());
    if (tail > f_star) {
      f_star = tail;
      omega_star = kInf;
    }
  }

  result.j_max = f_star > 0.0 ? 1.0 / f_star : kInf;
  result.omega_star = omega_star;
  return result;
}

double effective_period_bound(double j_max, double h) {
  if (!(j_max >= 0.0) || !(h > 0.0)) {
    throw InvalidRange("effective_period_bound: need j_max >= 0 and h > 0");
  }
  return j_max + h;
}

std::vector<StateMargin> margin_per_state(const TransferFunction& plant,
                                          const ControllerBank& bank, const SweepOptions& opts,
                                          ExecPolicy policy) {
  std::vector<StateMargin> out;
  out.reserve(bank.size());
  for (const auto& [label, controller] : bank) {
    const TransferFunction loop = closed_loop(plant, controller);
    if (!is_hurwitz_stable(loop)) {
      throw UnstableClosedLoop("closed loop unstable for channel state " + label);
    }
    out.push_back({label, jitter_margin(loop, opts, policy)});
  }
  return out;
}

SynthesisResult synthesize_contract(const TransferFunction& plant, const ControllerBank& bank,
                                    const CompositeJitterStats& stats, double h, double tau,
                                    const SynthesisPolicy& policy, const std::string& machine_id,
                                    const SweepOptions& opts, ExecPolicy exec) {
  if (!(h > 0.0) || !(tau > 0.0)) {
    throw InvalidRange("synthesize_contract: need h > 0 and tau > 0");
  }
  if (bank.empty()) {
    throw InvalidRange("synthesize_contract: controller bank is empty");
  }
  if (!(policy.rho >= 0.0) || !(policy.rho <= 1.0) || !(policy.gamma > 0.0) ||
      !(policy.gamma < 1.0)) {
    throw InvalidRange("synthesize_contract: need rho in [0,1] and gamma in (0,1)");
  }

  const auto margins = margin_per_state(plant, bank, opts, exec);
  SynthesisResult result;
  result.min_margin = kInf;
  for (const auto& sm : margins) {
    if (sm.margin.j_max < result.min_margin) {
      result.min_margin = sm.margin.j_max;
      result.min_margin_state = sm.label;
    }
  }

  result.j_total = policy.gamma * result.min_margin;
  double j_h = policy.rho * result.j_total;
  double j_tau = (1.0 - policy.rho) * result.j_total;
  if (j_tau > tau) {
    j_h += j_tau - tau;
    j_tau = tau;
  }

  result.contract = {machine_id, h, tau, j_h, j_tau};
  result.sigma_t = stats.sigma_t;
  result.min_feasible_h = j_h + tau + j_tau;

  for (const auto& violation : validate_parameters(result.contract)) {
    result.violated.push_back(violation.detail);
  }
  if (!(stats.sigma_t <= result.j_total)) {
    result.violated.push_back("realized jitter spread sigma_T exceeds the allocated margin");
  }
  result.feasible = result.violated.empty();
  return result;
}

}  // namespace nascd
