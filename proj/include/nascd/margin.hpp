#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nascd/contract.hpp"
#include "nascd/jitter.hpp"
#include "nascd/lti.hpp"
#include "nascd/parallel.hpp"

namespace nascd {

struct MarginProfilePoint {
  double omega = 0.0;  // rad/s
  double bound = 0.0;  // 1 / (|T_u(jw)| * w), seconds; +inf where |T_u| vanishes
};

/// Result of the frequency-domain jitter-margin computation:
/// j_max = inf over omega of 1 / (|T_u(jw)| * w). omega_star is the
/// frequency achieving the infimum (+inf when the high-frequency tail wins).
struct MarginResult {
  double j_max = 0.0;       // seconds
  double omega_star = 0.0;  // rad/s, +inf sentinel for the tail
  std::vector<MarginProfilePoint> profile;
};

/// Logarithmic sweep range and resolution. The defaults cover nine decades
/// around unit-normalized dynamics.
struct SweepOptions {
  double omega_lo = 1e-3;  // rad/s
  double omega_hi = 1e6;   // rad/s
  int grid_points = 2000;
};

/// Maximal total jitter for which the loop tolerates timing perturbations:
/// grid sweep plus golden-section refinement (relative tolerance 1e-8), with
/// the high-frequency tail handled analytically through the relative degree.
/// Throws UnstableClosedLoop unless t_u is Hurwitz stable, InvalidRange on a
/// bad sweep range.
[[nodiscard]] MarginResult jitter_margin(const TransferFunction& t_u,
                                         const SweepOptions& opts = {},
                                         ExecPolicy policy = ExecPolicy::Parallel);

/// Lower bound on the admissible effective sampling period: j_max + h.
[[nodiscard]] double effective_period_bound(double j_max, double h);

/// A per-channel-state controller bank: label plus continuous-time
/// controller transfer function.
using ControllerBank = std::vector<std::pair<std::string, TransferFunction>>;

struct StateMargin {
  std::string label;
  MarginResult margin;
};

/// One jitter margin per bank entry, computed on the closed loop formed with
/// that state's controller. Throws UnstableClosedLoop tagged with the
/// offending state label.
[[nodiscard]] std::vector<StateMargin> margin_per_state(const TransferFunction& plant,
                                                        const ControllerBank& bank,
                                                        const SweepOptions& opts = {},
                                                        ExecPolicy policy = ExecPolicy::Parallel);

/// Margin split between the two contract bounds: fraction rho of the usable
/// margin goes to j_h, the rest to j_tau, after derating by gamma.
struct SynthesisPolicy {
  double rho = 0.5;    // in [0, 1]
  double gamma = 0.8;  // in (0, 1)
};

struct SynthesisResult {
  bool feasible = false;
  TolcContract contract;  // candidate parameters; passes validation iff feasible
  double min_margin = 0.0;
  std::string min_margin_state;
  double j_total = 0.0;        // gamma * min margin
  double sigma_t = 0.0;        // realized jitter spread from the models
  double min_feasible_h = 0.0; // j_h + tau + j_tau; any h above it satisfies the period constraint
  std::vector<std::string> violated;  // names of violated conditions when infeasible
};

/// Synthesis: derate the worst-state margin by gamma, split it per policy,
/// clamp j_tau to tau (excess reassigned to j_h), and accept iff the
/// parameters validate and the realized jitter spread sigma_T fits inside
/// the allocated total. Throws UnstableClosedLoop from the margin
/// computation; InvalidRange for bad h, tau, or policy.
[[nodiscard]] SynthesisResult synthesize_contract(const TransferFunction& plant,
                                                  const ControllerBank& bank,
                                                  const CompositeJitterStats& stats, double h,
                                                  double tau, const SynthesisPolicy& policy = {},
                                                  const std::string& machine_id = "M",
                                                  const SweepOptions& opts = {},
                                                  ExecPolicy exec = ExecPolicy::Parallel);

}  // namespace nascd
