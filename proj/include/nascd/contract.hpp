#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nascd/parallel.hpp"

namespace nascd {

/// Timing-tolerance contract: nominal period h, nominal sensor-to-actuator
/// delay tau, and the admissible jitter bounds on each. Valid contracts have
/// all parameters strictly positive, j_tau <= tau, and j_h + tau + j_tau < h.
struct TolcContract {
  std::string machine_id;
  double h = 0.0;      // seconds
  double tau = 0.0;    // seconds
  double j_h = 0.0;    // sampling jitter bound, seconds
  double j_tau = 0.0;  // delay jitter bound, seconds
};

/// One violated parameter constraint (violations are data, not errors).
struct ParameterViolation {
  enum class Kind {
    NonPositiveParameter,
    DelayJitterExceedsDelay,
    WindowSumNotBelowPeriod,
  };
  Kind kind;
  std::string detail;
};

/// Reports every violated constraint; empty means valid.
[[nodiscard]] std::vector<ParameterViolation> validate_parameters(const TolcContract& c);
[[nodiscard]] bool is_valid(const TolcContract& c);

/// Timing facts for one sample: sampling instant, actuation instant, and
/// state-update completion instant, absolute seconds from t = 0.
struct TraceRecord {
  std::size_t k = 0;
  double t_s = 0.0;
  double t_a = 0.0;
  double t_u = 0.0;
};

struct TimingTrace {
  std::vector<TraceRecord> records;
};

/// Throws MalformedTrace unless indices run 0..n-1 without gaps and every
/// record satisfies t_s <= t_a and t_s <= t_u.
void validate(const TimingTrace& tr);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] bool contains(double t, double slack) const {
    return t >= lo - slack && t <= hi + slack;
  }
};

/// The admissible windows for sample k. The actuation window depends on the
/// realized sampling instant and is exposed as offsets around it; the
/// state-update deadline is the earliest admissible next sampling instant.
struct AdmissibleWindows {
  Interval sampling;        // [kh, kh + j_h]
  double actuation_lead;    // tau - j_tau
  double actuation_lag;     // tau + j_tau
  double update_deadline;   // (k+1) h

  [[nodiscard]] Interval actuation(double t_s) const {
    return {t_s + actuation_lead, t_s + actuation_lag};
  }
};

/// Throws InvalidContract when validate_parameters is non-empty.
[[nodiscard]] AdmissibleWindows admissible_windows(const TolcContract& c, std::size_t k);

enum class ViolationKind { SamplingWindow, ActuationWindow, StateUpdateDeadline };

[[nodiscard]] const char* to_string(ViolationKind k);

struct TraceViolation {
  std::size_t k = 0;
  ViolationKind kind = ViolationKind::SamplingWindow;
  double observed = 0.0;
  Interval allowed;  // deadline clauses report [t_s, deadline]
};

struct ContractVerdict {
  bool satisfied = true;
  std::vector<TraceViolation> violations;
};

/// Checks every record against its windows and the state-update deadline
/// (realized next sampling instant; nominal (k+1)h for the last record).
/// Interval membership is closed with absolute slack 1e-12 s. Enumerates all
/// violations in k order. Per-record checks are independent, so the Parallel
/// policy partitions records across threads; both policies return identical
/// verdicts.
[[nodiscard]] ContractVerdict check_trace(const TolcContract& c, const TimingTrace& tr,
                                          ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace nascd
