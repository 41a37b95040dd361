#include "nascd/contract.hpp"

#include <array>
#include <cmath>

#include "nascd/errors.hpp"

namespace nascd {

namespace {

constexpr double kSlack = 1e-12;  // absolute boundary slack, seconds

void append_positivity(std::vector<ParameterViolation>& out, double value, const char* name) {
  if (!(value > 0.0)) {
    out.push_back({ParameterViolation::Kind::NonPositiveParameter,
                   std::string(name) + " must be strictly positive"});
  }
}

struct RecordFindings {
  int count = 0;
  std::array<TraceViolation, 3> v;
};

RecordFindings check_record(const TolcContract& c, const TimingTrace& tr, std::size_t k) {
  RecordFindings out;
  const TraceRecord& r = tr.records[k];
  const AdmissibleWindows w = admissible_windows(c, k);
  if (!w.sampling.contains(r.t_s, kSlack)) {
    out.v[out.count++] = {k, ViolationKind::SamplingWindow, r.t_s, w.sampling};
  }
  const Interval act = w.actuation(r.t_s);
  if (!act.contains(r.t_a, kSlack)) {
    out.v[out.count++] = {k, ViolationKind::ActuationWindow, r.t_a, act};
  }
  // Batch verification checks against the realized next sampling instant;
  // the last record falls back to the nominal deadline (k+1)h. The update
  // must land strictly before the deadline, so equality is a violation and
  // no slack applies here.
  const double deadline =
      k + 1 < tr.records.size() ? tr.records[k + 1].t_s : w.update_deadline;
  if (r.t_u >= deadline) {
    out.v[out.count++] = {k, ViolationKind::StateUpdateDeadline, r.t_u, Interval{r.t_s, deadline}};
  }
  return out;
}

}  // namespace

std::vector<ParameterViolation> validate_parameters(const TolcContract& c) {
  std::vector<ParameterViolation> out;
  append_positivity(out, c.h, "h");
  append_positivity(out, c.tau, "tau");
  append_positivity(out, c.j_h, "j_h");
  append_positivity(out, c.j_tau, "j_tau");
  if (!(c.j_tau <= c.tau)) {
    out.push_back({ParameterViolation::Kind::DelayJitterExceedsDelay,
                   "j_tau must not exceed tau"});
  }
  if (!(c.j_h + c.tau + c.j_tau < c.h)) {
    out.push_back({ParameterViolation::Kind::WindowSumNotBelowPeriod,
                   "j_h + tau + j_tau must be strictly less than h"});
  }
  return out;
}

bool is_valid(const TolcContract& c) { return validate_parameters(c).empty(); }

void validate(const TimingTrace& tr) {
  for (std::size_t i = 0; i < tr.records.size(); ++i) {
    const TraceRecord& r = tr.records[i];
    if (r.k != i) {
      throw MalformedTrace("trace indices must run 0..n-1 without gaps");
    }
    if (!(r.t_s <= r.t_a) || !(r.t_s <= r.t_u)) {
      throw MalformedTrace("trace record " + std::to_string(i) +
                           " breaks causality (t_s <= t_a and t_s <= t_u)");
    }
  }
}

AdmissibleWindows admissible_windows(const TolcContract& c, std::size_t k) {
  if (!is_valid(c)) {
    throw InvalidContract("admissible_windows: contract parameters are invalid");
  }
  const double kh = static_cast<double>(k) * c.h;
  return {Interval{kh, kh + c.j_h}, c.tau - c.j_tau, c.tau + c.j_tau,
          static_cast<double>(k + 1) * c.h};
}

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::SamplingWindow:
      return "SamplingWindow";
    case ViolationKind::ActuationWindow:
      return "ActuationWindow";
    case ViolationKind::StateUpdateDeadline:
      return "StateUpdateDeadline";
  }
  return "?";
}

ContractVerdict check_trace(const TolcContract& c, const TimingTrace& tr, ExecPolicy policy) {
  if (!is_valid(c)) {
    throw InvalidContract("check_trace: contract parameters are invalid");
  }
  validate(tr);
  const std::size_t n = tr.records.size();
  std::vector<RecordFindings> found(n);
  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      found[static_cast<std::size_t>(i)] = check_record(c, tr, static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      found[i] = check_record(c, tr, i);
    }
  }
  ContractVerdict verdict;
  for (const RecordFindings& f : found) {
    for (int i = 0; i < f.count; ++i) {
      verdict.violations.push_back(f.v[static_cast<std::size_t>(i)]);
    }
  }
  verdict.satisfied = verdict.violations.empty();
  return verdict;
}

}  // namespace nascd
