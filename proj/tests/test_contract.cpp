#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "nascd/contract.hpp"
#include "nascd/errors.hpp"

using namespace nascd;

namespace {

TolcContract stock_contract() {
  return {"M1", 1.5, 0.5, 0.4, 0.4};
}

// Draws a trace that satisfies the contract with margin away from every
// window edge, so slack handling cannot flip the verdict.
TimingTrace conforming_trace(const TolcContract& c, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.05, 0.95);
  TimingTrace tr;
  for (std::size_t k = 0; k < n; ++k) {
    TraceRecord r;
    r.k = k;
    r.t_s = static_cast<double>(k) * c.h + u01(rng) * c.j_h;
    r.t_a = r.t_s + (c.tau - c.j_tau) + u01(rng) * 2.0 * c.j_tau;
    const double deadline = static_cast<double>(k + 1) * c.h;
    r.t_u = r.t_a + u01(rng) * 0.5 * (deadline - r.t_a);
    tr.records.push_back(r);
  }
  return tr;
}

bool has_kind(const ContractVerdict& v, std::size_t k, ViolationKind kind) {
  for (const TraceViolation& tv : v.violations) {
    if (tv.k == k && tv.kind == kind) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("parameter validation accepts the stock contract") {
  CHECK(is_valid(stock_contract()));
  CHECK(validate_parameters(stock_contract()).empty());
}

TEST_CASE("parameter validation rejects each broken clause") {
  SUBCASE("non-positive parameters") {
    TolcContract c = stock_contract();
    c.h = 0.0;
    auto v = validate_parameters(c);
    REQUIRE_FALSE(v.empty());
    CHECK(v.front().kind == ParameterViolation::Kind::NonPositiveParameter);

    c = stock_contract();
    c.tau = -0.1;
    CHECK_FALSE(is_valid(c));
    c = stock_contract();
    c.j_h = 0.0;
    CHECK_FALSE(is_valid(c));
    c = stock_contract();
    c.j_tau = 0.0;
    CHECK_FALSE(is_valid(c));
  }

  SUBCASE("delay jitter above the nominal delay") {
    TolcContract c = stock_contract();
    c.j_tau = 0.6;
    const auto v = validate_parameters(c);
    bool found = false;
    for (const auto& pv : v) found |= pv.kind == ParameterViolation::Kind::DelayJitterExceedsDelay;
    CHECK(found);
  }

  SUBCASE("window sum must stay strictly below the period") {
    TolcContract c = stock_contract();
    c.h = c.j_h + c.tau + c.j_tau;  // equality is already invalid
    const auto v = validate_parameters(c);
    bool found = false;
    for (const auto& pv : v) found |= pv.kind == ParameterViolation::Kind::WindowSumNotBelowPeriod;
    CHECK(found);
    c.h = c.j_h + c.tau + c.j_tau + 1e-9;
    CHECK(is_valid(c));
  }

  SUBCASE("boundary j_tau == tau is allowed") {
    TolcContract c = stock_contract();
    c.j_tau = c.tau;
    c.h = 2.0;  // keep the window-sum clause satisfied
    CHECK(is_valid(c));
  }
}

TEST_CASE("validation against a direct re-evaluation over random tuples") {
  std::mt19937_64 rng(1009);
  std::uniform_real_distribution<double> raw(-0.5, 2.0);
  for (int trial = 0; trial < 20000; ++trial) {
    const TolcContract c = {"M", raw(rng), raw(rng), raw(rng), raw(rng)};
    const bool direct = c.h > 0.0 && c.tau > 0.0 && c.j_h > 0.0 && c.j_tau > 0.0 &&
                        c.j_tau <= c.tau && c.j_h + c.tau + c.j_tau < c.h;
    CHECK(is_valid(c) == direct);
    CHECK(validate_parameters(c).empty() == direct);
  }
}

TEST_CASE("admissible windows have the advertised shape") {
  const TolcContract c = stock_contract();
  const AdmissibleWindows w = admissible_windows(c, 3);
  CHECK(w.sampling.lo == doctest::Approx(4.5));
  CHECK(w.sampling.hi == doctest::Approx(4.9));
  CHECK(w.actuation_lead == doctest::Approx(0.1));
  CHECK(w.actuation_lag == doctest::Approx(0.9));
  CHECK(w.update_deadline == doctest::Approx(6.0));
  const Interval act = w.actuation(4.7);
  CHECK(act.lo == doctest::Approx(4.8));
  CHECK(act.hi == doctest::Approx(5.6));

  TolcContract bad = c;
  bad.j_h = 0.0;
  CHECK_THROWS_AS((void)admissible_windows(bad, 0), InvalidContract);
}

TEST_CASE("trace validation enforces indexing and causality") {
  TimingTrace tr;
  tr.records = {{0, 0.0, 0.5, 0.6}, {1, 1.5, 2.0, 2.1}};
  CHECK_NOTHROW(validate(tr));

  TimingTrace gap = tr;
  gap.records[1].k = 2;
  CHECK_THROWS_AS(validate(gap), MalformedTrace);

  TimingTrace acausal = tr;
  acausal.records[0].t_a = -0.1;
  CHECK_THROWS_AS(validate(acausal), MalformedTrace);
}

TEST_CASE("conforming traces pass and empty traces are trivially satisfied") {
  const TolcContract c = stock_contract();
  std::mt19937_64 rng(2027);
  for (int trial = 0; trial < 20; ++trial) {
    const TimingTrace tr = conforming_trace(c, 200, rng);
    const ContractVerdict v = check_trace(c, tr);
    CHECK(v.satisfied);
    CHECK(v.violations.empty());
  }
  CHECK(check_trace(c, TimingTrace{}).satisfied);
}

TEST_CASE("each single-record perturbation is caught with the right kind") {
  const TolcContract c = stock_contract();
  std::mt19937_64 rng(3001);
  std::uniform_int_distribution<std::size_t> pick(0, 99);

  for (int trial = 0; trial < 200; ++trial) {
    TimingTrace tr = conforming_trace(c, 100, rng);
    const std::size_t k = pick(rng);
    const int what = trial % 3;
    if (what == 0) {
      // Push sampling past its window; move actuation and update along so
      // only the sampling clause breaks.
      const double shift = c.j_h + 0.05;
      const double base = static_cast<double>(k) * c.h;
      const double delta = base + shift - tr.records[k].t_s;
      tr.records[k].t_s += delta;
      tr.records[k].t_a += delta;
      tr.records[k].t_u = std::min(tr.records[k].t_u + delta,
                                   static_cast<double>(k + 1) * c.h - 1e-6);
      const ContractVerdict v = check_trace(c, tr);
      CHECK_FALSE(v.satisfied);
      CHECK(has_kind(v, k, ViolationKind::SamplingWindow));
      CHECK_FALSE(has_kind(v, k, ViolationKind::ActuationWindow));
    } else if (what == 1) {
      tr.records[k].t_a = tr.records[k].t_s + c.tau + c.j_tau + 0.01;
      const ContractVerdict v = check_trace(c, tr);
      CHECK_FALSE(v.satisfied);
      CHECK(has_kind(v, k, ViolationKind::ActuationWindow));
      CHECK_FALSE(has_kind(v, k, ViolationKind::SamplingWindow));
    } else {
      const double deadline = k + 1 < tr.records.size()
                                  ? tr.records[k + 1].t_s
                                  : static_cast<double>(k + 1) * c.h;
      tr.records[k].t_u = deadline + 0.01;
      const ContractVerdict v = check_trace(c, tr);
      CHECK_FALSE(v.satisfied);
      CHECK(has_kind(v, k, ViolationKind::StateUpdateDeadline));
    }
  }
}

TEST_CASE("early actuation violates the lower window edge") {
  const TolcContract c = stock_contract();
  std::mt19937_64 rng(3301);
  TimingTrace tr = conforming_trace(c, 10, rng);
  tr.records[4].t_a = tr.records[4].t_s + (c.tau - c.j_tau) - 0.02;
  const ContractVerdict v = check_trace(c, tr);
  CHECK_FALSE(v.satisfied);
  CHECK(has_kind(v, 4, ViolationKind::ActuationWindow));
}

TEST_CASE("window membership is closed and tolerates 1e-12 slack") {
  const TolcContract c = stock_contract();
  TimingTrace tr;
  TraceRecord r;
  r.k = 0;
  r.t_s = c.j_h;                        // exactly on the upper sampling edge
  r.t_a = r.t_s + c.tau + c.j_tau;      // exactly on the upper actuation edge
  r.t_u = r.t_a + 1e-13;
  tr.records = {r};
  CHECK(check_trace(c, tr).satisfied);

  SUBCASE("slightly beyond slack fails") {
    tr.records[0].t_s = c.j_h + 1e-9;
    tr.records[0].t_a = tr.records[0].t_s + c.tau;
    tr.records[0].t_u = tr.records[0].t_a + 1e-13;
    const ContractVerdict v = check_trace(c, tr);
    CHECK_FALSE(v.satisfied);
    CHECK(has_kind(v, 0, ViolationKind::SamplingWindow));
  }
}

TEST_CASE("state update must land strictly before the next sampling instant") {
  const TolcContract c = stock_contract();
  TimingTrace tr;
  TraceRecord r0;
  r0.k = 0;
  r0.t_s = 0.1;
  r0.t_a = r0.t_s + c.tau;
  TraceRecord r1;
  r1.k = 1;
  r1.t_s = c.h + 0.2;
  r1.t_a = r1.t_s + c.tau;
  r1.t_u = r1.t_s + c.tau + 0.1;

  SUBCASE("equality with the realized next sample violates") {
    r0.t_u = r1.t_s;
    tr.records = {r0, r1};
    const ContractVerdict v = check_trace(c, tr);
    CHECK_FALSE(v.satisfied);
    CHECK(has_kind(v, 0, ViolationKind::StateUpdateDeadline));
  }
  SUBCASE("just before the realized next sample passes") {
    r0.t_u = r1.t_s - 1e-9;
    tr.records = {r0, r1};
    CHECK(check_trace(c, tr).satisfied);
  }
  SUBCASE("the deadline follows the realized sample, not the nominal grid") {
    // Next sample late in its window leaves extra room: t_u after (k+1)h but
    // before the realized t_s must pass.
    r0.t_u = c.h + 0.1;  // past the nominal 1.5, before the realized 1.7
    tr.records = {r0, r1};
    CHECK(check_trace(c, tr).satisfied);
  }
  SUBCASE("the last record falls back to the nominal deadline") {
    TimingTrace solo;
    solo.records = {r0};
    solo.records[0].t_u = c.h;  // equality with (k+1) h violates
    const ContractVerdict v = check_trace(c, solo);
    CHECK_FALSE(v.satisfied);
    CHECK(has_kind(v, 0, ViolationKind::StateUpdateDeadline));
    solo.records[0].t_u = c.h - 1e-9;
    CHECK(check_trace(c, solo).satisfied);
  }
}

TEST_CASE("violations carry the observed instant and the allowed interval") {
  const TolcContract c = stock_contract();
  TimingTrace tr;
  TraceRecord r;
  r.k = 0;
  r.t_s = 1.0;  // window is [0, 0.4]
  r.t_a = r.t_s + c.tau;
  r.t_u = r.t_s + c.tau + 0.01;
  tr.records = {r};
  const ContractVerdict v = check_trace(c, tr);
  REQUIRE_FALSE(v.violations.empty());
  const TraceViolation& tv = v.violations.front();
  CHECK(tv.kind == ViolationKind::SamplingWindow);
  CHECK(tv.observed == doctest::Approx(1.0));
  CHECK(tv.allowed.lo == doctest::Approx(0.0));
  CHECK(tv.allowed.hi == doctest::Approx(0.4));
}

TEST_CASE("violations are enumerated in sample order") {
  const TolcContract c = stock_contract();
  std::mt19937_64 rng(4409);
  TimingTrace tr = conforming_trace(c, 50, rng);
  for (const std::size_t k : {7UL, 21UL, 40UL}) {
    tr.records[k].t_a = tr.records[k].t_s + c.tau + c.j_tau + 0.05;
  }
  const ContractVerdict v = check_trace(c, tr);
  REQUIRE(v.violations.size() >= 3);
  for (std::size_t i = 1; i < v.violations.size(); ++i) {
    CHECK(v.violations[i - 1].k <= v.violations[i].k);
  }
}

TEST_CASE("serial and parallel checking agree exactly") {
  const TolcContract c = stock_contract();
  std::mt19937_64 rng(5501);
  TimingTrace tr = conforming_trace(c, 5000, rng);
  std::uniform_int_distribution<std::size_t> pick(0, tr.records.size() - 1);
  for (int i = 0; i < 37; ++i) {
    TraceRecord& r = tr.records[pick(rng)];
    r.t_a = r.t_s + c.tau + c.j_tau + 0.2;
  }
  const ContractVerdict serial = check_trace(c, tr, ExecPolicy::Serial);
  const ContractVerdict parallel = check_trace(c, tr, ExecPolicy::Parallel);
  CHECK(serial.satisfied == parallel.satisfied);
  REQUIRE(serial.violations.size() == parallel.violations.size());
  for (std::size_t i = 0; i < serial.violations.size(); ++i) {
    CHECK(serial.violations[i].k == parallel.violations[i].k);
    CHECK(serial.violations[i].kind == parallel.violations[i].kind);
    CHECK(serial.violations[i].observed == parallel.violations[i].observed);
    CHECK(serial.violations[i].allowed.lo == parallel.violations[i].allowed.lo);
    CHECK(serial.violations[i].allowed.hi == parallel.violations[i].allowed.hi);
  }
}
