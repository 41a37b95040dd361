#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"

#include "nascd/errors.hpp"
#include "nascd/io.hpp"
#include "helpers.hpp"

using namespace nascd;

TEST_CASE("format_double round-trips exactly") {
  std::mt19937_64 rng(9001);
  std::uniform_real_distribution<double> mag(-1e6, 1e6);
  for (int trial = 0; trial < 2000; ++trial) {
    const double v = mag(rng) * std::pow(10.0, trial % 7 - 3);
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
  CHECK(std::stod(format_double(0.1)) == 0.1);
}

TEST_CASE("format_time picks the unit by magnitude") {
  CHECK(format_time(1.0) == "1.00000 s");
  CHECK(format_time(0.2) == "200.000 ms");
  CHECK(format_time(1.5) == "1.50000 s");
  CHECK(format_time(0.0) == "0.00000 s");
  CHECK(format_time(0.1746) == "174.600 ms");
  CHECK(format_time(-0.25) == "-250.000 ms");
  CHECK(format_time(12.345678) == "12.3457 s");
}

TEST_CASE("trace csv writes the documented shape and round-trips") {
  const auto dir = testkit::scratch_dir("io_trace");
  TimingTrace tr;
  tr.records = {{0, 0.05, 0.55, 0.25}, {1, 1.52, 2.08, 1.71}, {2, 3.01, 3.55, 3.22}};
  const auto path = dir / "trace.csv";
  write_trace_csv(path, tr);

  const std::string text = testkit::slurp(path);
  CHECK(text.rfind("k,t_s,t_a,t_u\n", 0) == 0);
  CHECK(testkit::line_count(text) == 4);

  const TimingTrace back = read_trace_csv(path);
  REQUIRE(back.records.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.records[i].k == tr.records[i].k);
    CHECK(back.records[i].t_s == tr.records[i].t_s);
    CHECK(back.records[i].t_a == tr.records[i].t_a);
    CHECK(back.records[i].t_u == tr.records[i].t_u);
  }
}

TEST_CASE("trace round-trip preserves full double precision") {
  const auto dir = testkit::scratch_dir("io_precision");
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TimingTrace tr;
  double t = 0.0;
  for (std::size_t k = 0; k < 500; ++k) {
    t += u(rng);
    const double ts = t;
    const double ta = ts + u(rng);
    const double tu = ts + u(rng);
    tr.records.push_back({k, ts, ta, tu});
  }
  const auto path = dir / "trace.csv";
  write_trace_csv(path, tr);
  const TimingTrace back = read_trace_csv(path);
  REQUIRE(back.records.size() == tr.records.size());
  for (std::size_t i = 0; i < tr.records.size(); ++i) {
    CHECK(back.records[i].t_s == tr.records[i].t_s);
    CHECK(back.records[i].t_a == tr.records[i].t_a);
    CHECK(back.records[i].t_u == tr.records[i].t_u);
  }
}

TEST_CASE("the trace reader is strict about its format") {
  const auto dir = testkit::scratch_dir("io_strict");
  const auto path = dir / "t.csv";

  SUBCASE("wrong header") {
    testkit::spit(path, "k,ts,ta,tu\n0,0.1,0.2,0.3\n");
    CHECK_THROWS_AS((void)read_trace_csv(path), MalformedTrace);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS((void)read_trace_csv(dir / "absent.csv"), MalformedTrace);
  }
  SUBCASE("too few fields") {
    testkit::spit(path, "k,t_s,t_a,t_u\n0,0.1,0.2\n");
    CHECK_THROWS_AS((void)read_trace_csv(path), MalformedTrace);
  }
  SUBCASE("too many fields") {
    testkit::spit(path, "k,t_s,t_a,t_u\n0,0.1,0.2,0.3,0.4\n");
    CHECK_THROWS_AS((void)read_trace_csv(path), MalformedTrace);
  }
  SUBCASE("non-numeric field") {
    testkit::spit(path, "k,t_s,t_a,t_u\n0,0.1,soon,0.3\n");
    CHECK_THROWS_AS((void)read_trace_csv(path), MalformedTrace);
  }
  SUBCASE("trailing junk in a field") {
    testkit::spit(path, "k,t_s,t_a,t_u\n0,0.1,0.2 s,0.3\n");
    CHECK_THROWS_AS((void)read_trace_csv(path), MalformedTrace);
  }
  SUBCASE("fractional index") {
    testkit::spit(path, "k,t_s,t_a,t_u\n0.5,0.1,0.2,0.3\n");
    CHECK_THROWS_AS((void)read_trace_csv(path), MalformedTrace);
  }
  SUBCASE("negative index") {
    testkit::spit(path, "k,t_s,t_a,t_u\n-1,0.1,0.2,0.3\n");
    CHECK_THROWS_AS((void)read_trace_csv(path), MalformedTrace);
  }
  SUBCASE("error message names the file and line") {
    testkit::spit(path, "k,t_s,t_a,t_u\n0,0.1,0.2,0.3\nbad line\n");
    try {
      (void)read_trace_csv(path);
      FAIL("expected MalformedTrace");
    } catch (const MalformedTrace& e) {
      const std::string what = e.what();
      CHECK(what.find("t.csv") != std::string::npos);
      CHECK(what.find("3") != std::string::npos);
    }
  }
  SUBCASE("crlf line endings are tolerated") {
    testkit::spit(path, "k,t_s,t_a,t_u\r\n0,0.1,0.2,0.3\r\n");
    const TimingTrace tr = read_trace_csv(path);
    REQUIRE(tr.records.size() == 1);
    CHECK(tr.records[0].t_a == 0.2);
  }
  SUBCASE("header only yields an empty trace") {
    testkit::spit(path, "k,t_s,t_a,t_u\n");
    CHECK(read_trace_csv(path).records.empty());
  }
}

TEST_CASE("signals csv has the documented header and formatting") {
  const auto dir = testkit::scratch_dir("io_signals");
  const std::vector<SignalRecord> signals = {{0.0, 0.0, 1.0}, {1.5, 0.75, 0.25}};
  const auto path = dir / "signals.csv";
  write_signals_csv(path, signals);
  const std::string text = testkit::slurp(path);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,y,u");
  std::getline(in, line);
  CHECK(line == "0,0,1");
  std::getline(in, line);
  CHECK(line == "1.5,0.75,0.25");
}

TEST_CASE("profile csv lists omega and bound columns") {
  const auto dir = testkit::scratch_dir("io_profile");
  const std::vector<MarginProfilePoint> profile = {{0.001, 1000.0}, {1.0, 1.0}};
  const auto path = dir / "profile.csv";
  write_profile_csv(path, profile);
  const std::string text = testkit::slurp(path);
  CHECK(text == "omega,bound\n0.001,1000\n1,1\n");
}

TEST_CASE("violations csv carries kind names and window bounds") {
  const auto dir = testkit::scratch_dir("io_violations");
  const std::vector<TraceViolation> violations = {
      {4, ViolationKind::SamplingWindow, 6.31, {6.0, 6.4}},
      {9, ViolationKind::StateUpdateDeadline, 15.2, {13.6, 15.0}}};
  const auto path = dir / "violations.csv";
  write_violations_csv(path, violations);
  const std::string text = testkit::slurp(path);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,kind,observed,allowed_lo,allowed_hi");
  std::getline(in, line);
  CHECK(line.rfind("4,", 0) == 0);
  CHECK(line.find(to_string(ViolationKind::SamplingWindow)) != std::string::npos);
  std::getline(in, line);
  CHECK(line.find(to_string(ViolationKind::StateUpdateDeadline)) != std::string::npos);
}

TEST_CASE("writers create missing parent directories") {
  const auto dir = testkit::scratch_dir("io_mkdir");
  const auto nested = dir / "a" / "b" / "trace.csv";
  TimingTrace tr;
  tr.records = {{0, 0.1, 0.2, 0.15}};
  write_trace_csv(nested, tr);
  CHECK(std::filesystem::exists(nested));

  const auto text_path = dir / "c" / "report.txt";
  write_text_file(text_path, "hello\n");
  CHECK(testkit::slurp(text_path) == "hello\n");
}

TEST_CASE("writing to an unwritable path raises Error") {
  TimingTrace tr;
  tr.records = {{0, 0.1, 0.2, 0.15}};
  CHECK_THROWS_AS(write_trace_csv("/proc/nascd_forbidden/trace.csv", tr), Error);
}

TEST_CASE("identical inputs produce byte-identical files") {
  const auto dir = testkit::scratch_dir("io_deterministic");
  TimingTrace tr;
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t k = 0; k < 100; ++k) {
    tr.records.push_back({k, 1.5 * k + u(rng), 1.5 * k + 1.0, 1.5 * k + 0.5});
  }
  write_trace_csv(dir / "a.csv", tr);
  write_trace_csv(dir / "b.csv", tr);
  CHECK(testkit::slurp(dir / "a.csv") == testkit::slurp(dir / "b.csv"));
}
