#include "nascd/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string_view>

#include "nascd/errors.hpp"

namespace nascd {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

[[noreturn]] void malformed(const std::filesystem::path& path, std::size_t line,
                            const std::string& what) {
  throw MalformedTrace("'" + path.string() + "' line " + std::to_string(line) + ": " + what);
}

// Strict double: the whole field must be consumed.
double parse_field(std::string_view field, const std::filesystem::path& path, std::size_t line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(std::string(field), &pos);
  } catch (const std::exception&) {
    malformed(path, line, "expected a number, got '" + std::string(field) + "'");
  }
  if (pos != field.size()) {
    malformed(path, line, "trailing characters in field '" + std::string(field) + "'");
  }
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_time(double seconds) {
  double v = seconds;
  const char* unit = " s";
  if (std::isfinite(v) && v != 0.0 && std::abs(v) < 1.0) {
    v *= 1000.0;
    unit = " ms";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.6g%s", v, unit);
  return buf;
}

void write_trace_csv(const std::filesystem::path& path, const TimingTrace& trace) {
  std::ofstream out = open_out(path);
  out << "k,t_s,t_a,t_u\n";
  for (const TraceRecord& r : trace.records) {
    out << r.k << ',' << format_double(r.t_s) << ',' << format_double(r.t_a) << ','
        << format_double(r.t_u) << '\n';
  }
  finish(out, path);
}

void write_signals_csv(const std::filesystem::path& path,
                       const std::vector<SignalRecord>& signals) {
  std::ofstream out = open_out(path);
  out << "t,y,u\n";
  for (const SignalRecord& s : signals) {
    out << format_double(s.t) << ',' << format_double(s.y) << ',' << format_double(s.u) << '\n';
  }
  finish(out, path);
}

void write_profile_csv(const std::filesystem::path& path,
                       const std::vector<MarginProfilePoint>& profile) {
  std::ofstream out = open_out(path);
  out << "omega,bound\n";
  for (const MarginProfilePoint& p : profile) {
    out << format_double(p.omega) << ',' << format_double(p.bound) << '\n';
  }
  finish(out, path);
}

void write_violations_csv(const std::filesystem::path& path,
                          const std::vector<TraceViolation>& violations) {
  std::ofstream out = open_out(path);
  out << "k,kind,observed,allowed_lo,allowed_hi\n";
  for (const TraceViolation& v : violations) {
    out << v.k << ',' << to_string(v.kind) << ',' << format_double(v.observed) << ','
        << format_double(v.allowed.lo) << ',' << format_double(v.allowed.hi) << '\n';
  }
  finish(out, path);
}

TimingTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedTrace("cannot open trace file '" + path.string() + "'");

  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) malformed(path, line_no, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "k,t_s,t_a,t_u") malformed(path, line_no, "expected header 'k,t_s,t_a,t_u'");

  TimingTrace trace;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_csv(line);
    if (fields.size() != 4) {
      malformed(path, line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    }
    const double k_val = parse_field(fields[0], path, line_no);
    if (k_val < 0.0 || k_val != std::floor(k_val)) {
      malformed(path, line_no, "k must be a non-negative integer");
    }
    TraceRecord r;
    r.k = static_cast<std::size_t>(k_val);
    r.t_s = parse_field(fields[1], path, line_no);
    r.t_a = parse_field(fields[2], path, line_no);
    r.t_u = parse_field(fields[3], path, line_no);
    trace.records.push_back(r);
  }
  return trace;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
  finish(out, path);
}

}  // namespace nascd
