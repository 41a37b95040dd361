#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nascd/contract.hpp"
#include "nascd/margin.hpp"
#include "nascd/simulator.hpp"

namespace nascd {

/// Shortest round-trip decimal form of v (%.17g), used for all CSV numerics
/// so identical values always serialize to identical bytes.
[[nodiscard]] std::string format_double(double v);

/// Human-readable time: engineering form with six significant digits, in ms
/// for magnitudes below one second, otherwise in seconds.
[[nodiscard]] std::string format_time(double seconds);

/// CSV emitters. Each writes a fixed header row and one record per line;
/// failures to open or write surface as Error.
void write_trace_csv(const std::filesystem::path& path, const TimingTrace& trace);
void write_signals_csv(const std::filesystem::path& path,
                       const std::vector<SignalRecord>& signals);
void write_profile_csv(const std::filesystem::path& path,
                       const std::vector<MarginProfilePoint>& profile);
void write_violations_csv(const std::filesystem::path& path,
                          const std::vector<TraceViolation>& violations);

/// Strict reader for the `k,t_s,t_a,t_u` trace format: exact header, four
/// numeric fields per line. Throws MalformedTrace on any deviation.
[[nodiscard]] TimingTrace read_trace_csv(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace nascd
